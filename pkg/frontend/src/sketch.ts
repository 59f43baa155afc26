/** Two-point line-sketch widget.
 *
 * The student drags two handles on a set of axes; the implied line is
 * previewed live and the handle coordinates (in math units) are what gets
 * submitted.  Handles clamp to the canvas extent, and coincident handles
 * invalidate the sketch so submission can be disabled with an inline
 * message.  Rendering is SVG, so there is no plugin and no bitmap canvas
 * dependency.
 */

import type { CanvasExtent, Point } from "./types.js";

export interface SketchState {
  extent: CanvasExtent;
  points: [Point, Point];
  dragging: 0 | 1 | null;
}

export const COINCIDENT_EPS = 1e-9;

/** Deterministic initial placement: opposite canvas corners. */
export function initialSketchState(extent: CanvasExtent): SketchState {
  const [x0, x1] = extent.x;
  const [y0, y1] = extent.y;
  return {
    extent,
    points: [
      [x0, y0],
      [x1, y1],
    ],
    dragging: null,
  };
}

export function clampToExtent(point: Point, extent: CanvasExtent): Point {
  const [x0, x1] = extent.x;
  const [y0, y1] = extent.y;
  return [
    Math.min(x1, Math.max(x0, point[0])),
    Math.min(y1, Math.max(y0, point[1])),
  ];
}

export function movePoint(state: SketchState, which: 0 | 1, to: Point): SketchState {
  const clamped = clampToExtent(to, state.extent);
  const points: [Point, Point] =
    which === 0 ? [clamped, state.points[1]] : [state.points[0], clamped];
  return { ...state, points };
}

export function pointsCoincide(state: SketchState): boolean {
  const [[x1, y1], [x2, y2]] = state.points;
  return Math.hypot(x2 - x1, y2 - y1) < COINCIDENT_EPS;
}

export function toResponse(state: SketchState): [Point, Point] {
  return [
    [state.points[0][0], state.points[0][1]],
    [state.points[1][0], state.points[1][1]],
  ];
}

// -- DOM binding ------------------------------------------------------------

const SVG_NS = "http://www.w3.org/2000/svg";
const VIEW_SIZE = 300;

export interface SketchWidget {
  element: SVGSVGElement;
  state: () => SketchState;
  /** False while the two handles coincide; submission should be disabled. */
  valid: () => boolean;
  response: () => [Point, Point];
  /** Programmatic drag used by both tests and keyboard fallback. */
  dragTo(which: 0 | 1, point: Point): void;
}

interface MetricsProvider {
  (el: SVGSVGElement): { left: number; top: number; width: number; height: number };
}

const defaultMetrics: MetricsProvider = (el) => {
  const rect = el.getBoundingClientRect();
  return { left: rect.left, top: rect.top, width: rect.width, height: rect.height };
};

export function createSketchWidget(
  doc: Document,
  extent: CanvasExtent,
  onChange: (state: SketchState) => void = () => {},
  metrics: MetricsProvider = defaultMetrics,
): SketchWidget {
  let state = initialSketchState(extent);
  const [x0, x1] = extent.x;
  const [y0, y1] = extent.y;

  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("class", "sketch-canvas");
  svg.setAttribute("viewBox", `0 0 ${VIEW_SIZE} ${VIEW_SIZE}`);
  svg.setAttribute("width", String(VIEW_SIZE));
  svg.setAttribute("height", String(VIEW_SIZE));

  const toSvg = ([x, y]: Point): Point => [
    ((x - x0) / (x1 - x0)) * VIEW_SIZE,
    ((y1 - y) / (y1 - y0)) * VIEW_SIZE, // svg y grows downwards
  ];
  const toMath = (sx: number, sy: number): Point => [
    x0 + (sx / VIEW_SIZE) * (x1 - x0),
    y1 - (sy / VIEW_SIZE) * (y1 - y0),
  ];

  // axes through math (0, 0) when visible
  for (const axis of ["x", "y"] as const) {
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("class", "sketch-axis");
    if (axis === "x") {
      const [, sy] = toSvg([0, 0]);
      line.setAttribute("x1", "0");
      line.setAttribute("x2", String(VIEW_SIZE));
      line.setAttribute("y1", String(sy));
      line.setAttribute("y2", String(sy));
    } else {
      const [sx] = toSvg([0, 0]);
      line.setAttribute("x1", String(sx));
      line.setAttribute("x2", String(sx));
      line.setAttribute("y1", "0");
      line.setAttribute("y2", String(VIEW_SIZE));
    }
    svg.appendChild(line);
  }

  const preview = doc.createElementNS(SVG_NS, "line");
  preview.setAttribute("class", "sketch-preview-line");
  svg.appendChild(preview);

  const handles = [0, 1].map((i) => {
    const circle = doc.createElementNS(SVG_NS, "circle");
    circle.setAttribute("class", "sketch-handle");
    circle.setAttribute("r", "7");
    circle.setAttribute("data-handle", String(i));
    svg.appendChild(circle);
    return circle;
  });

  function extendThrough([p, q]: [Point, Point]): [Point, Point] {
    // stretch the preview segment across the view so it reads as a line
    const [sp, sq] = [toSvg(p), toSvg(q)];
    const dx = sq[0] - sp[0];
    const dy = sq[1] - sp[1];
    const norm = Math.hypot(dx, dy);
    if (norm < 1e-12) return [sp, sq];
    const stretch = (2 * VIEW_SIZE) / norm;
    return [
      [sp[0] - dx * stretch, sp[1] - dy * stretch],
      [sq[0] + dx * stretch, sq[1] + dy * stretch],
    ];
  }

  function redraw(): void {
    state.points.forEach((point, i) => {
      const [sx, sy] = toSvg(point);
      handles[i]!.setAttribute("cx", String(sx));
      handles[i]!.setAttribute("cy", String(sy));
    });
    if (pointsCoincide(state)) {
      preview.setAttribute("visibility", "hidden");
    } else {
      preview.removeAttribute("visibility");
      const [a, b] = extendThrough(state.points);
      preview.setAttribute("x1", String(a[0]));
      preview.setAttribute("y1", String(a[1]));
      preview.setAttribute("x2", String(b[0]));
      preview.setAttribute("y2", String(b[1]));
    }
  }

  function update(next: SketchState): void {
    state = next;
    redraw();
    onChange(state);
  }

  function pointerMath(event: MouseEvent): Point {
    const box = metrics(svg);
    const sx = ((event.clientX - box.left) / (box.width || VIEW_SIZE)) * VIEW_SIZE;
    const sy = ((event.clientY - box.top) / (box.height || VIEW_SIZE)) * VIEW_SIZE;
    return toMath(sx, sy);
  }

  handles.forEach((circle, i) => {
    circle.addEventListener("mousedown", (event) => {
      event.preventDefault();
      update({ ...state, dragging: i as 0 | 1 });
    });
  });
  svg.addEventListener("mousemove", (event) => {
    if (state.dragging === null) return;
    update(movePoint(state, state.dragging, pointerMath(event as MouseEvent)));
  });
  const stop = () => {
    if (state.dragging !== null) update({ ...state, dragging: null });
  };
  svg.addEventListener("mouseup", stop);
  svg.addEventListener("mouseleave", stop);

  redraw();
  return {
    element: svg,
    state: () => state,
    valid: () => !pointsCoincide(state),
    response: () => toResponse(state),
    dragTo: (which, point) => update(movePoint(state, which, point)),
  };
}
