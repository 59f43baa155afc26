/** Part input widgets.
 *
 * Each builder returns a root element plus a way to read the current
 * response.  Locked parts render as a completed badge with no input
 * element at all.  Expression entry is a plain text field with a
 * debounced server-side parse preview.
 */

import { ApiClient, debounce } from "./api.js";
import { createSketchWidget, SketchWidget } from "./sketch.js";
import type { DisplayPart, ResponseValue } from "./types.js";

export interface PartWidget {
  element: HTMLElement;
  /** null when the student has not produced a usable response yet */
  read: () => ResponseValue | null;
  /** sketch parts report false while their handles coincide */
  valid: () => boolean;
}

export function renderLockedPart(doc: Document, part: DisplayPart): HTMLElement {
  const root = doc.createElement("div");
  root.className = "part locked";
  root.dataset["partId"] = part.part_id;
  const prompt = doc.createElement("p");
  prompt.className = "prompt";
  prompt.textContent = part.prompt;
  root.appendChild(prompt);
  const badge = doc.createElement("span");
  badge.className = "badge completed";
  badge.textContent = "completed ✓";
  root.appendChild(badge);
  return root;
}

export function createPartWidget(
  doc: Document,
  part: DisplayPart,
  api: ApiClient,
  previewDelayMs = 250,
): PartWidget {
  const root = doc.createElement("div");
  root.className = `part open kind-${part.widget.input}`;
  root.dataset["partId"] = part.part_id;
  const prompt = doc.createElement("p");
  prompt.className = "prompt";
  prompt.textContent = part.prompt;
  root.appendChild(prompt);

  switch (part.widget.input) {
    case "expression": {
      const input = doc.createElement("input");
      input.type = "text";
      input.className = "expression-input";
      input.spellcheck = false;
      const preview = doc.createElement("div");
      preview.className = "parse-preview";
      const refresh = debounce(async (text: string) => {
        if (!text.trim()) {
          preview.textContent = "";
          return;
        }
        try {
          const result = await api.preview(text);
          preview.textContent = result.ok
            ? `reads as: ${result.rendered}`
            : result.message;
          preview.classList.toggle("parse-error", !result.ok);
        } catch {
          preview.textContent = ""; // preview is best-effort only
        }
      }, previewDelayMs);
      input.addEventListener("input", () => refresh(input.value));
      root.appendChild(input);
      root.appendChild(preview);
      return {
        element: root,
        read: () => (input.value.trim() ? input.value : null),
        valid: () => true,
      };
    }
    case "number": {
      const input = doc.createElement("input");
      input.type = "text";
      input.inputMode = "decimal";
      input.className = "number-input";
      root.appendChild(input);
      return {
        element: root,
        read: () => (input.value.trim() ? input.value.trim() : null),
        valid: () => true,
      };
    }
    case "dropdown": {
      const select = doc.createElement("select");
      const placeholder = doc.createElement("option");
      placeholder.value = "";
      placeholder.textContent = "choose…";
      select.appendChild(placeholder);
      for (const option of part.widget.options ?? []) {
        const el = doc.createElement("option");
        el.value = option.id;
        el.textContent = option.label; // arrows render as plain unicode text
        select.appendChild(el);
      }
      root.appendChild(select);
      return {
        element: root,
        read: () => (select.value ? select.value : null),
        valid: () => true,
      };
    }
    case "checkboxes": {
      const boxes: HTMLInputElement[] = [];
      for (const option of part.widget.options ?? []) {
        const label = doc.createElement("label");
        label.className = "tickbox";
        const box = doc.createElement("input");
        box.type = "checkbox";
        box.value = option.id;
        boxes.push(box);
        label.appendChild(box);
        label.appendChild(doc.createTextNode(" " + option.label));
        root.appendChild(label);
      }
      return {
        element: root,
        read: () => boxes.filter((b) => b.checked).map((b) => b.value),
        valid: () => true,
      };
    }
    case "sketch": {
      const extent = part.widget.canvas ?? { x: [-3, 3], y: [-3, 3] };
      const note = doc.createElement("div");
      note.className = "sketch-note";
      const widget: SketchWidget = createSketchWidget(doc, extent, (state) => {
        note.textContent =
          Math.hypot(
            state.points[1][0] - state.points[0][0],
            state.points[1][1] - state.points[0][1],
          ) < 1e-9
            ? "move the two points apart to draw a line"
            : "";
      });
      root.appendChild(widget.element);
      root.appendChild(note);
      const holder = root as HTMLElement & { sketch?: SketchWidget };
      holder.sketch = widget; // reachable for tests and keyboard fallback
      return {
        element: root,
        read: () => (widget.valid() ? widget.response() : null),
        valid: () => widget.valid(),
      };
    }
    case "bindings": {
      const inputs = new Map<string, HTMLInputElement>();
      for (const name of part.widget.variables ?? []) {
        const label = doc.createElement("label");
        label.className = "binding";
        label.appendChild(doc.createTextNode(`${name} = `));
        const input = doc.createElement("input");
        input.type = "text";
        input.dataset["variable"] = name;
        inputs.set(name, input);
        label.appendChild(input);
        root.appendChild(label);
      }
      return {
        element: root,
        read: () => {
          const out: Record<string, string> = {};
          for (const [name, input] of inputs) {
            if (!input.value.trim()) return null;
            out[name] = input.value.trim();
          }
          return out;
        },
        valid: () => true,
      };
    }
    default: {
      const unsupported = doc.createElement("p");
      unsupported.textContent = `unsupported widget: ${part.widget.input}`;
      root.appendChild(unsupported);
      return { element: root, read: () => null, valid: () => true };
    }
  }
}
