"""Seeded parameter resolution: template -> concrete question instance."""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Any, Mapping

from ..exprcore import SamplingConfig, parse
from ..exprcore.evaluate import constant_value
from ..grading.constraints import evaluate_predicate, parse_predicate
from ..grading.specs import (
    AntiderivativeSpec,
    ChoiceSpec,
    ConstraintSpec,
    EquivalenceSpec,
    GraderSpec,
    Line,
    LineSketchSpec,
    NumericMultiSpec,
    StructuralPolynomialSpec,
)
from .model import (
    ConstraintUnsatisfiable,
    DisplayPart,
    DisplayQuestion,
    InstancePart,
    QuestionInstance,
    QuestionTemplate,
)

MAX_DRAWS = 10_000

_PLACEHOLDER = re.compile(r"\{([A-Za-z])\}")


def placeholders_in(text: str) -> set[str]:
    return set(_PLACEHOLDER.findall(text))


def substitute(value: Any, params: Mapping[str, int]) -> Any:
    """Replace {p} placeholders throughout strings, lists and mappings."""
    if isinstance(value, str):
        return _PLACEHOLDER.sub(lambda m: str(params[m.group(1)]), value)
    if isinstance(value, Mapping):
        return {k: substitute(v, params) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [substitute(v, params) for v in value]
    return value


def _as_number(value: Any) -> float:
    """Bank fields holding numbers may be written as constant expressions
    ("sqrt(9)", "{m}+{r}" after substitution)."""
    if isinstance(value, (int, float)):
        return float(value)
    return float(constant_value(parse(str(value))))


def _sampling_from(fields: Mapping[str, Any], part_seed: int) -> SamplingConfig:
    raw = dict(fields.get("sampling") or {})
    kwargs: dict[str, Any] = {"rng_seed": part_seed}
    if "point_count" in raw:
        kwargs["point_count"] = int(raw["point_count"])
    if "relative_tolerance" in raw:
        kwargs["relative_tolerance"] = float(raw["relative_tolerance"])
    if "max_resamples" in raw:
        kwargs["max_resamples"] = int(raw["max_resamples"])
    if "domain" in raw:
        lo, hi = raw["domain"]
        kwargs["domain"] = (float(lo), float(hi))
    if "var_domains" in raw:
        kwargs["var_domains"] = {
            name: (float(lo), float(hi)) for name, (lo, hi) in raw["var_domains"].items()
        }
    return SamplingConfig(**kwargs)


def build_grader_spec(kind: str, fields: Mapping[str, Any], part_seed: int) -> GraderSpec:
    """Concrete grader spec from (already substituted) bank fields."""
    if kind == "structural_poly":
        return StructuralPolynomialSpec(expected=parse(str(fields["expected"])))
    if kind == "equivalence":
        return EquivalenceSpec(
            expected=parse(str(fields["expected"])),
            sampling=_sampling_from(fields, part_seed),
        )
    if kind == "antiderivative":
        return AntiderivativeSpec(
            integrand=parse(str(fields["integrand"])),
            var=str(fields.get("var", "x")),
            constant_symbol=str(fields.get("constant_symbol", "C")),
            penalty=float(fields.get("penalty", 0.1)),
            sampling=_sampling_from(fields, part_seed),
        )
    if kind == "numeric_multi":
        return NumericMultiSpec(
            accepted=tuple(_as_number(v) for v in fields["accepted"]),
            abs_tolerance=float(fields.get("abs_tolerance", 1e-9)),
        )
    if kind in ("choice_single", "choice_multi"):
        options = [dict(o) for o in fields["options"]]
        return ChoiceSpec(
            options=tuple(str(o["id"]) for o in options),
            correct=frozenset(str(c) for c in fields["correct"]),
            mode="single" if kind == "choice_single" else "multi",
            labels=tuple(str(o.get("label", o["id"])) for o in options),
        )
    if kind == "line_sketch":
        canvas = fields.get("canvas", [[-3, 3], [-3, 3]])
        return LineSketchSpec(
            target=Line(
                slope=_as_number(fields["slope"]),
                intercept=_as_number(fields["intercept"]),
            ),
            slope_tol=float(fields.get("slope_tol", 0.05)),
            intercept_tol=float(fields.get("intercept_tol", 0.05)),
            canvas_x=(float(canvas[0][0]), float(canvas[0][1])),
            canvas_y=(float(canvas[1][0]), float(canvas[1][1])),
        )
    if kind == "constraint":
        return ConstraintSpec(
            predicate=str(fields["predicate"]),
            variables=tuple(str(v) for v in fields["variables"]),
        )
    raise ValueError(f"unknown part kind {kind!r}")


def _constraints_ok(template: QuestionTemplate, draw: Mapping[str, int]) -> bool:
    bindings = {name: Fraction(value) for name, value in draw.items()}
    for param in template.params:
        if param.constraint:
            if not evaluate_predicate(parse_predicate(param.constraint), bindings):
                return False
    return True


def instantiate(template: QuestionTemplate, seed: int) -> QuestionInstance:
    """Resolve parameters with a PRNG seeded by (seed, template id).

    Deterministic: the same (template, seed) pair always produces an
    identical instance, including per-part sampling seeds.  Raises
    ConstraintUnsatisfiable when rejection sampling exceeds its budget.
    """
    rng = random.Random(f"{seed}:{template.id}")
    draw: dict[str, int] = {}
    for _ in range(MAX_DRAWS):
        draw = {p.name: rng.choice(p.values) for p in template.params}
        if _constraints_ok(template, draw):
            break
    else:
        raise ConstraintUnsatisfiable(
            f"no parameter draw for {template.id} satisfied its constraints"
        )

    parts = []
    for index, part in enumerate(template.parts):
        part_seed = rng.getrandbits(63)
        fields = substitute(dict(part.fields), draw)
        spec = build_grader_spec(part.kind, fields, part_seed)
        model = substitute(part.model_answer, draw) if part.model_answer is not None else None
        parts.append(
            InstancePart(
                index=index,
                prompt=substitute(part.prompt, draw),
                kind=part.kind,
                spec=spec,
                model_answer=model,
            )
        )
    feedback = template.feedback
    return QuestionInstance(
        template_id=template.id,
        seed=seed,
        params=dict(draw),
        body=substitute(template.body, draw),
        preamble=substitute(template.preamble, draw) if template.preamble else None,
        parts=tuple(parts),
        feedback=type(feedback)(
            on_correct=substitute(feedback.on_correct, draw),
            on_wrong=substitute(feedback.on_wrong, draw),
            links=feedback.links,
        ),
        module_links=template.module_links,
    )


def _widget_for(part: InstancePart) -> dict:
    spec = part.spec
    if isinstance(spec, (StructuralPolynomialSpec, EquivalenceSpec, AntiderivativeSpec)):
        return {"input": "expression"}
    if isinstance(spec, NumericMultiSpec):
        return {"input": "number"}
    if isinstance(spec, ChoiceSpec):
        labels = spec.labels or spec.options
        options = [{"id": o, "label": l} for o, l in zip(spec.options, labels)]
        return {
            "input": "dropdown" if spec.mode == "single" else "checkboxes",
            "options": options,
        }
    if isinstance(spec, LineSketchSpec):
        return {
            "input": "sketch",
            "canvas": {"x": list(spec.canvas_x), "y": list(spec.canvas_y)},
        }
    assert isinstance(spec, ConstraintSpec)
    return {"input": "bindings", "variables": list(spec.variables)}


def render(inst: QuestionInstance) -> DisplayQuestion:
    """Student-facing view: body text plus widget descriptors.

    Deliberately omits grader internals, so no expected answer can leak
    through this surface.
    """
    return DisplayQuestion(
        template_id=inst.template_id,
        body=inst.body,
        preamble=inst.preamble,
        parts=tuple(
            DisplayPart(
                index=p.index,
                kind=p.kind,
                prompt=p.prompt,
                widget=_widget_for(p),
            )
            for p in inst.parts
        ),
    )
