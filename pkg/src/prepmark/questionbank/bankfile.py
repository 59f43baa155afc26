"""Bank document loading and validation.

The bank is one human-editable YAML document with a top-level `templates`
list; expressions are stored in the engine grammar.  validate_bank walks
every template and reports everything wrong at once (undeclared or unused
params, empty domains, bad expressions with offsets, grader field
problems, model answers that do not grade correct), so authors fix a bank
in one round trip.
"""

from __future__ import annotations

import itertools
from pathlib import Path
from typing import Any

import yaml

from ..exprcore import ExprSyntaxError
from ..exprcore.lexer import CONSTANTS, FUNCTIONS, KEYWORDS
from ..grading import grade
from ..grading.constraints import parse_predicate, predicate_variables
from .instantiate import build_grader_spec, instantiate, placeholders_in, substitute
from .model import (
    ELEMENTS,
    PART_KINDS,
    TOPICS,
    BankIssue,
    Feedback,
    FileFormatError,
    ParamSpec,
    PartTemplate,
    QuestionTemplate,
    ValidationReport,
)

_RESERVED_PARAM_NAMES = set(CONSTANTS) | set(KEYWORDS) | set(FUNCTIONS)

_EXPRESSION_FIELDS = ("expected", "integrand", "slope", "intercept")


def _param_from_yaml(raw: dict) -> ParamSpec:
    name = str(raw["name"])
    if "values" in raw:
        values = tuple(int(v) for v in raw["values"])
    elif "domain" in raw:
        dom = raw["domain"]
        values = tuple(range(int(dom["min"]), int(dom["max"]) + 1, int(dom.get("step", 1))))
    else:
        raise FileFormatError(f"param {name!r} needs 'values' or 'domain'")
    return ParamSpec(name=name, values=values, constraint=raw.get("constraints"))


def _template_from_yaml(raw: dict) -> QuestionTemplate:
    feedback_raw = raw.get("feedback") or {}
    parts = []
    for part_raw in raw.get("parts", ()):
        part_raw = dict(part_raw)
        prompt = str(part_raw.pop("prompt", ""))
        kind = str(part_raw.pop("kind", ""))
        model_answer = part_raw.pop("model_answer", None)
        parts.append(
            PartTemplate(prompt=prompt, kind=kind, fields=part_raw, model_answer=model_answer)
        )
    return QuestionTemplate(
        id=str(raw["id"]),
        topic=str(raw.get("topic", "")),
        element=str(raw.get("element", "")),
        body=str(raw.get("body", "")),
        preamble=raw.get("preamble"),
        params=tuple(_param_from_yaml(p) for p in raw.get("params", ())),
        parts=tuple(parts),
        feedback=Feedback(
            on_correct=str(feedback_raw.get("on_correct", "")),
            on_wrong=str(feedback_raw.get("on_wrong", "")),
            links=tuple(feedback_raw.get("links", ()) or ()),
        ),
        module_links=tuple(raw.get("module_links", ()) or ()),
    )


def load_bank(source: str | Path) -> list[QuestionTemplate]:
    """Load templates from a YAML document (path or text).

    Raises FileFormatError when the document is not a bank.
    """
    text = Path(source).read_text() if isinstance(source, Path) else source
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise FileFormatError(f"not valid YAML: {exc}") from exc
    if doc is None:
        return []
    if not isinstance(doc, dict) or not isinstance(doc.get("templates", None), list):
        raise FileFormatError("bank document must have a top-level 'templates' list")
    try:
        return [_template_from_yaml(t) for t in doc["templates"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"malformed template entry: {exc}") from exc


def _collect_strings(value: Any) -> list[str]:
    if isinstance(value, str):
        return [value]
    if isinstance(value, dict):
        return [s for v in value.values() for s in _collect_strings(v)]
    if isinstance(value, (list, tuple)):
        return [s for v in value for s in _collect_strings(v)]
    return []


def _check_template(t: QuestionTemplate, issues: list[BankIssue]) -> None:
    def err(location: str, message: str, offset: int | None = None) -> None:
        issues.append(BankIssue(t.id, location, message, offset))

    if t.topic not in TOPICS:
        err("topic", f"unknown topic {t.topic!r}")
    if t.element not in ELEMENTS:
        err("element", f"unknown element {t.element!r}")
    if t.topic == "LogicAndSets" and t.element != "self_learning":
        err("element", "LogicAndSets templates must be self_learning")
    if not t.parts:
        err("parts", "template has no parts")

    declared = {p.name for p in t.params}
    for p in t.params:
        if len(p.name) != 1 or not p.name.isalpha():
            err(f"params/{p.name}", "param names must be single letters")
        if p.name in _RESERVED_PARAM_NAMES:
            err(f"params/{p.name}", f"{p.name!r} is reserved")
        if not p.values:
            err(f"params/{p.name}", "empty value domain")
        if p.constraint:
            try:
                node = parse_predicate(p.constraint)
                unknown = predicate_variables(node) - declared
                if unknown:
                    err(f"params/{p.name}", f"constraint uses undeclared {sorted(unknown)}")
            except ExprSyntaxError as exc:
                err(f"params/{p.name}", f"bad constraint: {exc}", exc.offset)

    # placeholder discipline: all used are declared, all declared are used
    used: set[str] = set()
    strings = _collect_strings(t.body)
    strings += _collect_strings(t.feedback.on_correct)
    strings += _collect_strings(t.feedback.on_wrong)
    if t.preamble:
        strings += _collect_strings(t.preamble)
    for part in t.parts:
        strings += _collect_strings(part.prompt)
        strings += _collect_strings(dict(part.fields))
        if part.model_answer is not None:
            strings += _collect_strings(part.model_answer)
    for s in strings:
        used |= placeholders_in(s)
    for name in sorted(used - declared):
        err("params", f"placeholder {{{name}}} is not declared")
    for name in sorted(declared - used):
        err("params", f"param {name!r} is declared but never used")

    # constrained domains must be satisfiable; enumerate when cheap
    if t.params and all(p.name in declared for p in t.params):
        combos = 1
        for p in t.params:
            combos *= max(len(p.values), 1)
        if 0 < combos <= 20_000:
            from fractions import Fraction

            from ..grading.constraints import evaluate_predicate

            names = [p.name for p in t.params]
            satisfiable = False
            for combo in itertools.product(*(p.values for p in t.params)):
                bindings = {n: Fraction(v) for n, v in zip(names, combo)}
                ok = True
                for p in t.params:
                    if p.constraint and not evaluate_predicate(
                        parse_predicate(p.constraint), bindings
                    ):
                        ok = False
                        break
                if ok:
                    satisfiable = True
                    break
            if not satisfiable:
                err("params", "no parameter combination satisfies the constraints")
                return  # instantiation below would not terminate usefully

    for index, part in enumerate(t.parts):
        where = f"parts[{index}]"
        if part.kind not in PART_KINDS:
            err(where, f"unknown kind {part.kind!r}")
            continue
        sample = {p.name: p.values[0] for p in t.params}
        fields = substitute(dict(part.fields), sample)
        for field_name in _EXPRESSION_FIELDS:
            if field_name in fields:
                try:
                    build_grader_spec(part.kind, fields, part_seed=1)
                except ExprSyntaxError as exc:
                    err(f"{where}/{field_name}", str(exc), exc.offset)
                except (KeyError, ValueError, TypeError) as exc:
                    err(where, f"bad grader fields: {exc}")
                break
        else:
            try:
                build_grader_spec(part.kind, fields, part_seed=1)
            except ExprSyntaxError as exc:
                err(where, str(exc), exc.offset)
            except (KeyError, ValueError, TypeError) as exc:
                err(where, f"bad grader fields: {exc}")
        if part.kind == "constraint" and "predicate" in fields:
            try:
                parse_predicate(str(fields["predicate"]))
            except ExprSyntaxError as exc:
                err(f"{where}/predicate", str(exc), exc.offset)
        if part.kind in ("antiderivative", "constraint") and part.model_answer is None:
            err(where, "this kind needs a model_answer (validation and simulation aid)")


def _check_model_answers(t: QuestionTemplate, issues: list[BankIssue]) -> None:
    """Instantiate once and regrade every model answer: each must earn
    full marks under its own spec."""
    try:
        inst = instantiate(t, seed=0)
    except Exception as exc:
        issues.append(BankIssue(t.id, "instantiate", f"cannot instantiate: {exc}"))
        return
    from .answers import synthesize_correct_response

    for part in inst.parts:
        try:
            response = synthesize_correct_response(part)
        except Exception as exc:
            issues.append(
                BankIssue(t.id, f"parts[{part.index}]", f"no correct response derivable: {exc}")
            )
            continue
        try:
            outcome = grade(part.spec, response)
        except Exception as exc:
            issues.append(
                BankIssue(t.id, f"parts[{part.index}]", f"model answer fails to grade: {exc}")
            )
            continue
        if not outcome.correct:
            issues.append(
                BankIssue(
                    t.id,
                    f"parts[{part.index}]",
                    f"model answer does not earn full marks "
                    f"(score {outcome.score}, flags {sorted(outcome.flags)})",
                )
            )


def validate_bank(source: str | Path) -> ValidationReport:
    """Validate a bank document; the report lists every problem found."""
    templates = load_bank(source)
    report = ValidationReport(template_count=len(templates))
    if not templates:
        report.warnings.append("no templates")
        return report
    seen_ids: set[str] = set()
    for t in templates:
        if t.id in seen_ids:
            report.errors.append(BankIssue(t.id, "id", "duplicate template id"))
            continue
        seen_ids.add(t.id)
        before = len(report.errors)
        _check_template(t, report.errors)
        if len(report.errors) == before:
            _check_model_answers(t, report.errors)
    return report
