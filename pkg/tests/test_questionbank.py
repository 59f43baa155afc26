"""Bank loading, validation, seeded instantiation and rendering."""

import random

import pytest

from prepmark.grading import grade
from prepmark.questionbank import (
    ConstraintUnsatisfiable,
    FileFormatError,
    instantiate,
    load_bank,
    render,
    seed_bank_text,
    synthesize_correct_response,
    synthesize_wrong_response,
    validate_bank,
)

SEED_BANK = seed_bank_text()


@pytest.fixture(scope="module")
def templates():
    return {t.id: t for t in load_bank(SEED_BANK)}


class TestSeedBank:
    def test_validates_clean(self):
        report = validate_bank(SEED_BANK)
        assert report.ok, report.format_text()

    def test_covers_all_topics_and_kinds(self, templates):
        topics = {t.topic for t in templates.values()}
        assert topics == {"Algebra", "Numbers", "Geometry", "Functions", "Calculus", "LogicAndSets"}
        kinds = {p.kind for t in templates.values() for p in t.parts}
        assert kinds == {
            "structural_poly",
            "equivalence",
            "antiderivative",
            "numeric_multi",
            "choice_single",
            "choice_multi",
            "line_sketch",
            "constraint",
        }

    def test_at_least_two_per_topic(self, templates):
        counts = {}
        for t in templates.values():
            counts[t.topic] = counts.get(t.topic, 0) + 1
        assert all(c >= 2 for c in counts.values()), counts
        assert len(templates) >= 12

    def test_logic_and_sets_is_self_learning(self, templates):
        for t in templates.values():
            if t.topic == "LogicAndSets":
                assert t.element == "self_learning"


class TestInstantiate:
    def test_determinism(self, templates):
        t = templates["algebra_expand_binomial"]
        assert instantiate(t, 7) == instantiate(t, 7)

    def test_params_stay_in_domain(self, templates):
        t = templates["algebra_expand_binomial"]
        for seed in range(1000):
            inst = instantiate(t, seed)
            assert inst.params["n"] in (3, 4, 5)
            assert inst.params["c"] in (1, 2, 3)

    def test_domain_coverage(self, templates):
        t = templates["calculus_integral_mixed"]
        seen = set()
        for seed in range(10_000):
            seen.add(instantiate(t, seed).params["k"])
            if seen == {2, 3, 4, 5}:
                break
        assert seen == {2, 3, 4, 5}

    def test_constraint_respected(self, templates):
        t = templates["geometry_gradient"]
        for seed in range(500):
            inst = instantiate(t, seed)
            assert inst.params["q"] != inst.params["p"]

    def test_substitution_reaches_specs(self, templates):
        t = templates["calculus_integral_mixed"]
        inst = instantiate(t, 3)
        k = inst.params["k"]
        assert f"{k}/x" in inst.body
        # the model answer resolves with the same parameter
        assert str(inst.parts[0].model_answer).startswith(f"{k}ln(x)")

    def test_unsatisfiable_constraints_raise(self, templates):
        from prepmark.questionbank.model import ParamSpec

        t = templates["geometry_gradient"]
        broken = type(t)(
            id=t.id,
            topic=t.topic,
            element=t.element,
            body=t.body,
            parts=t.parts,
            feedback=t.feedback,
            params=(
                ParamSpec(name="p", values=(1,), constraint=None),
                ParamSpec(name="q", values=(1,), constraint="q != p"),
            ),
        )
        with pytest.raises(ConstraintUnsatisfiable):
            instantiate(broken, 1)


class TestRender:
    def test_sketch_part_carries_canvas(self, templates):
        inst = instantiate(templates["geometry_line_equation_sketch"], 5)
        display = render(inst)
        sketch = display.parts[1]
        assert sketch.widget["input"] == "sketch"
        assert sketch.widget["canvas"] == {"x": [-3.0, 3.0], "y": [-3.0, 3.0]}

    def test_dropdown_parts_carry_arrow_options(self, templates):
        inst = instantiate(templates["logic_implications"], 5)
        display = render(inst)
        assert len(display.parts) == 5
        for part in display.parts:
            assert part.widget["input"] == "dropdown"
            assert [o["label"] for o in part.widget["options"]] == ["⇒", "⇐", "⇔"]

    def test_tickbox_part_has_six_options(self, templates):
        inst = instantiate(templates["numbers_rational_tickbox"], 5)
        display = render(inst)
        assert display.parts[0].widget["input"] == "checkboxes"
        assert len(display.parts[0].widget["options"]) == 6

    def test_display_never_contains_expected_answers(self, templates):
        import json

        inst = instantiate(templates["algebra_expand_binomial"], 11)
        blob = json.dumps(render(inst).to_json())
        correct = synthesize_correct_response(inst.parts[0])
        assert correct not in blob


class TestGradeability:
    def test_every_instance_grades_correct_and_wrong_responses(self, templates):
        rng = random.Random(99)
        for t in templates.values():
            for seed in (1, 2, 3):
                inst = instantiate(t, seed)
                for part in inst.parts:
                    good = synthesize_correct_response(part)
                    assert grade(part.spec, good).correct, (t.id, part.index, good)
                    bad = synthesize_wrong_response(part, rng)
                    out = grade(part.spec, bad)  # must not raise
                    assert 0.0 <= out.score <= 1.0


class TestValidationFailures:
    def test_bad_yaml(self):
        with pytest.raises(FileFormatError):
            load_bank("::: not yaml {{{")

    def test_wrong_shape(self):
        with pytest.raises(FileFormatError):
            load_bank("just_a_key: 1")

    def test_empty_bank_warns(self):
        report = validate_bank("templates: []")
        assert report.ok
        assert "no templates" in report.warnings

    def test_unparseable_expected_reports_offset(self):
        bank = """
templates:
  - id: broken
    topic: Algebra
    element: diagnostic
    body: "Expand."
    parts:
      - prompt: "p"
        kind: structural_poly
        expected: "(a-1"
    feedback: {on_correct: "", on_wrong: ""}
"""
        report = validate_bank(bank)
        assert not report.ok
        assert any(issue.offset is not None for issue in report.errors)

    def test_undeclared_placeholder(self):
        bank = """
templates:
  - id: broken
    topic: Algebra
    element: diagnostic
    body: "Expand (a-{q})^2."
    parts:
      - prompt: "p"
        kind: structural_poly
        expected: "(a-1)^2"
    feedback: {on_correct: "", on_wrong: ""}
"""
        report = validate_bank(bank)
        assert any("placeholder {q}" in issue.message for issue in report.errors)

    def test_unused_param(self):
        bank = """
templates:
  - id: broken
    topic: Algebra
    element: diagnostic
    body: "Expand (a-1)^2."
    params:
      - name: n
        values: [1, 2]
    parts:
      - prompt: "p"
        kind: structural_poly
        expected: "(a-1)^2"
    feedback: {on_correct: "", on_wrong: ""}
"""
        report = validate_bank(bank)
        assert any("never used" in issue.message for issue in report.errors)

    def test_diagnostic_logic_rejected(self):
        bank = """
templates:
  - id: broken
    topic: LogicAndSets
    element: diagnostic
    body: "Pick."
    parts:
      - prompt: "p"
        kind: choice_single
        options: [{id: a, label: "A"}, {id: b, label: "B"}]
        correct: [a]
    feedback: {on_correct: "", on_wrong: ""}
"""
        report = validate_bank(bank)
        assert any("self_learning" in issue.message for issue in report.errors)

    def test_wrong_model_answer_caught(self):
        bank = """
templates:
  - id: broken
    topic: Algebra
    element: diagnostic
    body: "Expand (a-1)^2."
    parts:
      - prompt: "p"
        kind: structural_poly
        expected: "(a-1)^2"
        model_answer: "a^2-2a+2"
    feedback: {on_correct: "", on_wrong: ""}
"""
        report = validate_bank(bank)
        assert any("full marks" in issue.message for issue in report.errors)
