"""Correlation reports, scatter export, and delimited-file ingest."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import yaml

from .stats import DegenerateSample, PairedSample, combined_predictor, pearson
from .tariff import (
    Qualification,
    StudentOutcome,
    TariffTable,
    cohort_filter,
    exam_average,
    maths_only_tariff,
    total_tariff,
)

PREDICTOR_LABELS = ("EPT score", "Total entry tariff", "'Maths-only'")


@dataclass(frozen=True)
class CorrelationRow:
    predictor: str
    r: float

    @property
    def r_2dp(self) -> str:
        return f"{self.r:.2f}"


@dataclass(frozen=True)
class CorrelationReport:
    rows: tuple[CorrelationRow, ...]
    included: int
    excluded: int
    lambda_star: float | None = None
    r_star: float | None = None

    def to_json(self) -> dict:
        return {
            "rows": [
                {"predictor": row.predictor, "r": row.r, "r_2dp": row.r_2dp}
                for row in self.rows
            ],
            "included_students": self.included,
            "excluded_students": self.excluded,
            "combined": (
                None
                if self.lambda_star is None
                else {"lambda_star": self.lambda_star, "r_star": self.r_star}
            ),
        }

    def format_text(self) -> str:
        """Two-column table, correlations to two decimals."""
        width = max(len(r.predictor) for r in self.rows) + 4
        lines = [f"{'Examination VS':<{width}}r"]
        for row in self.rows:
            lines.append(f"{row.predictor:<{width}}{row.r_2dp}")
        lines.append("")
        lines.append(f"included: {self.included}  excluded: {self.excluded}")
        if self.lambda_star is not None:
            lines.append(
                f"best combined predictor: lambda* = {self.lambda_star:.2f}"
                f" (r = {self.r_star:.4f})"
            )
        return "\n".join(lines)


def correlation_report(
    students: list[StudentOutcome],
    table: TariffTable,
    with_combined: bool = True,
) -> CorrelationReport:
    """Correlate the exam average against the three predictors."""
    included = cohort_filter(students)
    excluded = len(students) - len(included)
    if len(included) < 3:
        raise DegenerateSample(f"only {len(included)} complete students")
    exams = [exam_average(s) for s in included]
    epts = [s.ept_score for s in included]
    totals = [float(total_tariff(s, table)) for s in included]
    maths = [float(maths_only_tariff(s, table)) for s in included]
    rows = tuple(
        CorrelationRow(label, pearson(PairedSample(tuple(xs), tuple(exams), label, "exam")))
        for label, xs in zip(PREDICTOR_LABELS, (epts, totals, maths))
    )
    lambda_star = r_star = None
    if with_combined:
        lambda_star, r_star = combined_predictor(epts, totals, exams)
    return CorrelationReport(
        rows=rows,
        included=len(included),
        excluded=excluded,
        lambda_star=lambda_star,
        r_star=r_star,
    )


# -- delimited-file interfaces --------------------------------------------------


def scatter_export(students: list[StudentOutcome]) -> str:
    """One (ept_score, exam_avg) row per included student."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["ept_score", "exam_avg"])
    for s in cohort_filter(students):
        writer.writerow([repr(s.ept_score), repr(exam_average(s))])
    return out.getvalue()


def scatter_ingest(text: str) -> list[tuple[float, float]]:
    reader = csv.DictReader(io.StringIO(text))
    return [(float(row["ept_score"]), float(row["exam_avg"])) for row in reader]


def read_marks_csv(text: str) -> dict[str, dict[str, float]]:
    """student_id,module,mark rows -> {student: {module: mark}}."""
    marks: dict[str, dict[str, float]] = {}
    for row in csv.DictReader(io.StringIO(text)):
        marks.setdefault(row["student_id"], {})[row["module"]] = float(row["mark"])
    return marks


def read_quals_csv(text: str) -> dict[str, list[Qualification]]:
    """student_id,kind,subject_tag,grade rows -> {student: [quals]}."""
    quals: dict[str, list[Qualification]] = {}
    for row in csv.DictReader(io.StringIO(text)):
        quals.setdefault(row["student_id"], []).append(
            Qualification(
                kind=row["kind"], subject_tag=row["subject_tag"], grade=row["grade"]
            )
        )
    return quals


def read_tariff_config(text: str) -> TariffTable:
    return TariffTable.from_config(yaml.safe_load(text))


def build_student_outcomes(
    ept_scores: dict[str, float],
    marks: dict[str, dict[str, float]],
    quals: dict[str, list[Qualification]],
) -> list[StudentOutcome]:
    """Join EPT scores with exam marks and qualifications.

    A student is complete when they hold a mark for every module seen in
    the marks file (the exclusion rule for the correlation study).
    """
    modules = sorted({m for per_student in marks.values() for m in per_student})
    students = []
    for student_id in sorted(ept_scores):
        student_marks = marks.get(student_id, {})
        students.append(
            StudentOutcome(
                student_id=student_id,
                ept_score=ept_scores[student_id],
                qualifications=tuple(quals.get(student_id, ())),
                exam_marks=student_marks,
                complete=bool(modules) and all(m in student_marks for m in modules),
            )
        )
    return students
