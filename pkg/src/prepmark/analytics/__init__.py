"""Cohort analytics: correlation study machinery, tariff predictors,
aggregate score variants, and scatter export."""

from .report import (
    CorrelationReport,
    CorrelationRow,
    build_student_outcomes,
    correlation_report,
    read_marks_csv,
    read_quals_csv,
    read_tariff_config,
    scatter_export,
    scatter_ingest,
)
from .stats import (
    DegenerateSample,
    PairedSample,
    attempt_weighted_score,
    combined_predictor,
    default_lambda_grid,
    pearson,
    z_scores,
)
from .tariff import (
    MATHS_TAGS,
    Qualification,
    StudentOutcome,
    TariffTable,
    UnknownGrade,
    cohort_filter,
    exam_average,
    maths_only_tariff,
    total_tariff,
)

__all__ = [
    "CorrelationReport",
    "CorrelationRow",
    "DegenerateSample",
    "MATHS_TAGS",
    "PairedSample",
    "Qualification",
    "StudentOutcome",
    "TariffTable",
    "UnknownGrade",
    "attempt_weighted_score",
    "build_student_outcomes",
    "cohort_filter",
    "combined_predictor",
    "correlation_report",
    "default_lambda_grid",
    "exam_average",
    "maths_only_tariff",
    "pearson",
    "read_marks_csv",
    "read_quals_csv",
    "read_tariff_config",
    "scatter_export",
    "scatter_ingest",
    "total_tariff",
    "z_scores",
]
