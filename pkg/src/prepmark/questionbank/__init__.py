"""Question templates: definition, validation, seeded randomization and
rendering, organized into the six sub-test topics."""

from importlib import resources
from pathlib import Path

from .answers import synthesize_correct_response, synthesize_wrong_response
from .bankfile import load_bank, validate_bank
from .instantiate import build_grader_spec, instantiate, render, substitute
from .model import (
    ELEMENTS,
    PART_KINDS,
    TOPICS,
    BankIssue,
    ConstraintUnsatisfiable,
    DisplayPart,
    DisplayQuestion,
    Feedback,
    FileFormatError,
    InstancePart,
    ParamSpec,
    PartTemplate,
    QuestionInstance,
    QuestionTemplate,
    ValidationReport,
)


def seed_bank_text() -> str:
    """The bundled seed bank document."""
    return resources.files(__package__).joinpath("seed_bank.yaml").read_text()


def seed_bank_path() -> Path:
    return Path(str(resources.files(__package__).joinpath("seed_bank.yaml")))


__all__ = [
    "ELEMENTS",
    "PART_KINDS",
    "TOPICS",
    "BankIssue",
    "ConstraintUnsatisfiable",
    "DisplayPart",
    "DisplayQuestion",
    "Feedback",
    "FileFormatError",
    "InstancePart",
    "ParamSpec",
    "PartTemplate",
    "QuestionInstance",
    "QuestionTemplate",
    "ValidationReport",
    "build_grader_spec",
    "instantiate",
    "load_bank",
    "render",
    "seed_bank_path",
    "seed_bank_text",
    "substitute",
    "synthesize_correct_response",
    "synthesize_wrong_response",
    "validate_bank",
]
