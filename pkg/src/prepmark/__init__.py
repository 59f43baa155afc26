"""prepmark: preparatory-test platform for beginning mathematics
undergraduates -- symbolic grading, randomized question banks, retake
sessions with follow-up reporting, and cohort analytics."""

__version__ = "0.1.0"
