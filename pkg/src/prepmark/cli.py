"""Operator command line: validate banks, batch-grade responses, produce
reports and analytics, simulate cohorts, verify stores, run the service.

Exit status: 0 success, 1 findings (validation errors, failed checks,
reports not yet due), 2 usage errors.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .analytics import correlation_report, scatter_export
from .questionbank import instantiate, load_bank, validate_bank
from .session import (
    CohortConfig,
    EventStore,
    NotYetDue,
    canonical_json,
    derive_seed,
    parse_timestamp,
    replay_verify,
)
from .session.engine import response_from_json

EXIT_FINDINGS = 1


def _echo(text: str) -> None:
    click.echo(text, nl=not text.endswith("\n"))


@click.group()
@click.version_option(package_name="prepmark")
def main() -> None:
    """Preparatory-test platform operations."""


@main.command()
@click.option("--bank", "bank_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
def validate(bank_path: Path) -> None:
    """Validate a question bank document."""
    from .questionbank import FileFormatError

    try:
        report = validate_bank(bank_path)
    except FileFormatError as exc:
        _echo(f"error: {exc}")
        sys.exit(EXIT_FINDINGS)
    _echo(report.format_text())
    if not report.ok:
        sys.exit(EXIT_FINDINGS)


@main.command()
@click.option("--bank", "bank_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--responses", "responses_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="CSV: student_id,template_id,part,response (response is JSON)")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path))
def grade(bank_path: Path, responses_path: Path, out_path: Path | None) -> None:
    """Batch-grade a responses file against a bank."""
    from .grading import grade as grade_response

    templates = {t.id: t for t in load_bank(bank_path)}
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["student_id", "template_id", "part", "score", "correct",
                     "flags", "feedback_key"])
    findings = 0
    for row in csv.DictReader(responses_path.read_text().splitlines()):
        template = templates.get(row["template_id"])
        if template is None:
            _echo(f"error: unknown template {row['template_id']!r}")
            sys.exit(2)
        inst = instantiate(template, derive_seed(row["student_id"], template.id))
        part = inst.parts[int(row["part"])]
        raw = json.loads(row["response"])
        try:
            outcome = grade_response(part.spec, response_from_json(part.spec, raw))
        except Exception as exc:
            writer.writerow([row["student_id"], row["template_id"], row["part"],
                             "0.0", "False", "invalid_response", f"error:{exc}"])
            findings += 1
            continue
        if not outcome.correct:
            findings += 1
        writer.writerow([
            row["student_id"],
            row["template_id"],
            row["part"],
            repr(outcome.score),
            str(outcome.correct),
            ";".join(sorted(outcome.flags)),
            outcome.feedback_key,
        ])
    text = out.getvalue()
    if out_path:
        out_path.write_text(text)
    _echo(text)
    if findings:
        sys.exit(EXIT_FINDINGS)


@main.command()
@click.option("--store", "store_path", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--followup", "mode", flag_value="followup")
@click.option("--status", "mode", flag_value="status")
@click.option("--student", "student_id", default=None)
@click.option("--now", "now_text", default=None, help="ISO timestamp (default: real time)")
def report(store_path: Path, mode: str | None, student_id: str | None,
           now_text: str | None) -> None:
    """Follow-up or status report (bodies match the service endpoints)."""
    from .service.views import followup_body, status_body

    if mode is None:
        raise click.UsageError("choose --followup or --status")
    store = EventStore.open(store_path)
    now = parse_timestamp(now_text) if now_text else datetime.now(timezone.utc)
    if mode == "followup":
        try:
            _echo(followup_body(store.engine, now))
        except NotYetDue as exc:
            _echo(f"not yet due: {exc}")
            sys.exit(EXIT_FINDINGS)
        return
    if student_id:
        _echo(status_body(store.engine, student_id))
        return
    statuses = [store.engine.status(s) for s in sorted(store.engine.roster)]
    _echo(canonical_json({"students": statuses}))


@main.command()
@click.option("--store", "store_path", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--marks", "marks_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--quals", "quals_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--tariff", "tariff_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--scatter-out", "scatter_path",
              type=click.Path(dir_okay=False, path_type=Path))
@click.option("--ept-mode", default="first_attempt",
              type=click.Choice(["first_attempt", "best", "attempt_weighted"]))
@click.option("--aggregation", default="mean_of_subtests",
              type=click.Choice(["mean_of_subtests", "mean_of_parts"]))
def analyze(store_path: Path, marks_path: Path | None, quals_path: Path | None,
            tariff_path: Path | None, scatter_path: Path | None,
            ept_mode: str, aggregation: str) -> None:
    """Correlation table, combined predictor, and scatter export."""
    from .analytics import (
        build_student_outcomes,
        read_marks_csv,
        read_quals_csv,
        read_tariff_config,
    )

    store = EventStore.open(store_path)
    analytics_dir = EventStore.paths(store_path)["analytics"]
    marks_path = marks_path or analytics_dir / "marks.csv"
    quals_path = quals_path or analytics_dir / "quals.csv"
    tariff_path = tariff_path or analytics_dir / "tariff.yaml"
    for p in (marks_path, quals_path, tariff_path):
        if not p.exists():
            raise click.UsageError(f"missing analytics input {p}")
    marks = read_marks_csv(marks_path.read_text())
    quals = read_quals_csv(quals_path.read_text())
    table = read_tariff_config(tariff_path.read_text())
    students = build_student_outcomes(
        store.engine.ept_scores(ept_mode, aggregation), marks, quals
    )
    result = correlation_report(students, table)
    _echo(result.format_text())
    scatter_text = scatter_export(students)
    if scatter_path:
        scatter_path.write_text(scatter_text)
        _echo(f"scatter written to {scatter_path}")


@main.command()
@click.option("--bank", "bank_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--store", "store_path", required=True,
              type=click.Path(file_okay=False, path_type=Path))
@click.option("--students", "n_students", default=110, show_default=True)
@click.option("--seed", default=20160901, show_default=True)
@click.option("--deadline", "deadline_text", default=None,
              help="ISO timestamp (default: a fixed reference deadline)")
def simulate(bank_path: Path, store_path: Path, n_students: int, seed: int,
             deadline_text: str | None) -> None:
    """Populate a fresh store with a simulated cohort."""
    from .simulate import DEFAULT_DEADLINE, cohort_from_bank, simulate_cohort

    if store_path.exists() and any(store_path.iterdir()):
        raise click.UsageError(f"store directory {store_path} is not empty")
    deadline = parse_timestamp(deadline_text) if deadline_text else DEFAULT_DEADLINE
    bank_text = bank_path.read_text()
    cohort = cohort_from_bank(load_bank(bank_text), deadline)
    store = EventStore.init(store_path, bank_text, cohort)
    stats = simulate_cohort(store, n_students, seed)
    _echo(
        f"simulated {stats.students} students, {stats.attempts} attempts "
        f"({stats.late_attempts} late); {stats.passed_all} passed every sub-test"
    )


@main.command()
@click.option("--store", "store_path", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
def verify(store_path: Path) -> None:
    """Check snapshot/log agreement and locked-part soundness."""
    ok = replay_verify(store_path)
    _echo(f"replay matches snapshot: {ok}")
    store = EventStore.open(store_path)
    bad = store.engine.verify_locks()
    _echo(f"locked parts regrade correct: {not bad}")
    if bad:
        for part in bad:
            _echo(f"  unsound lock: {part}")
    if not ok or bad:
        sys.exit(EXIT_FINDINGS)


@main.command()
@click.option("--config", "config_path",
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--store", "store_path", type=click.Path(path_type=Path))
@click.option("--bank", "bank_path", type=click.Path(path_type=Path))
@click.option("--cohort", "cohort_path", type=click.Path(path_type=Path))
@click.option("--bind", default=None, help="host:port")
def serve(config_path: Path | None, store_path: Path | None, bank_path: Path | None,
          cohort_path: Path | None, bind: str | None) -> None:
    """Run the HTTP service."""
    from .service import ServiceConfig
    from .service.app import serve as run_service

    overrides = {}
    if store_path:
        overrides["PREPMARK_STORE"] = str(store_path)
    if bank_path:
        overrides["PREPMARK_BANK"] = str(bank_path)
    if cohort_path:
        overrides["PREPMARK_COHORT"] = str(cohort_path)
    if bind:
        overrides["PREPMARK_BIND"] = bind
    import os

    env = {**os.environ, **overrides}
    config = ServiceConfig.load(config_path, env)
    run_service(config)


if __name__ == "__main__":
    main()
