import logging
import re
from pathlib import Path
from typing import Sequence

from core.serializer import csv_text, dumps_json
from gaps.models import VerdictStatus
from gaps.render import gap_svg
from verification.models import CheckResult, CheckStatus, VerificationRun

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ("case", "status", "hard")


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text).strip("_")


def summary(run: VerificationRun, echo: Sequence[str]) -> dict:
    """
    PURPOSE: JSON summary of a verification run
    DESCRIPTION: Per check name the counts of each status; the first failing hard check, if any,
    decides the overall status and is reported in full.
    """
    checks: dict[str, dict[str, int]] = {}
    for result in run.results:
        counts = checks.setdefault(result.name, {status.value: 0 for status in CheckStatus})
        counts[result.status.value] += 1
    failure = run.first_failure
    return {
        "parameters": list(echo),
        "status": "fail" if failure else "pass",
        "first_failure": failure,
        "checks": checks,
        "cases": len(run.samples),
        "verdicts": len(run.gap_cases),
    }


def check_table(results: Sequence[CheckResult], echo: Sequence[str]) -> str:
    """One row per case; measured values in sorted columns, nested values as JSON."""
    keys = sorted({key for result in results for key in result.measured})
    rows = []
    for result in results:
        row = [result.case, result.status.value, result.hard]
        for key in keys:
            value = result.measured.get(key, "")
            row.append(dumps_json(value) if isinstance(value, (dict, list, tuple)) else value)
        rows.append(row)
    return csv_text(RESULT_COLUMNS + tuple(keys), rows, echo)


def write_bundle(run: VerificationRun, out_dir: str | Path, echo: Sequence[str], A: float,
                 timestamp: bool = False) -> list[Path]:
    """
    PURPOSE: Write the report bundle of a verification run
    DESCRIPTION: summary.json, one CSV per check name, verdicts.jsonl with every gap-lemma verdict
    and an SVG render for each failing verdict that has a leftist trace. Apart from the SVG date
    the output is a function of the run and the parameter echo.
    ARGUMENTS:
        run: VerificationRun - Results to write
        out_dir: str | Path - Bundle directory, created when missing
        echo: Sequence[str] - Parameter lines written into every file
        A: float - Aspect constant of the gap-lemma renders
        timestamp: bool - Keep the SVG creation date
    RETURNS: list[Path] - Written files in writing order
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    path = out / "summary.json"
    path.write_text(dumps_json(summary(run, echo), indent=2) + "\n")
    written.append(path)

    by_name: dict[str, list[CheckResult]] = {}
    for result in run.results:
        by_name.setdefault(result.name, []).append(result)
    for name, results in by_name.items():
        path = out / f"{_slug(name)}.csv"
        path.write_text(check_table(results, echo))
        written.append(path)

    path = out / "verdicts.jsonl"
    path.write_text("".join(dumps_json({"case": gap_case.case, **gap_case.verdict.json()}) + "\n"
                            for gap_case in run.gap_cases))
    written.append(path)

    for gap_case in run.gap_cases:
        verdict = gap_case.verdict
        if verdict.status is not VerdictStatus.FAIL or gap_case.trace is None:
            continue
        lattice = run.lattices.get(gap_case.case)
        if lattice is None:
            continue
        path = out / "failures" / f"{_slug(gap_case.case)}-{verdict.root}-{verdict.cube}.svg"
        path.parent.mkdir(exist_ok=True)
        written.append(gap_svg(gap_case.trace, verdict, run.samples[gap_case.case], lattice.cube(verdict.cube),
                               lattice.cube(verdict.root), A, path, timestamp))
    logger.info("wrote %d bundle files to %s", len(written), out)
    return written
