"""
Check reports. The human format is for reading in a terminal; the machine
format is one JSON document holding everything needed to replay a run.
"""

import json
from typing import Any, Dict, List, Optional

from checker.session import FAIL, INCONCLUSIVE, OUTCOME_INCONCLUSIVE, PASS, CheckResult, RunResult, RunVerdict
from checker.state import ActionPerformed, Cause, EventOccurred, InitialEvent, TimedOut, TraceEntry
from constants.defaults import FORMAT_HUMAN
from constants.exit_codes import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS
from ltl.verdict import Verdict
from protocol.messages import Descriptor
from speclang.values import State, values_equal
from utils.formatting import to_percent, to_value_text
from utils.io import load_json
from utils.metrics import get_detection_rate, get_verdict_counts

MACHINE_REPORT_VERSION = 1

_CAUSE_INITIAL = "initial"
_CAUSE_ACTION = "action"
_CAUSE_EVENT = "event"
_CAUSE_TIMEOUT = "timeout"


# --- HUMAN ---


def _field_lines(previous: Optional[State], current: State) -> List[str]:
    lines = []
    for key in sorted(current.fields):
        value = current.fields[key]
        if previous is None:
            lines.append(f"      {key} = {to_value_text(value)}")
        elif key not in previous.fields or not values_equal(previous.fields[key], value):
            before = to_value_text(previous.fields.get(key))
            lines.append(f"      {key}: {before} -> {to_value_text(value)}")

    return lines


def _first_violated(run: RunResult) -> Optional[int]:
    if not run.failed:
        return None
    if run.definitive_at is not None:
        return run.definitive_at

    return len(run.trace) - 1


def _show_run(run: RunResult) -> List[str]:
    lines = [
        f"  Run {run.index} (seed {run.seed}): {run.verdict_label} after {run.actions_taken} action(s)"
        + (f" [{run.note}]" if run.note else "")
    ]
    if not run.failed:
        if run.verdict == INCONCLUSIVE and run.residual is not None:
            lines.append(f"    Still required: {run.residual}")
        return lines

    violated = _first_violated(run)
    previous: Optional[State] = None
    for index, entry in enumerate(run.trace):
        marker = "  <- violated" if index == violated else ""
        lines.append(f"    [{index}] {entry.label}{marker}")
        lines.extend(_field_lines(previous, entry.state))
        previous = entry.state
    if run.definitive_at is not None:
        lines.append(f"    First violated state: {violated}")
    else:
        lines.append(f"    Presumed violated at the end of the trace, state {violated}")
        if run.residual is not None:
            lines.append(f"    Unresolved: {run.residual}")

    return lines


def show_human(results: List[CheckResult]) -> str:
    lines: List[str] = []
    for result in results:
        counts = ", ".join(f"{count} {label}" for label, count in get_verdict_counts(result).items())
        lines.append(f"Property {result.property}: {result.overall.upper()} ({len(result.runs)} run(s): {counts})")
        lines.append(f"  seed {result.seed}, dependencies {', '.join(result.dependencies) or '-'}")
        if result.overall == FAIL:
            lines.append(f"  detected in {to_percent(get_detection_rate(result))} of runs")
        for run in result.runs:
            lines.extend(_show_run(run))

    return "\n".join(lines) + "\n"


# --- MACHINE ---


def _cause_to_dict(cause: Cause) -> Dict[str, Any]:
    if isinstance(cause, InitialEvent):
        return {"kind": _CAUSE_INITIAL, "name": cause.name, "descriptor": _descriptor_to_dict(cause.descriptor)}
    if isinstance(cause, ActionPerformed):
        return {"kind": _CAUSE_ACTION, "name": cause.name, "descriptor": _descriptor_to_dict(cause.descriptor)}
    if isinstance(cause, EventOccurred):
        return {"kind": _CAUSE_EVENT, "names": list(cause.names), "descriptor": _descriptor_to_dict(cause.descriptor)}

    return {"kind": _CAUSE_TIMEOUT, "attributed": cause.attributed}


def _cause_from_dict(data: Dict[str, Any]) -> Cause:
    kind = data["kind"]
    if kind == _CAUSE_INITIAL:
        return InitialEvent(data["name"], _descriptor_from_dict(data["descriptor"]))
    if kind == _CAUSE_ACTION:
        return ActionPerformed(data["name"], _descriptor_from_dict(data["descriptor"]))
    if kind == _CAUSE_EVENT:
        return EventOccurred(tuple(data["names"]), _descriptor_from_dict(data["descriptor"]))
    if kind == _CAUSE_TIMEOUT:
        return TimedOut(data.get("attributed"))
    raise ValueError(f"unknown trace cause '{kind}'")


def _descriptor_from_dict(data: Dict[str, Any]) -> Descriptor:
    return Descriptor(data["id"], tuple(data.get("args", [])))


def _descriptor_to_dict(descriptor: Descriptor) -> Dict[str, Any]:
    return {"id": descriptor.id, "args": list(descriptor.args)}


def _entry_from_dict(data: Dict[str, Any]) -> TraceEntry:
    state = State(dict(data["state"]), tuple(data["happened"]))

    return TraceEntry(state, _cause_from_dict(data["cause"]))


def _entry_to_dict(entry: TraceEntry) -> Dict[str, Any]:
    return {
        "cause": _cause_to_dict(entry.cause),
        "happened": list(entry.state.happened),
        "state": dict(entry.state.fields),
    }


def _run_from_dict(data: Dict[str, Any]) -> RunResult:
    return RunResult(
        index=data["index"],
        seed=data["seed"],
        verdict=_verdict_from_label(data["verdict"]),
        trace=[_entry_from_dict(entry) for entry in data["trace"]],
        actions_taken=data["actions_taken"],
        definitive_at=data.get("definitive_at"),
        note=data.get("note"),
        residual=data.get("residual"),
    )


def _run_to_dict(run: RunResult) -> Dict[str, Any]:
    return {
        "index": run.index,
        "seed": run.seed,
        "verdict": run.verdict_label,
        "actions_taken": run.actions_taken,
        "definitive_at": run.definitive_at,
        "note": run.note,
        "residual": run.residual,
        "trace": [_entry_to_dict(entry) for entry in run.trace],
    }


def _verdict_from_label(label: str) -> RunVerdict:
    if label == INCONCLUSIVE:
        return INCONCLUSIVE

    return Verdict.from_label(label)


def machine_document(results: List[CheckResult]) -> Dict[str, Any]:
    return {
        "version": MACHINE_REPORT_VERSION,
        "overall": overall_outcome(results),
        "checks": [
            {
                "property": result.property,
                "verdict": result.overall,
                "seed": result.seed,
                "dependencies": list(result.dependencies),
                "runs": [_run_to_dict(run) for run in result.runs],
            }
            for result in results
        ],
    }


def parse_machine_document(document: Dict[str, Any]) -> List[CheckResult]:
    if document.get("version") != MACHINE_REPORT_VERSION:
        raise ValueError(f"unsupported report version {document.get('version')!r}")

    return [
        CheckResult(
            check["property"],
            check["seed"],
            tuple(check["dependencies"]),
            [_run_from_dict(run) for run in check["runs"]],
        )
        for check in document["checks"]
    ]


def load_machine_report(path: str) -> List[CheckResult]:
    return parse_machine_document(load_json(path))


def show_machine(results: List[CheckResult]) -> str:
    return json.dumps(machine_document(results), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# --- OUTCOME ---


def overall_outcome(results: List[CheckResult]) -> str:
    outcomes = {result.overall for result in results}
    if FAIL in outcomes:
        return FAIL
    if OUTCOME_INCONCLUSIVE in outcomes:
        return OUTCOME_INCONCLUSIVE

    return PASS


def exit_code(results: List[CheckResult]) -> int:
    outcome = overall_outcome(results)
    if outcome == FAIL:
        return EXIT_FAIL
    if outcome == OUTCOME_INCONCLUSIVE:
        return EXIT_INCONCLUSIVE

    return EXIT_PASS


def report(results: List[CheckResult], report_format: str = FORMAT_HUMAN) -> str:
    if report_format == FORMAT_HUMAN:
        return show_human(results)

    return show_machine(results)
