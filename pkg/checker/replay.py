from typing import Sequence

from checker.session import INCONCLUSIVE, RunResult, RunVerdict
from checker.state import TraceEntry
from ltl.formula import Formula
from ltl.progression import Outcome, evaluate_trace
from ltl.verdict import DEMANDS


def replay_outcome(formula: Formula, trace: Sequence[TraceEntry]) -> Outcome:
    return evaluate_trace(formula, [entry.state for entry in trace])


def replay_run(formula: Formula, run: RunResult) -> RunVerdict:
    """
    Re-evaluates a recorded run offline. A trace that still demands another
    state maps back to the checker's Inconclusive.
    """
    outcome = replay_outcome(formula, run.trace)
    if outcome.verdict is DEMANDS:
        return INCONCLUSIVE

    return outcome.verdict
