from typing import List

import pandas as pd
from pandas import DataFrame

from checker.session import CheckResult, RunResult

RUN_COLUMNS = ["index", "seed", "verdict", "failed", "actions_taken", "trace_length", "note"]


def get_runs_df(runs: List[RunResult]) -> DataFrame:
    records = [
        {
            "index": run.index,
            "seed": run.seed,
            "verdict": run.verdict_label,
            "failed": run.failed,
            "actions_taken": run.actions_taken,
            "trace_length": len(run.trace),
            "note": run.note,
        }
        for run in runs
    ]

    return pd.DataFrame.from_records(records, columns=RUN_COLUMNS)


def get_detection_rate(result: CheckResult) -> float:
    runs_df = get_runs_df(result.runs)
    if runs_df.empty:
        return 0.0

    return float(runs_df["failed"].mean())


def get_mean_actions(result: CheckResult) -> float:
    runs_df = get_runs_df(result.runs)
    if runs_df.empty:
        return 0.0

    return float(runs_df["actions_taken"].mean())


def get_verdict_counts(result: CheckResult) -> pd.Series:
    return get_runs_df(result.runs)["verdict"].value_counts().sort_index()
