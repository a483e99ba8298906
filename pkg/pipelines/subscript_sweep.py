"""
Subscript sweep: how often a property catches a known-faulty model as the
default subscript grows, and what that costs in actions per run.
"""

import logging
from typing import Callable, List, Optional, Tuple

import pandas as pd
from pandas import DataFrame

from checker.session import Budget, run_check
from constants.defaults import DEFAULT_JOBS, DEFAULT_SWEEP_MAX_ACTIONS, DEFAULT_SWEEP_RUNS_PER
from constants.file import SWEEP_CSV_COLUMNS
from protocol.transport import Connection
from speclang.elaborate import CheckConfig, ElaboratedSpec
from speclang.loader import load_spec
from utils.errors import StromError
from utils.io import save_df
from utils.metrics import get_detection_rate, get_mean_actions

logger = logging.getLogger(__name__)


def _pick_check(spec: ElaboratedSpec, property_name: Optional[str]) -> Tuple[CheckConfig, str]:
    for check in spec.checks:
        if property_name is None and check.properties:
            return check, check.properties[0]
        if property_name in check.properties:
            return check, property_name
    if property_name is not None and property_name in spec.properties:
        return CheckConfig((property_name,), None), property_name
    raise StromError(f"no check statement covers property '{property_name}'")


def run_sweep(
    spec_path: str,
    connect: Callable[[], Connection],
    subscripts: List[int],
    runs_per: int = DEFAULT_SWEEP_RUNS_PER,
    seed: int = 0,
    max_actions: int = DEFAULT_SWEEP_MAX_ACTIONS,
    property_name: Optional[str] = None,
    jobs: int = DEFAULT_JOBS,
) -> DataFrame:
    """
    Re-elaborates the specification once per subscript and runs the same
    seeded sessions against each. Every row's rates lie in [0, 1].
    """
    records = []
    for subscript in subscripts:
        _, spec = load_spec(spec_path, subscript)
        check, name = _pick_check(spec, property_name)
        result = run_check(spec, check, name, connect, seed, Budget.scaled(runs_per, max_actions), jobs)
        row = {
            "subscript": subscript,
            "detection_rate": get_detection_rate(result),
            "mean_actions": get_mean_actions(result),
        }
        logger.info("Subscript %d: detection rate %.3f, mean actions %.1f", *row.values())
        records.append(row)

    return pd.DataFrame.from_records(records, columns=SWEEP_CSV_COLUMNS)


def save_sweep(path: str, sweep_df: DataFrame) -> None:
    save_df(path, sweep_df[SWEEP_CSV_COLUMNS])


def sweep_csv(sweep_df: DataFrame) -> str:
    return sweep_df[SWEEP_CSV_COLUMNS].to_csv(index=False)
