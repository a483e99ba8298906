import pandas as pd
import pytest

from constants.file import (
    EGGTIMER_MODEL_FILE,
    EGGTIMER_SPEC_FILE,
    SWEEP_CSV_COLUMNS,
    TODOMVC_LITE_BUG7_MODEL_FILE,
    TODOMVC_LITE_MODEL_FILE,
    TODOMVC_LITE_SPEC_FILE,
)
from executor.endpoint import model_connector
from executor.model import load_model
from pipelines.subscript_sweep import run_sweep, save_sweep, sweep_csv
from tests.conftest import model_path, spec_path
from utils.errors import StromError

TODOMVC = spec_path(TODOMVC_LITE_SPEC_FILE)


def connect_to(model_file):
    return model_connector(load_model(model_path(model_file)))


def test_rows_and_rates():
    sweep_df = run_sweep(TODOMVC, connect_to(TODOMVC_LITE_BUG7_MODEL_FILE), [1, 2], runs_per=3, seed=5)

    assert list(sweep_df.columns) == SWEEP_CSV_COLUMNS
    assert list(sweep_df["subscript"]) == [1, 2]
    assert sweep_df["detection_rate"].between(0, 1).all()
    assert (sweep_df["mean_actions"] >= 1).all()


def test_one_action_cannot_expose_the_filter_bug():
    sweep_df = run_sweep(TODOMVC, connect_to(TODOMVC_LITE_BUG7_MODEL_FILE), [1], runs_per=10, seed=5)

    assert sweep_df["detection_rate"].iloc[0] == 0.0


def test_correct_model_is_never_flagged():
    sweep_df = run_sweep(TODOMVC, connect_to(TODOMVC_LITE_MODEL_FILE), [1, 10], runs_per=5, seed=5)

    assert (sweep_df["detection_rate"] == 0.0).all()


def test_named_property():
    sweep_df = run_sweep(
        spec_path(EGGTIMER_SPEC_FILE), connect_to(EGGTIMER_MODEL_FILE), [2], runs_per=2, property_name="timeUp"
    )

    assert len(sweep_df) == 1


def test_unknown_property():
    with pytest.raises(StromError):
        run_sweep(TODOMVC, connect_to(TODOMVC_LITE_MODEL_FILE), [1], runs_per=1, property_name="nope")


def test_csv_output(tmp_path):
    sweep_df = pd.DataFrame({"subscript": [1, 10], "detection_rate": [0.0, 0.5], "mean_actions": [1.0, 10.5]})
    path = tmp_path / "sweep.csv"

    save_sweep(str(path), sweep_df)

    assert sweep_csv(sweep_df) == "subscript,detection_rate,mean_actions\n1,0.0,1.0\n10,0.5,10.5\n"
    assert pd.read_csv(path).equals(sweep_df)


@pytest.mark.slow
def test_detection_grows_with_the_subscript():
    sweep_df = run_sweep(TODOMVC, connect_to(TODOMVC_LITE_BUG7_MODEL_FILE), [1, 10, 50], runs_per=50, seed=42)

    rates = list(sweep_df["detection_rate"])
    assert rates == sorted(rates)
    assert rates[0] == 0.0
    assert rates[-1] > 0.5
    assert sweep_df["mean_actions"].is_monotonic_increasing
