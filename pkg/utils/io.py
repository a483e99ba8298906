import json
import logging
import os
from typing import Any

from pandas import DataFrame

logger = logging.getLogger(__name__)


def ensure_parent_dir(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as file:
        json_dict = json.load(file)
    logger.debug("Loaded JSON document %s", path)

    return json_dict


def read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as file:
        text = file.read()

    return text


def save_df(path: str, df: DataFrame, sep=",") -> None:
    ensure_parent_dir(path)

    df.to_csv(path, sep=sep, index=False)
    logger.info("Wrote %d rows to %s", len(df), path)


def write_text(path: str, text: str) -> None:
    ensure_parent_dir(path)

    with open(path, "w", encoding="utf-8") as file:
        file.write(text)
    logger.info("Wrote %s", path)
