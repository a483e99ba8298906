from typing import Any

from speclang.expr import show_literal


def to_percent(rate: float | int | str) -> str:
    """
    Converts a rate in [0, 1] to a percentage string (e.g., 42.5%).
    Returns 'N/A' if the input is not a valid number.
    """
    try:
        value = float(rate)
        return f"{value * 100:.1f}%"
    except (ValueError, TypeError):
        return "N/A"


def to_value_text(value: Any) -> str:
    return show_literal(value)
