"""Terminal helpers for superefficiency-lab."""

import json
import math
import sys
from typing import List, Optional


def parse_number_list(text: Optional[str], integer: bool = False) -> Optional[List[float]]:
    """
    Parse a comma-separated list such as "10,100,1e3".

    Args:
        text: Raw option value, None when the option was not given
        integer: Convert entries to int; they must be whole numbers

    Returns:
        List of numbers, or None for None input

    Raises:
        ValueError: On empty lists, malformed entries or non-integral
            values when integer is set
    """
    if text is None:
        return None
    items = [item.strip() for item in text.split(',') if item.strip()]
    if not items:
        raise ValueError("expected a comma-separated list of numbers")
    values = []
    for item in items:
        try:
            number = float(item)
        except ValueError:
            raise ValueError(f"not a number: {item!r}") from None
        if integer:
            if not (math.isfinite(number) and number.is_integer()):
                raise ValueError(f"not an integer: {item!r}")
            values.append(int(number))
        else:
            values.append(number)
    return values


def print_error(message: str) -> None:
    """Print an error message to stderr in red."""
    if sys.stderr.isatty():
        sys.stderr.write(f"\033[0;31mError:\033[0m {message}\n")
    else:
        sys.stderr.write(f"Error: {message}\n")


def print_info(message: str) -> None:
    """Print an info message to stderr in yellow."""
    if sys.stderr.isatty():
        sys.stderr.write(f"\033[1;33m{message}\033[0m\n")
    else:
        sys.stderr.write(f"{message}\n")


def print_success(message: str) -> None:
    """Print a success message to stderr in green."""
    if sys.stderr.isatty():
        sys.stderr.write(f"\033[0;32m{message}\033[0m\n")
    else:
        sys.stderr.write(f"{message}\n")


def emit_error_object(error: dict) -> None:
    """Write a machine-readable error object as one JSON line on stderr."""
    sys.stderr.write(json.dumps(error, sort_keys=True) + "\n")
