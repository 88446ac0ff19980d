"""Argument parsing helpers for command-line flags."""

import argparse
import math

MODES = ("exact", "float")


def box_from_text(text):
    """'lo:hi,lo:hi' → ((lo, hi), (lo, hi)); lo == hi fixes that parameter."""
    box = []
    for part in text.split(","):
        lo, sep, hi = part.strip().partition(":")
        if not sep:
            raise ValueError(f"box intervals are written lo:hi, got {part!r}")
        interval = (float(lo), float(hi))
        if not all(math.isfinite(v) for v in interval):
            raise ValueError(f"box bounds must be finite, got {part!r}")
        if interval[0] > interval[1]:
            raise ValueError(f"empty interval {part!r}")
        box.append(interval)
    return tuple(box)


def parse_box(text):
    """Parse a --box value."""
    try:
        return box_from_text(text)
    except ValueError as e:
        msg = f"Invalid box: {text}. {e!s}. Use lo:hi,lo:hi."
        raise argparse.ArgumentTypeError(msg)


def parse_mode(text):
    """Parse a --mode value."""
    if text not in MODES:
        msg = f"Invalid mode: {text}. Use exact or float."
        raise argparse.ArgumentTypeError(msg)
    return text


def parse_tolerance(text):
    """Parse a --tol value (a positive float)."""
    try:
        value = float(text)
    except ValueError:
        value = math.nan
    if not math.isfinite(value) or value <= 0:
        msg = f"Invalid tolerance: {text}. Use a positive number such as 1e-9."
        raise argparse.ArgumentTypeError(msg)
    return value


def parse_positive_int(text):
    """Parse a positive integer flag such as --grid or --seeds."""
    try:
        value = int(text)
    except ValueError:
        value = 0
    if value < 1:
        msg = f"Invalid count: {text}. Use a positive integer."
        raise argparse.ArgumentTypeError(msg)
    return value
