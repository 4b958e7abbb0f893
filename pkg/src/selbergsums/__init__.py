"""Explicit formulas and zero sums for Selberg-class L-functions."""
from __future__ import annotations

from pathlib import Path

__version__ = "0.1.0"


def data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"
