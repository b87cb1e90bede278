"""Rank statistics for the benchmark reports."""

from __future__ import annotations

from scipy import stats as _scipy_stats


class LengthMismatch(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


def spearman(x: list[float], y: list[float]) -> float:
    """Spearman rank correlation with average ranks for ties."""
    if len(x) != len(y):
        raise LengthMismatch(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise LengthMismatch("need at least two observations")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise DegenerateInput("zero rank variance in one of the inputs")
    rho = _scipy_stats.spearmanr(x, y).statistic
    return float(rho)
