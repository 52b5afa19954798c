"""Scalar quadrature: adaptive Simpson with a global error budget.

The adaptive rule bisects until the local Richardson estimate |S2 - S1|/15
drops below the share of the global tolerance owned by the interval
(tol * length/span), and the accepted value includes the Richardson
correction. A hard cap on the number of intervals turns runaway refinement
into a reported numerical failure instead of a hang.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import ConfigurationError, NumericalFailureError

MAX_INTERVALS = 2**20
_MIN_RELATIVE_WIDTH = 2.0**-42


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    intervals: int


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float) -> QuadratureResult:
    if tol <= 0.0:
        raise ConfigurationError("quadrature tolerance must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if b < a:
        res = adaptive_simpson(f, b, a, tol)
        return QuadratureResult(-res.value, res.error_estimate, res.intervals)

    span = b - a
    state = {"intervals": 1}

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, s_whole):
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        s_left = simpson(lo, mid, flo, flm, fmid)
        s_right = simpson(mid, hi, fmid, frm, fhi)
        err = (s_left + s_right - s_whole) / 15.0
        width = hi - lo
        if abs(err) <= tol * (width / span) or width <= span * _MIN_RELATIVE_WIDTH:
            return s_left + s_right + err, abs(err)
        state["intervals"] += 1
        if state["intervals"] > MAX_INTERVALS:
            raise NumericalFailureError(
                "adaptive Simpson exceeded the subdivision cap",
                {"interval": (lo, hi), "span": (a, b), "tol": tol, "cap": MAX_INTERVALS},
            )
        lv, le = recurse(lo, mid, flo, flm, fmid, s_left)
        rv, re = recurse(mid, hi, fmid, frm, fhi, s_right)
        return lv + rv, le + re

    fa = f(a)
    fb = f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)
    value, err = recurse(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb))
    return QuadratureResult(value, err, state["intervals"])


def composite_simpson(values, step: float) -> float:
    """Composite Simpson over len(values) = n + 1 uniform nodes, n even."""
    n = len(values) - 1
    if n < 2 or n % 2:
        raise ConfigurationError("composite Simpson needs an even, positive interval count")
    total = values[0] + values[n]
    total += 4.0 * sum(values[1:n:2])
    total += 2.0 * sum(values[2:n:2])
    return float(total) * step / 3.0


def refine_to_convergence(evaluate: Callable[[int], float], n0: int, rel_tol: float,
                          max_halvings: int = 12, label: str = "composite Simpson") -> tuple[float, int]:
    """Call evaluate(n) with doubling n until consecutive values stabilize."""
    if n0 < 2 or n0 % 2:
        raise ConfigurationError("initial interval count must be even and >= 2")
    n = n0
    prev = evaluate(n)
    history = [prev]
    for _ in range(max_halvings):
        n *= 2
        cur = evaluate(n)
        history.append(cur)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur, n
        prev = cur
    raise NumericalFailureError(
        f"{label} failed to stabilize within {max_halvings} step halvings",
        {"history": history, "final_intervals": n, "rel_tol": rel_tol},
    )
