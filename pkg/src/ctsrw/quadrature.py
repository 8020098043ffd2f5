"""Integration of exponentially decaying integrands over [0, inf)."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate


class QuadratureError(ArithmeticError):
    pass


def cutoff(bound: float, rate: float, eps: float) -> float:
    """Smallest T with bound * exp(-rate T) / rate <= eps."""
    return max(0.0, math.log(bound / (rate * eps)) / rate)


def integrate_decaying(fn, rate: float, bound: float, eps: float = 1e-8) -> tuple[float, float]:
    """int_0^inf fn(t) dt for |fn(t)| <= bound * exp(-rate t).

    [0, T] is split into panels four decay lengths wide and each is handed to
    adaptive Gauss-Kronrod (QUADPACK). T is chosen so the dropped tail is at
    most eps / 10. Returns the value and a bound on its error.
    """
    T = cutoff(bound, rate, eps / 10.0)
    tail = bound * math.exp(-rate * T) / rate
    edges = np.unique(np.concatenate([[0.0], np.arange(1.0, rate * T, 4.0) / rate, [T]]))
    budget = 0.9 * eps / max(1, len(edges) - 1)
    parts, err = [], 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(fn, a, b, epsabs=budget, epsrel=1e-14, limit=200)
        # Relative slack: an absolute budget far below rounding of |v| is unreachable.
        if e > max(budget, 1e-12 * abs(v)):
            raise QuadratureError(f"no convergence on [{a:.6g}, {b:.6g}]: error estimate {e:.3g}")
        parts.append(v)
        err += e
    return math.fsum(parts), err + tail
