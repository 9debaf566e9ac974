"""Integer-order Bessel functions of the first kind.

Small arguments use the power series directly. Larger arguments use Miller's
downward recurrence normalised with J_0 + 2 * sum_k J_2k = 1, which stays
accurate for orders both below and above the argument.
"""

import math

import numpy as np

_SERIES_LIMIT = 2.0
_RESCALE = 1e250


def _series(m: int, x: float) -> float:
    half = 0.5 * x
    term = half**m / math.factorial(m)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + m))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total


def _miller(mmax: int, x: float) -> np.ndarray:
    """J_0 .. J_mmax at x > 0 by downward recurrence."""
    top = max(mmax, int(x))
    start = top + 20 + int(math.sqrt(40.0 * top))
    start += start % 2
    out = np.zeros(mmax + 1)
    j_next, j = 0.0, 1e-30
    norm = 0.0
    for k in range(start, 0, -1):
        # j holds J_k, compute J_{k-1}
        j_prev = (2.0 * k / x) * j - j_next
        j_next, j = j, j_prev
        if abs(j) > _RESCALE:
            j /= _RESCALE
            j_next /= _RESCALE
            out /= _RESCALE
            norm /= _RESCALE
        if k - 1 <= mmax:
            out[k - 1] = j
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
    norm += j
    return out / norm


def bessel_j(m: int, x: float) -> float:
    """J_m(x) for integer ``m`` and real ``x``."""
    m = int(m)
    x = float(x)
    if m < 0:
        return (-1) ** (-m) * bessel_j(-m, x)
    if x < 0:
        return (-1) ** m * bessel_j(m, -x)
    if x == 0.0:
        return 1.0 if m == 0 else 0.0
    if x <= _SERIES_LIMIT:
        return _series(m, x)
    return float(_miller(m, x)[m])


def bessel_j_orders(mmax: int, x: float) -> np.ndarray:
    "J_0 .. J_mmax at a single x >= 0."
    if x <= _SERIES_LIMIT:
        return np.array([bessel_j(m, x) for m in range(mmax + 1)])
    return _miller(mmax, float(x))
