#!/usr/bin/python3
"""Difference bound matrices over firing delays.

Variable 0 is the reference ("now"); variable i > 0 is the remaining firing
delay of the i-th enabled transition. Entry ``m[i, j]`` bounds
``x_i - x_j``. A bound ``(c, <=)`` is encoded as ``2c + 1`` and ``(c, <)`` as
``2c``, so the integer order is the tightness order and adding two bounds is
one shift-and-add. Matrices are square int32 arrays; class keys hash their
bytes.
"""

from fractions import Fraction

import numpy as np

DTYPE = np.int32
INF = 1 << 29
LE_ZERO = 1
LT_ZERO = 0
# smallest bound admitting x_u - x_t > 0
LT_ONE = 2


def bound(value: int, strict: bool = False) -> int:
    return 2 * value + (0 if strict else 1)


def add(a: int, b: int) -> int:
    if a >= INF or b >= INF:
        return INF
    return min(((a >> 1) + (b >> 1)) * 2 + (a & b & 1), INF)


def plus(a, b) -> np.ndarray:
    """Element-wise ``add`` with broadcasting"""
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    total = np.minimum(((a >> 1) + (b >> 1)) * 2 + (a & b & 1), INF)
    return np.where((a >= INF) | (b >= INF), INF, total).astype(DTYPE, copy=False)


def decode(b: int):
    """(value, strict) of an encoded bound; value None for infinity"""
    b = int(b)
    if b >= INF:
        return None, True
    return b >> 1, not (b & 1)


def interval_bounds(interval, scale: int):
    """Encoded (lower-row, upper-column) entries of a static interval"""
    lower = bound(-int(interval.lower * scale), interval.lower_strict)
    if interval.upper is None:
        return lower, INF
    return lower, bound(int(interval.upper * scale), interval.upper_strict)


def scaled_bounds(scaled):
    """``interval_bounds`` of an interval already multiplied by the scale"""
    lower, lower_strict, upper, upper_strict = scaled
    lo = bound(-lower, lower_strict)
    return lo, INF if upper is None else bound(upper, upper_strict)


def matrix(rows) -> np.ndarray:
    return np.array(rows, dtype=DTYPE)


def unconstrained(n: int) -> np.ndarray:
    m = np.full((n, n), INF, dtype=DTYPE)
    np.fill_diagonal(m, LE_ZERO)
    return m


def _independent(lower, upper) -> np.ndarray:
    m = plus(upper[:, None], lower[None, :])
    np.fill_diagonal(m, LE_ZERO)
    return m


def box(intervals, scale: int) -> np.ndarray:
    """Canonical matrix of independent intervals"""
    entries = [(LE_ZERO, LE_ZERO)] + [interval_bounds(i, scale) for i in intervals]
    lower = np.array([lo for lo, _ in entries], dtype=DTYPE)
    upper = np.array([up for _, up in entries], dtype=DTYPE)
    return _independent(lower, upper)


def canonical(m):
    """All-pairs tightening; None when the constraints are unsatisfiable"""
    m = np.array(m, dtype=DTYPE)
    for k in range(len(m)):
        np.minimum(m, plus(m[:, k, None], m[None, k, :]), out=m)
    if (np.diagonal(m) < LE_ZERO).any():
        return None
    return m


def firable_first(m) -> np.ndarray:
    """Mask over variables 1.. of those that can take the smallest delay"""
    return (m[1:, 1:] >= LE_ZERO).all(axis=0)


def can_fire_first(m, t: int, strict=()) -> bool:
    """Whether x_t <= x_u for every u (x_t < x_u for u in strict) is satisfiable"""
    column = m[1:, t]
    if (column < LE_ZERO).any():
        return False
    return all(m[u, t] >= LT_ONE for u in strict if u != t)


def constrain_first(m, t: int, strict=()):
    """Adds x_t <= x_u (x_t < x_u for u in strict) and re-closes the matrix"""
    row = m[t].copy()
    np.minimum(row[1:], LE_ZERO, out=row[1:])
    for u in strict:
        row[u] = min(row[u], LT_ZERO)
    row[t] = m[t, t]
    closed = plus(row[:, None], m).min(axis=0)
    if closed[t] < LE_ZERO:
        return None
    out = np.minimum(m, plus(m[:, t, None], closed[None, :]))
    np.minimum(out[t], closed, out=out[t])
    return out


def advance(m, t: int, sources) -> np.ndarray:
    """Matrix after firing variable t.

    ``sources`` lists the new variables in order: an int is the old index of
    a persistent variable, a pair is the (lower, upper) encoding of a fresh
    static interval. The old x_t becomes the new reference.
    """
    k = len(sources) + 1
    olds = np.zeros(k, dtype=np.intp)
    kept = np.zeros(k, dtype=bool)
    lower = np.full(k, LE_ZERO, dtype=DTYPE)
    upper = np.full(k, LE_ZERO, dtype=DTYPE)
    olds[0], kept[0] = t, True
    for a, source in enumerate(sources, start=1):
        if isinstance(source, tuple):
            lower[a], upper[a] = source
        else:
            olds[a], kept[a] = source, True
    # persistent variables are read against the old x_t
    lower = np.where(kept, m[t, olds], lower)
    upper = np.where(kept, m[olds, t], upper)
    out = _independent(lower, upper)
    both = np.outer(kept, kept)
    out[both] = m[np.ix_(olds, olds)][both]
    np.fill_diagonal(out, LE_ZERO)
    return out


def bound_text(b: int, scale: int) -> str:
    value, strict = decode(b)
    if value is None:
        return "inf"
    v = Fraction(value, scale)
    return "{}{}".format("<" if strict else "<=", v)


def delay_range(m, i: int, scale: int):
    """(lower, lower_strict, upper, upper_strict) of variable i, upper None for inf"""
    lo, lo_strict = decode(m[0, i])
    up, up_strict = decode(m[i, 0])
    lower = Fraction(-lo, scale) if lo is not None else Fraction(0)
    upper = Fraction(up, scale) if up is not None else None
    return lower, lo_strict, upper, up_strict
