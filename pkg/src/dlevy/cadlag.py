"""Cadlag step paths on a uniform grid, Skorokhod metrics and moduli.

A :class:`GridPath` of resolution ``m`` holds ``m + 1`` values and stands for
the right-continuous step function equal to ``values[l]`` on ``[l/m, (l+1)/m)``
with ``x(1) = values[m]``.  Every supremum over ``s`` is therefore a maximum
over grid values.

Skorokhod distances are computed over time changes whose breakpoints are
lattice nodes ``(u/m, v/m)``.  A time change is a chain of knots
``(0, 0) = (u_0, v_0) < (u_1, v_1) < ... < (u_K, v_K) = (m, m)`` strictly
increasing in both coordinates and is linear between knots.  The optimal chain
is found by a minimax dynamic program, so the reported distance is exact within
that class and an upper bound on the infimum over all continuous time changes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .errors import InvalidParams, ZeroPath

# above this many float64 entries the segment-cost tables are built row by row
_TABLE_BUDGET = 20_000_000


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridPath:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise InvalidParams("a GridPath needs m + 1 >= 2 values")
        if not np.all(np.isfinite(v)):
            raise InvalidParams("GridPath values must be finite")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def m(self) -> int:
        return self.values.size - 1

    def __call__(self, s: float) -> float:
        """Evaluate the step function at ``s`` in [0, 1]."""
        if s >= 1.0:
            return float(self.values[-1])
        return float(self.values[int(math.floor(s * self.m))])

    def left_limit(self, l: int) -> float:
        if l < 1:
            raise ValueError("left limit is defined for l >= 1")
        return float(self.values[l - 1])

    def __eq__(self, other):
        return isinstance(other, GridPath) and np.array_equal(self.values, other.values)

    def __add__(self, other: "GridPath") -> "GridPath":
        a, b = common_grid(self, other)
        return GridPath(a.values + b.values)

    def __sub__(self, other: "GridPath") -> "GridPath":
        a, b = common_grid(self, other)
        return GridPath(a.values - b.values)

    def scale(self, c: float) -> "GridPath":
        return GridPath(c * self.values)

    @classmethod
    def zeros(cls, m: int) -> "GridPath":
        return cls(np.zeros(m + 1))

    @classmethod
    def indicator(cls, m: int, start: int) -> "GridPath":
        """Step path 1_{[start/m, 1]}."""
        v = np.zeros(m + 1)
        v[start:] = 1.0
        return cls(v)


@dataclass(frozen=True, eq=False)
class PathOfPaths:
    """Time-indexed family x(t_k), k = 0..n, stored as an (n+1) x (m+1) array."""

    values: np.ndarray
    horizon: float = 1.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2 or v.shape[1] < 2:
            raise InvalidParams("a PathOfPaths needs shape (n+1, m+1) with n, m >= 1")
        if not np.all(np.isfinite(v)):
            raise InvalidParams("PathOfPaths values must be finite")
        if not self.horizon > 0:
            raise InvalidParams("horizon must be positive")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    @property
    def m(self) -> int:
        return self.values.shape[1] - 1

    def times(self) -> np.ndarray:
        return self.horizon * np.arange(self.n + 1) / self.n

    def slice(self, k: int) -> GridPath:
        return GridPath(self.values[k])

    def entries(self) -> list:
        return [GridPath(row) for row in self.values]

    def norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def prefix(self, k: int) -> "PathOfPaths":
        """Restriction to the first k time steps, i.e. to [0, k T / n]."""
        return PathOfPaths(self.values[: k + 1], self.horizon * k / self.n)

    def __add__(self, other: "PathOfPaths") -> "PathOfPaths":
        _check_same_times(self, other)
        a, b = _common_space(self.values, other.values)
        return PathOfPaths(a + b, self.horizon)

    def __sub__(self, other: "PathOfPaths") -> "PathOfPaths":
        _check_same_times(self, other)
        a, b = _common_space(self.values, other.values)
        return PathOfPaths(a - b, self.horizon)

    @classmethod
    def from_paths(cls, paths: Sequence[GridPath], horizon: float = 1.0) -> "PathOfPaths":
        ms = {p.m for p in paths}
        if len(ms) != 1:
            raise InvalidParams("all entries must share the space resolution m")
        return cls(np.vstack([p.values for p in paths]), horizon)


def _check_same_times(x: PathOfPaths, y: PathOfPaths):
    if x.n != y.n or x.horizon != y.horizon:
        raise InvalidParams("path-of-paths objects must share time grid and horizon")


# ---------------------------------------------------------------------------
# resampling

def refine(values: np.ndarray, factor: int) -> np.ndarray:
    """Right-continuous step extension along the last axis to ``factor * m``."""
    values = np.asarray(values, dtype=float)
    m = values.shape[-1] - 1
    idx = np.arange(factor * m + 1) // factor
    return values[..., idx]


def _common_space(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    ma, mb = a.shape[-1] - 1, b.shape[-1] - 1
    if ma == mb:
        return a, b
    lcm = ma * mb // math.gcd(ma, mb)
    return refine(a, lcm // ma), refine(b, lcm // mb)


def common_grid(x: GridPath, y: GridPath) -> Tuple[GridPath, GridPath]:
    """Bring two paths onto the LCM grid without changing them as functions."""
    if x.m == y.m:
        return x, y
    a, b = _common_space(x.values, y.values)
    return GridPath(a), GridPath(b)


def lcm_many(ms: Sequence[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), ms)


# ---------------------------------------------------------------------------
# norms and polar coordinates

def sup_norm(x: GridPath) -> float:
    return float(np.max(np.abs(x.values)))


def polar(x: GridPath) -> Tuple[float, GridPath]:
    r = sup_norm(x)
    if r == 0.0:
        raise ZeroPath("the zero path has no angular part")
    return r, GridPath(x.values / r)


# ---------------------------------------------------------------------------
# time changes

@dataclass(frozen=True)
class TimeChange:
    """Piecewise-linear bijection of [0, 1] through lattice knots (u/m, v/m)."""

    m: int
    knots: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        k = tuple((int(u), int(v)) for u, v in self.knots)
        if k[0] != (0, 0) or k[-1] != (self.m, self.m):
            raise InvalidParams("time change must fix both endpoints")
        for (u0, v0), (u1, v1) in zip(k, k[1:]):
            if not (u1 > u0 and v1 > v0):
                raise InvalidParams("time change knots must be strictly increasing")
        object.__setattr__(self, "knots", k)

    @classmethod
    def identity(cls, m: int) -> "TimeChange":
        return cls(m, ((0, 0), (m, m)))

    def __call__(self, s: float) -> float:
        us = np.array([u for u, _ in self.knots], dtype=float) / self.m
        vs = np.array([v for _, v in self.knots], dtype=float) / self.m
        return float(np.interp(s, us, vs))

    def sup_deviation(self) -> float:
        """sup |lambda(s) - s|; attained at a knot."""
        return max(abs(u - v) for u, v in self.knots) / self.m

    def norm0(self) -> float:
        """max |log slope| over the linear pieces."""
        return max(abs(math.log((v1 - v0) / (u1 - u0)))
                   for (u0, v0), (u1, v1) in zip(self.knots, self.knots[1:]))


def random_time_change(m: int, rng: np.random.Generator) -> TimeChange:
    """A random lattice time change, for property checks."""
    k = int(rng.integers(0, m))
    us = np.sort(rng.choice(np.arange(1, m), size=k, replace=False)) if k else []
    vs = np.sort(rng.choice(np.arange(1, m), size=k, replace=False)) if k else []
    knots = [(0, 0)] + list(zip(us, vs)) + [(m, m)]
    return TimeChange(m, tuple(knots))


# ---------------------------------------------------------------------------
# minimax lattice matcher

def overlap_pattern(k: int, l: int) -> Tuple[np.ndarray, np.ndarray]:
    """Cell pairs (i, j) whose images overlap on a segment of shape (k, l).

    On a linear piece from (u, v) to (u + k, v + l), cell u + i of the first
    path meets cell v + j of the second on a set of positive length exactly
    when i*l < (j+1)*k and j*k < (i+1)*l.
    """
    ii, jj = [], []
    for i in range(k):
        j_lo = (i * l) // k
        j_hi = -((-(i + 1) * l) // k) - 1  # ceil((i+1) l / k) - 1
        for j in range(j_lo, j_hi + 1):
            if i * l < (j + 1) * k and j * k < (i + 1) * l:
                ii.append(i)
                jj.append(j)
    return np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp)


@dataclass(frozen=True)
class MatchResult:
    value: float
    time_change: TimeChange
    max_step: int

    def __float__(self):
        return self.value


def _segment_rows(C: np.ndarray, k: int, l: int, pu: int) -> np.ndarray:
    """Segment cost of shape (k, l) starting at (pu, v) for v = 0..M-l."""
    M = C.shape[0]
    ii, jj = overlap_pattern(k, l)
    out = np.full(M - l + 1, -np.inf)
    for i, j in zip(ii, jj):
        np.maximum(out, C[pu + i, j:j + M - l + 1], out=out)
    return out


def _segment_table(C: np.ndarray, k: int, l: int) -> np.ndarray:
    M = C.shape[0]
    ii, jj = overlap_pattern(k, l)
    out = np.full((M - k + 1, M - l + 1), -np.inf)
    for i, j in zip(ii, jj):
        np.maximum(out, C[i:i + M - k + 1, j:j + M - l + 1], out=out)
    return out


def minimax_match(C: np.ndarray, end_cost: float, *, node_penalty: Optional[Callable[[int, np.ndarray], np.ndarray]] = None,
                  edge_penalty: Optional[Callable[[int, int], float]] = None,
                  max_step: Optional[int] = None) -> MatchResult:
    """Minimise the max of segment costs and penalties over lattice chains.

    ``C[a, b]`` is the cost of letting cell ``a`` of the first object meet cell
    ``b`` of the second.  ``node_penalty(u, v_array)`` is charged at every knot,
    ``edge_penalty(k, l)`` on every linear piece.  Pieces are limited to
    ``k, l <= max_step`` (default: unrestricted).
    """
    C = np.asarray(C, dtype=float)
    M = C.shape[0]
    K = M if max_step is None else max(1, min(int(max_step), M))
    tabled = K * K * M * M <= _TABLE_BUDGET
    tables = {}
    if tabled:
        for k in range(1, K + 1):
            for l in range(1, K + 1):
                t = _segment_table(C, k, l)
                if edge_penalty is not None:
                    t = np.maximum(t, edge_penalty(k, l))
                tables[(k, l)] = t

    dp = np.full((M + 1, M + 1), np.inf)
    back = np.zeros((M + 1, M + 1, 2), dtype=np.intp)
    dp[0, 0] = 0.0 if node_penalty is None else float(node_penalty(0, np.array([0]))[0])
    for u in range(1, M + 1):
        best = np.full(M + 1, np.inf)
        arg = np.zeros((M + 1, 2), dtype=np.intp)
        for k in range(1, min(K, u) + 1):
            pu = u - k
            prev = dp[pu]
            if not np.isfinite(prev).any():
                continue
            for l in range(1, K + 1):
                if tabled:
                    seg = tables[(k, l)][pu]
                else:
                    seg = _segment_rows(C, k, l, pu)
                    if edge_penalty is not None:
                        seg = np.maximum(seg, edge_penalty(k, l))
                cand = np.maximum(prev[:M + 1 - l], seg)
                tgt = best[l:]
                better = cand < tgt
                if better.any():
                    tgt[better] = cand[better]
                    arg[l:][better] = (k, l)
        if node_penalty is not None:
            best = np.maximum(best, node_penalty(u, np.arange(M + 1)))
        dp[u] = best
        back[u] = arg

    knots = [(M, M)]
    u, v = M, M
    while (u, v) != (0, 0):
        k, l = back[u, v]
        u, v = u - int(k), v - int(l)
        knots.append((u, v))
    tc = TimeChange(M, tuple(reversed(knots)))
    return MatchResult(float(max(dp[M, M], end_cost)), tc, K)


def _abs_cost(x: GridPath, y: GridPath) -> Tuple[np.ndarray, float]:
    a, b = x.values, y.values
    C = np.abs(a[:-1, None] - b[None, :-1])
    return C, abs(float(a[-1] - b[-1]))


def match_j1(x: GridPath, y: GridPath, max_step: Optional[int] = None) -> MatchResult:
    x, y = common_grid(x, y)
    C, end = _abs_cost(x, y)
    m = x.m
    return minimax_match(C, end, node_penalty=lambda u, v: np.abs(u - v) / m, max_step=max_step)


def match_j1_0(x: GridPath, y: GridPath, max_step: Optional[int] = None) -> MatchResult:
    x, y = common_grid(x, y)
    C, end = _abs_cost(x, y)
    return minimax_match(C, end, edge_penalty=lambda k, l: abs(math.log(l / k)), max_step=max_step)


def d_j1(x: GridPath, y: GridPath, max_step: Optional[int] = None) -> float:
    """J1 distance with penalty sup |lambda - e| over lattice time changes."""
    return match_j1(x, y, max_step).value


def d_j1_0(x: GridPath, y: GridPath, max_step: Optional[int] = None) -> float:
    """J1 distance with the log-slope penalty ||lambda||^0."""
    return match_j1_0(x, y, max_step).value


# ---------------------------------------------------------------------------
# path-of-paths metrics

def slice_distances(x: PathOfPaths, y: PathOfPaths, max_step: Optional[int] = None,
                    band: Optional[int] = None) -> np.ndarray:
    """Matrix of d_j1_0(x(t_a), y(t_b)); entries with |a - b| > band are inf."""
    X, Y = x.entries(), y.entries()
    n1 = len(X)
    D = np.full((n1, n1), np.inf)
    for a in range(n1):
        for b in range(n1):
            if band is None or abs(a - b) <= band:
                D[a, b] = d_j1_0(X[a], Y[b], max_step)
    return D


def rho_d(x: PathOfPaths, y: PathOfPaths, max_step: Optional[int] = None) -> float:
    if x.n != y.n:
        raise InvalidParams("rho_d needs equal time resolutions")
    return max(d_j1_0(a, b, max_step) for a, b in zip(x.entries(), y.entries()))


def _match_big_d(D: np.ndarray, step: float, max_step: Optional[int]) -> MatchResult:
    C = D[:-1, :-1]
    return minimax_match(C, float(D[-1, -1]), node_penalty=lambda u, v: np.abs(u - v) * step,
                         max_step=max_step)


def d_big_d(x: PathOfPaths, y: PathOfPaths, max_step: Optional[int] = None,
            space_max_step: Optional[int] = None) -> float:
    """Skorokhod distance on the time axis with rho_D as the inner metric.

    The time grid is t_k = k T / n with T the common horizon, and the
    penalty is sup |lambda(t) - t| over [0, T].
    """
    _check_same_times(x, y)
    D = slice_distances(x, y, space_max_step)
    return _match_big_d(D, x.horizon / x.n, max_step).value


def d_infty(x: PathOfPaths, y: PathOfPaths, max_step: Optional[int] = None,
            space_max_step: Optional[int] = None) -> Tuple[float, float]:
    """Truncated discounted metric on [0, T_max] and its tail bound exp(-T_max).

    The integrand exp(-t) * min(d_t, 1) is evaluated at every time node, where
    d_t is the distance between the restrictions to [0, t], and integrated by
    the trapezoid rule.
    """
    _check_same_times(x, y)
    D = slice_distances(x, y, space_max_step)
    step = x.horizon / x.n
    vals = np.empty(x.n + 1)
    vals[0] = D[0, 0]
    for k in range(1, x.n + 1):
        vals[k] = _match_big_d(D[:k + 1, :k + 1], step, max_step).value
    t = x.times()
    integrand = np.exp(-t) * np.minimum(vals, 1.0)
    return float(trapezoid(integrand, t)), math.exp(-x.horizon)


# ---------------------------------------------------------------------------
# moduli

def _window(delta: float, m: int) -> int:
    if not 0 < delta:
        raise InvalidParams("delta must be positive")
    return int(math.floor(delta * m + 1e-9))


def _w_second_from(dist: Callable[[int, int], np.ndarray], size: int, w: int) -> float:
    # A[i][l] = dist(l, l - i), B[j][l] = dist(l + j, l) on the valid ranges
    if w < 1:
        return 0.0
    best = 0.0
    idx = np.arange(size)
    Bmax = np.zeros(size)
    Bprefix = []
    for j in range(0, w + 1):
        b = np.zeros(size)
        ok = idx + j < size
        b[ok] = dist(idx[ok] + j, idx[ok])
        Bmax = np.maximum(Bmax, b)
        Bprefix.append(Bmax.copy())
    for i in range(0, w + 1):
        a = np.zeros(size)
        ok = idx - i >= 0
        a[ok] = dist(idx[ok], idx[ok] - i)
        best = max(best, float(np.max(np.minimum(a, Bprefix[w - i]))))
    return best


def w_second(x: GridPath, delta: float) -> float:
    """max of min(|x(s)-x(s1)|, |x(s2)-x(s)|) over grid s1 <= s <= s2, s2 - s1 <= delta."""
    v = x.values
    return _w_second_from(lambda a, b: np.abs(v[a] - v[b]), v.size, _window(delta, x.m))


def w_second_big_d(x: PathOfPaths, delta: float, max_step: Optional[int] = None) -> float:
    """The same modulus in time with d_j1_0 between slices; delta is in units of the horizon."""
    w = _window(delta / x.horizon, x.n)
    w = min(w, x.n)
    D = slice_distances(x, x, max_step, band=w)
    return _w_second_from(lambda a, b: D[a, b], x.n + 1, w)
