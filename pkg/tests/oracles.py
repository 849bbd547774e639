"""Independent brute-force oracles used by the tests.

None of these share code with the package's matcher or moduli: time changes
are enumerated outright and step functions are evaluated pointwise.
"""
from fractions import Fraction
from itertools import combinations
import math

import numpy as np


def chains(m):
    """Every strictly increasing lattice chain from (0, 0) to (m, m)."""
    inner = range(1, m)
    for k in range(0, m):
        for us in combinations(inner, k):
            for vs in combinations(inner, k):
                yield [(0, 0)] + list(zip(us, vs)) + [(m, m)]


def _lam(knots, m, s):
    # exact piecewise-linear map through the knots
    for (u0, v0), (u1, v1) in zip(knots, knots[1:]):
        if Fraction(u0, m) <= s <= Fraction(u1, m):
            return Fraction(v0, m) + (s - Fraction(u0, m)) * Fraction(v1 - v0, u1 - u0)
    raise AssertionError


def _lam_inv(knots, m, t):
    return _lam([(v, u) for u, v in knots], m, t)


def _cell(s, m):
    return min(int(math.floor(s * m)), m - 1) if s < 1 else m


def sup_after_change(knots, m, dist, end):
    """sup_s dist(cell of s, cell of lambda(s)) with dist(m, m) = end."""
    pts = {Fraction(l, m) for l in range(m + 1)}
    pts |= {_lam_inv(knots, m, Fraction(l, m)) for l in range(m + 1)}
    pts = sorted(pts)
    best = end
    for a, b in zip(pts, pts[1:]):
        mid = (a + b) / 2
        best = max(best, dist(_cell(mid, m), _cell(_lam(knots, m, mid), m)))
    return best


def j1_penalty(knots, m):
    return max(abs(u - v) for u, v in knots) / m


def j1_0_penalty(knots, m):
    return max(abs(math.log((v1 - v0) / (u1 - u0))) for (u0, v0), (u1, v1) in zip(knots, knots[1:]))


def brute_path_distance(x, y, penalty):
    """inf over lattice time changes of max(sup |x - y o lambda|, penalty)."""
    a, b = np.asarray(x, float), np.asarray(y, float)
    m = a.size - 1
    dist = lambda i, j: abs(a[i] - b[j])
    end = abs(a[m] - b[m])
    return min(max(sup_after_change(k, m, dist, end), penalty(k, m)) for k in chains(m))


def brute_big_d(D, step):
    """Outer Skorokhod matching on a slice-distance matrix D (n+1 x n+1)."""
    n = D.shape[0] - 1
    dist = lambda i, j: D[i, j]
    return min(max(sup_after_change(k, n, dist, D[n, n]), max(abs(u - v) for u, v in k) * step)
               for k in chains(n))


def brute_w_second(vals, w, dist=None):
    """Triple scan over grid points s1 <= s <= s2 with s2 - s1 <= w cells."""
    v = np.asarray(vals, float)
    if dist is None:
        dist = lambda i, j: abs(v[i] - v[j])
    N = len(v)
    best = 0.0
    for s1 in range(N):
        for s in range(s1, min(N, s1 + w + 1)):
            for s2 in range(s, min(N, s1 + w + 1)):
                best = max(best, min(dist(s, s1), dist(s2, s)))
    return best


def brute_partial_sums(X, a_n):
    """Sheet[k, l] = sum_{i<k} X[i, l] / a_n by direct re-summation."""
    n, m1 = X.shape
    out = np.zeros((n + 1, m1))
    for k in range(1, n + 1):
        for l in range(m1):
            acc = 0.0
            for i in range(k):
                acc += X[i, l]
            out[k, l] = acc / a_n
    return out
