"""Partial-sum approximations of the stable motion and the Levy-sheet double sum.

A panel is an (n, m+1) array whose row i is the path X_{i+1} on the grid
l/m.  Sheets use t_k = k/n, so [n t_k] = k exactly and no floating-point
floor is ever taken.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import InvalidParams
from .prm import SheetGrid
from .rv import RVLaw, c_alpha_inv, centering_mu, check_construction_alpha, normalizing_a_n, sample
from .seeds import DOUBLE_SUM, PANEL, PREPASS, as_seed
from .spectral import (SpectralSampler, abs_gaussian_moment, c_y_alpha, lepage_endpoint_brownian,
                       lepage_panel, sample_spectral_array)


@dataclass(frozen=True, eq=False)
class PathPanel:
    paths: np.ndarray
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        P = np.asarray(self.paths, dtype=float)
        if P.ndim != 2 or P.shape[1] < 2:
            raise InvalidParams("a panel is an (n, m+1) array with m >= 1")
        if not np.all(np.isfinite(P)):
            raise InvalidParams("panel values must be finite")
        P.setflags(write=False)
        object.__setattr__(self, "paths", P)

    @property
    def n(self) -> int:
        return self.paths.shape[0]

    @property
    def m(self) -> int:
        return self.paths.shape[1] - 1

    def norms(self) -> np.ndarray:
        return np.max(np.abs(self.paths), axis=1)


def partial_sum_sheet(panel: PathPanel, a_n: float, mu_path=None, n: Optional[int] = None) -> SheetGrid:
    """S_n(t_k, s) = a_n^{-1} sum_{i<=k} (X_i(s) - mu(s)) for k = 0..n.

    ``n`` sets the time grid t_k = k/n (default: panel size, i.e. T = 1); the
    panel must hold at least ``[n T]`` paths, which here is its own length.
    """
    if not a_n > 0:
        raise InvalidParams("a_n must be positive")
    X = panel.paths
    n = panel.n if n is None else int(n)
    acc = np.zeros((X.shape[0] + 1, X.shape[1]))
    if mu_path is None:
        np.cumsum(X, axis=0, out=acc[1:])
    else:
        mu = np.broadcast_to(np.asarray(getattr(mu_path, "values", mu_path), dtype=float), X.shape[1:])
        np.cumsum(X - mu, axis=0, out=acc[1:])
    T_max = X.shape[0] / n
    return SheetGrid(acc / a_n, T_max, mu_path is not None, {"a_n": a_n, "n": n})


def truncation_mask(panel: PathPanel, a_n: float, eps: float) -> np.ndarray:
    """True for paths kept by the truncation, i.e. ||X_i|| > a_n eps."""
    return panel.norms() > a_n * eps


def truncated_sum_sheet(panel: PathPanel, a_n: float, eps: float, n: Optional[int] = None) -> SheetGrid:
    """Partial sums of the paths with ||X_i|| > a_n eps."""
    keep = truncation_mask(panel, a_n, eps)
    kept = PathPanel(np.where(keep[:, None], panel.paths, 0.0), panel.source)
    out = partial_sum_sheet(kept, a_n, None, n)
    return SheetGrid(out.values, out.T_max, False, dict(out.meta, eps=eps))


def small_jump_sheet(panel: PathPanel, a_n: float, eps: float, n: Optional[int] = None) -> SheetGrid:
    """Partial sums of the paths with ||X_i|| <= a_n eps."""
    keep = truncation_mask(panel, a_n, eps)
    small = PathPanel(np.where(keep[:, None], 0.0, panel.paths), panel.source)
    out = partial_sum_sheet(small, a_n, None, n)
    return SheetGrid(out.values, out.T_max, False, dict(out.meta, eps=eps))


# ---------------------------------------------------------------------------
# panel sources

@dataclass(frozen=True)
class ProductSource:
    """X_i = xi_i W_i with scalar xi_i from ``law`` and W_i from ``spectral``."""

    law: RVLaw
    spectral: SpectralSampler

    @property
    def alpha(self):
        return self.law.alpha

    @property
    def m(self):
        return self.spectral.m

    def tail_constant(self) -> float:
        return self.law.C

    def draw(self, seed, count: int) -> np.ndarray:
        s = as_seed(seed)
        xi = sample(self.law, s.generator(PANEL, 0), count)
        return xi[:, None] * sample_spectral_array(self.spectral, s.generator(PANEL, 1), count)

    def truncated_mean(self, bound: float) -> Optional[np.ndarray]:
        """E[X 1{||X|| <= bound}] in closed form where available."""
        if not self.spectral.is_constant or self.law.kind not in ("pareto", "two_sided_pareto"):
            return None
        a = self.alpha
        if bound <= 1:
            return np.zeros(self.m + 1)
        mag = a / (a - 1) * (1 - bound ** (1 - a)) if a != 1 else math.log(bound)
        sign = 2 * self.law.p - 1
        phi = 1.0 if self.spectral.kind == "constant_one" else 2 * self.spectral.p - 1
        return np.full(self.m + 1, mag * sign * phi)

    def describe(self) -> dict:
        return {"source": "product", "law": self.law.to_config(), "spectral": self.spectral.to_config()}


@dataclass(frozen=True)
class Example1Source:
    """X_i(s) = a_m^{-1} sum_{j <= [ms]} (xi_ij - mu): rows of the double sum."""

    law: RVLaw
    m: int

    @property
    def alpha(self):
        return self.law.alpha

    def tail_constant(self) -> float:
        return self.law.C

    def draw(self, seed, count: int) -> np.ndarray:
        xi = sample(self.law, as_seed(seed).generator(PANEL, 0), (count, self.m))
        mu = centering_mu(self.law)
        out = np.zeros((count, self.m + 1))
        np.cumsum(xi - mu, axis=1, out=out[:, 1:])
        return out / normalizing_a_n(self.law, self.m)

    def truncated_mean(self, bound: float):
        return None

    def describe(self) -> dict:
        return {"source": "example1", "law": self.law.to_config(), "m": self.m}


@dataclass(frozen=True)
class LePageSource:
    """Truncated LePage paths with Brownian (or constant) summands."""

    alpha: float
    K: int
    m: int
    base: str = "brownian"
    c_y: Optional[float] = None

    def tail_constant(self) -> float:
        if self.c_y is not None:
            return self.c_y
        return c_y_alpha(self.base, self.alpha, 20_000, 0, self.m)[0]

    def draw(self, seed, count: int) -> np.ndarray:
        return lepage_panel(self.alpha, self.K, self.base, self.m, as_seed(seed).child(PANEL), count)

    def truncated_mean(self, bound: float):
        # symmetric summands
        return np.zeros(self.m + 1)

    def describe(self) -> dict:
        return {"source": "lepage", "alpha": self.alpha, "K": self.K, "m": self.m, "base": self.base}


def make_panel(source, seed, count: int) -> PathPanel:
    return PathPanel(source.draw(seed, count), source.describe())


# ---------------------------------------------------------------------------
# negligibility of small jumps

@dataclass
class NegligibilityResult:
    estimate: float
    se: float
    per_k: Optional[np.ndarray] = None
    markov_bound: Optional[float] = None


def _mc_truncated_mean(source, bound, seed, count=100_000) -> np.ndarray:
    X = source.draw(as_seed(seed).child(PREPASS), count)
    small = np.max(np.abs(X), axis=1) <= bound
    return np.where(small[:, None], X, 0.0).mean(axis=0)


def negligibility_stat(source, n: int, eps: float, delta: float, T: float, reps: int, seed) -> NegligibilityResult:
    """Monte Carlo size of the small-jump remainder.

    alpha < 1: P(||S_n - S_n^(eps)||_{T,D} > delta), with the Markov bound
    (T/delta) alpha/(1-alpha) c eps^{1-alpha} reported alongside (c = 1 under
    a_n = (C n)^{1/alpha}).
    alpha > 1: max over k <= [nT] of
    P(||sum_{i<=k} (X_i 1{||X_i|| <= a_n eps} - E[...])|| > a_n delta).
    """
    if reps < 1:
        raise InvalidParams("reps must be >= 1")
    alpha = source.alpha
    check_construction_alpha(alpha)
    a_n = (source.tail_constant() * n) ** (1 / alpha)
    N = int(math.floor(n * T + 1e-9))
    seed = as_seed(seed)
    hits = np.zeros((reps, max(N, 1)), dtype=bool)
    mean = None
    if alpha > 1:
        mean = source.truncated_mean(a_n * eps)
        if mean is None:
            mean = _mc_truncated_mean(source, a_n * eps, seed)
    for r in range(reps):
        X = source.draw(seed.replicate(r), N)
        small = np.max(np.abs(X), axis=1) <= a_n * eps
        Y = np.where(small[:, None], X, 0.0)
        if mean is not None:
            Y = Y - mean
        norms = np.max(np.abs(np.cumsum(Y, axis=0)), axis=1) / a_n
        if alpha < 1:
            hits[r, 0] = norms.max(initial=0.0) > delta
        else:
            hits[r, :N] = norms > delta
    if alpha < 1:
        p = float(hits[:, 0].mean())
        bound = T / delta * alpha / (1 - alpha) * eps ** (1 - alpha)
        return NegligibilityResult(p, math.sqrt(p * (1 - p) / reps), None, bound)
    per_k = hits.mean(axis=0)
    k = int(np.argmax(per_k))
    p = float(per_k[k])
    return NegligibilityResult(p, math.sqrt(p * (1 - p) / reps), per_k)


# ---------------------------------------------------------------------------
# double sums

def levy_sheet_double_sum(law: RVLaw, n: int, m: int, seed, a_n: Optional[float] = None,
                          a_m: Optional[float] = None, xi: Optional[np.ndarray] = None) -> SheetGrid:
    """T(k/n, l/m) = (a_n a_m)^{-1} sum_{i<=k} sum_{j<=l} (xi_ij - mu).

    Draws fill an (n, m) block in row-major order, so the first n rows of a
    2n-row sheet reuse exactly the draws of the n-row sheet.
    """
    check_construction_alpha(law.alpha, "the double-sum sheet")
    if n < 1 or m < 1:
        raise InvalidParams("n and m must be >= 1")
    a_n = normalizing_a_n(law, n) if a_n is None else a_n
    a_m = normalizing_a_n(law, m) if a_m is None else a_m
    mu = centering_mu(law)
    if xi is None:
        xi = sample(law, as_seed(seed).generator(DOUBLE_SUM), (n, m))
    acc = np.zeros((n + 1, m + 1))
    acc[1:, 1:] = np.cumsum(np.cumsum(xi - mu, axis=1), axis=0)
    meta = {"law": law.to_config(), "a_n": a_n, "a_m": a_m, "mu": mu, "construction": "double_sum"}
    return SheetGrid(acc / (a_n * a_m), 1.0, mu != 0.0, meta)


def example1_sheet(law: RVLaw, n: int = 400, m: int = 250, seed=0) -> SheetGrid:
    """Double-sum sheet for the scalar law menu (Pareto, two-sided Pareto, Frechet, Burr, stable)."""
    return levy_sheet_double_sum(law, n, m, seed)


def double_sum_corner(law: RVLaw, n: int, m: int, seed, reps: int, t: float = 1.0, s: float = 1.0) -> np.ndarray:
    """Replicates of T_{n,m}(t, s); replicate r uses the sheet seed ``seed.replicate(r)``."""
    seed = as_seed(seed)
    k, l = int(math.floor(n * t + 1e-9)), int(math.floor(m * s + 1e-9))
    scale = normalizing_a_n(law, n) * normalizing_a_n(law, m)
    mu = centering_mu(law)
    out = np.empty(reps)
    for r in range(reps):
        xi = sample(law, seed.replicate(r).generator(DOUBLE_SUM), (n, m))
        out[r] = np.sum(xi[:k, :l] - mu) / scale
    return out


def double_sum_target(law: RVLaw, t: float = 1.0, s: float = 1.0):
    """Limit law of T_{n,m}(t, s) under both scale readings, as (power, linear) StableParams.

    With a_n a_m = C^{1/alpha} a_{nm}, the limit has sigma^alpha = t s C_alpha^{-1} / C
    (power reading); the linear reading is (ts)^{1/alpha} C_alpha^{-1}.
    """
    from .rv import StableParams
    a = law.alpha
    beta = 2 * law.p - 1
    k = c_alpha_inv(a)
    power = StableParams(a, (t * s * k / law.C) ** (1 / a), beta, 0.0)
    linear = StableParams(a, (t * s) ** (1 / a) * k, beta, 0.0)
    return power, linear


def example2_sheet(alpha: float, K: int, n: int, m: int, seed, c_w: Optional[float] = None,
                   c_w_reps: int = 20_000) -> SheetGrid:
    """Partial sums of Brownian LePage paths with a_n = (n C_{W,alpha})^{1/alpha}."""
    check_construction_alpha(alpha)
    if K < 1 or n < 1 or m < 1:
        raise InvalidParams("K, n and m must be >= 1")
    if c_w is None:
        c_w = c_y_alpha("brownian", alpha, c_w_reps, as_seed(seed).child(PREPASS), m)[0]
    panel = PathPanel(lepage_panel(alpha, K, "brownian", m, seed, n),
                      {"source": "lepage", "alpha": alpha, "K": K})
    a_n = (n * c_w) ** (1 / alpha)
    out = partial_sum_sheet(panel, a_n)
    return SheetGrid(out.values, 1.0, False, {"a_n": a_n, "c_w": c_w, "K": K, "construction": "example2"})


def example2_corner(alpha: float, K: int, n: int, seed, reps: int, c_w: float) -> np.ndarray:
    """Replicates of the Example-2 sheet at (1, 1) using exact N(0,1) endpoint values."""
    seed = as_seed(seed)
    a_n = (n * c_w) ** (1 / alpha)
    out = np.empty(reps)
    for r in range(reps):
        out[r] = lepage_endpoint_brownian(alpha, K, seed.replicate(r), n).sum() / a_n
    return out


def example2_target(alpha: float, c_w: float, s: float = 1.0):
    """S_a(sigma, 0, 0) with sigma^a = C_a^{-1} E|W(s)|^a / C_{W,a}, (power, linear)."""
    from .rv import StableParams
    k = c_alpha_inv(alpha)
    ew = s ** (alpha / 2) * abs_gaussian_moment(alpha)
    return (StableParams(alpha, (k * ew / c_w) ** (1 / alpha), 0.0, 0.0),
            StableParams(alpha, k * ew / c_w, 0.0, 0.0))
