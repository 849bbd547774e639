"""Spectral path samplers, Brownian paths and LePage series."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .cadlag import GridPath
from .errors import DataError, InvalidParams
from .seeds import LEPAGE_BASE, LEPAGE_EXP, LEPAGE_SIGNS, SPECTRAL, as_seed

KINDS = ("constant_one", "signed_constant", "geom_bm", "user_paths", "size_biased_bm")


@dataclass(frozen=True, eq=False)
class SpectralSampler:
    """Law of the angular part on the unit sphere of D.

    kinds:
      constant_one     z = 1
      signed_constant  z = +1 with probability p, else -1
      geom_bm          z = exp(W) / ||exp(W)|| for a Brownian path W
      user_paths       uniform pick among ingested paths, each normalised
      size_biased_bm   angular part of a Brownian path under the weight
                       ||W||^alpha (the spectral law of a LePage series
                       with Brownian summands); sampled by importance
                       resampling from a fixed pool
    """

    kind: str
    m: int
    p: float = 1.0
    paths: Optional[np.ndarray] = None
    alpha: float = 1.5
    pool: int = 100_000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParams(f"unknown spectral kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.m < 1:
            raise InvalidParams("space resolution m must be >= 1")
        if self.kind == "signed_constant" and not 0 <= self.p <= 1:
            raise InvalidParams("p must lie in [0, 1]")
        if self.kind == "user_paths":
            if self.paths is None:
                raise InvalidParams("user_paths needs a panel")
            P = normalize_panel(self.paths)
            if P.shape[1] != self.m + 1:
                raise InvalidParams("panel resolution does not match m")
            object.__setattr__(self, "paths", P)

    @property
    def is_constant(self) -> bool:
        return self.kind in ("constant_one", "signed_constant")

    def to_config(self) -> dict:
        d = {"kind": self.kind, "m": self.m}
        if self.kind == "signed_constant":
            d["p"] = self.p
        if self.kind == "size_biased_bm":
            d["alpha"] = self.alpha
        return d


def normalize_panel(paths, names=None) -> np.ndarray:
    """Divide each row by its sup norm; an all-zero row is a data error."""
    P = np.asarray(paths, dtype=float)
    if P.ndim != 2:
        raise InvalidParams("panel must be 2-D (paths x grid points)")
    norms = np.max(np.abs(P), axis=1)
    bad = np.flatnonzero(norms == 0)
    if bad.size:
        label = names[bad[0]] if names is not None else f"column {bad[0]}"
        raise DataError(f"{label} is identically zero and cannot be normalised")
    return P / norms[:, None]


def brownian_paths(gen: np.random.Generator, count: int, m: int) -> np.ndarray:
    """Rows W(l/m) = m^{-1/2} sum_{k<=l} xi_k with standard Gaussian xi."""
    W = np.zeros((count, m + 1))
    np.cumsum(gen.standard_normal((count, m)), axis=1, out=W[:, 1:])
    W /= math.sqrt(m)
    return W


def brownian_path(m: int, seed) -> GridPath:
    if m < 1:
        raise InvalidParams("m must be >= 1")
    return GridPath(brownian_paths(as_seed(seed).generator(SPECTRAL), 1, m)[0])


def _size_biased_pool(m: int, alpha: float, pool: int):
    # fixed pool so that the resampled law is the same for every caller
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(0x5B1A5, spawn_key=(m, pool))))
    W = brownian_paths(gen, pool, m)
    norms = np.max(np.abs(W), axis=1)
    w = norms ** alpha
    return W / norms[:, None], np.cumsum(w) / np.sum(w)


_POOLS = {}


def sample_spectral_array(sampler: SpectralSampler, gen: np.random.Generator, count: int) -> np.ndarray:
    m = sampler.m
    k = sampler.kind
    if k == "constant_one":
        return np.ones((count, m + 1))
    if k == "signed_constant":
        signs = np.where(gen.random(count) < sampler.p, 1.0, -1.0)
        return np.repeat(signs[:, None], m + 1, axis=1)
    if k == "geom_bm":
        E = np.exp(brownian_paths(gen, count, m))
        return E / np.max(E, axis=1)[:, None]
    if k == "user_paths":
        return sampler.paths[gen.integers(0, sampler.paths.shape[0], count)]
    key = (m, sampler.alpha, sampler.pool)
    if key not in _POOLS:
        _POOLS[key] = _size_biased_pool(m, sampler.alpha, sampler.pool)
    Z, cw = _POOLS[key]
    idx = np.minimum(np.searchsorted(cw, gen.random(count), side="right"), cw.size - 1)
    return Z[idx]


def sample_spectral(sampler: SpectralSampler, seed, count: int) -> list:
    arr = sample_spectral_array(sampler, as_seed(seed).generator(SPECTRAL), count)
    return [GridPath(row) for row in arr]


def assumption_diagnostics(Z: np.ndarray) -> dict:
    """Empirical checks on emitted angular parts.

    zero_fraction[l]  share of samples with z(l/m) = 0 (should vanish)
    jump_fraction[l]  share of samples jumping at l/m (grid artefact when > 0)
    """
    Z = np.asarray(Z, dtype=float)
    zero = np.mean(Z == 0, axis=0)
    jumps = np.zeros(Z.shape[1])
    jumps[1:] = np.mean(Z[:, 1:] != Z[:, :-1], axis=0)
    return {
        "zero_fraction": zero,
        "jump_fraction": jumps,
        "assumption_a_ok": bool(np.all(zero == 0)),
        "assumption_b_ok": bool(np.all(jumps == 0)),
        "unit_norm_ok": bool(np.all(np.max(np.abs(Z), axis=1) == 1.0)),
    }


@dataclass
class PhiPsi:
    phi: np.ndarray
    psi: np.ndarray
    phi_se: np.ndarray
    psi_se: np.ndarray
    exact: bool = False


def phi_psi(sampler: SpectralSampler, seed, count: int) -> PhiPsi:
    """Means of z(s) and z(s)^2 under the spectral law, per grid point."""
    m = sampler.m
    if sampler.kind == "constant_one":
        one = np.ones(m + 1)
        return PhiPsi(one, one.copy(), np.zeros(m + 1), np.zeros(m + 1), True)
    if sampler.kind == "signed_constant":
        return PhiPsi(np.full(m + 1, 2 * sampler.p - 1.0), np.ones(m + 1),
                      np.zeros(m + 1), np.zeros(m + 1), True)
    if count < 1:
        raise InvalidParams("count must be >= 1")
    Z = sample_spectral_array(sampler, as_seed(seed).generator(SPECTRAL), count)
    Z2 = Z * Z
    sd = (lambda a: np.std(a, axis=0, ddof=1) / math.sqrt(count)) if count > 1 else (lambda a: np.zeros(m + 1))
    return PhiPsi(Z.mean(axis=0), Z2.mean(axis=0), sd(Z), sd(Z2))


def tail_constants(sampler: SpectralSampler, alpha: float, c: float = 1.0, seed=0,
                   count: int = 100_000) -> Tuple[np.ndarray, np.ndarray]:
    """c_s^+ = c E[(z(s)^+)^alpha] and c_s^- = c E[(z(s)^-)^alpha] per grid point."""
    m = sampler.m
    if sampler.kind == "constant_one":
        return np.full(m + 1, c), np.zeros(m + 1)
    if sampler.kind == "signed_constant":
        return np.full(m + 1, c * sampler.p), np.full(m + 1, c * (1 - sampler.p))
    Z = sample_spectral_array(sampler, as_seed(seed).generator(SPECTRAL, 1), count)
    return c * np.mean(np.maximum(Z, 0) ** alpha, axis=0), c * np.mean(np.maximum(-Z, 0) ** alpha, axis=0)


def abs_gaussian_moment(alpha: float) -> float:
    """E|N(0,1)|^alpha."""
    return 2 ** (alpha / 2) * math.gamma((alpha + 1) / 2) / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# LePage series

BASES = ("one", "brownian")


def _base_paths(base, gen, count, m):
    if base == "one":
        return np.ones((count, m + 1))
    if base == "brownian":
        return brownian_paths(gen, count, m)
    if isinstance(base, SpectralSampler):
        return sample_spectral_array(base, gen, count)
    raise InvalidParams(f"unknown LePage base {base!r}; choose from {', '.join(BASES)} or a SpectralSampler")


def lepage_terms(alpha: float, K: int, seed, count: int = 1):
    """Signs and Gamma_j^{-1/alpha} for ``count`` independent series, shape (count, K)."""
    if not 0 < alpha < 2:
        raise InvalidParams("alpha must lie in (0, 2)")
    if K < 1:
        raise InvalidParams("truncation K must be >= 1")
    s = as_seed(seed)
    signs = np.where(s.generator(LEPAGE_SIGNS).random((count, K)) < 0.5, 1.0, -1.0)
    gam = np.cumsum(s.generator(LEPAGE_EXP).standard_exponential((count, K)), axis=1)
    return signs, gam ** (-1 / alpha)


def lepage_panel(alpha: float, K: int, base, m: int, seed, count: int = 1) -> np.ndarray:
    """``count`` independent truncated LePage paths, shape (count, m+1)."""
    signs, g = lepage_terms(alpha, K, seed, count)
    if isinstance(base, str) and base == "one":
        # exact constant rows; a matrix product would round column by column
        return np.repeat((signs * g).sum(axis=1)[:, None], m + 1, axis=1)
    gen = as_seed(seed).generator(LEPAGE_BASE)
    out = np.empty((count, m + 1))
    for i in range(count):
        Y = _base_paths(base, gen, K, m)
        out[i] = (signs[i] * g[i]) @ Y
    return out


def lepage_path(alpha: float, K: int, base, m: int, seed) -> GridPath:
    """sum_{j<=K} eps_j Gamma_j^{-1/alpha} Y_j."""
    return GridPath(lepage_panel(alpha, K, base, m, seed, 1)[0])


def lepage_endpoint_brownian(alpha: float, K: int, seed, count: int) -> np.ndarray:
    """The s = 1 value of ``count`` Brownian LePage paths.

    Uses W_j(1) ~ N(0, 1), which is exactly the law of the Donsker value at
    s = 1 for Gaussian increments at any resolution.
    """
    signs, g = lepage_terms(alpha, K, seed, count)
    xi = as_seed(seed).generator(LEPAGE_BASE, 1).standard_normal((count, K))
    return np.einsum("ij,ij->i", signs * g, xi)


def c_y_alpha(base, alpha: float, reps: int, seed, m: int = 1000) -> Tuple[float, float]:
    """Monte Carlo estimate of E ||Y||^alpha and its standard error."""
    if reps < 1:
        raise InvalidParams("reps must be >= 1")
    if base == "one":
        return 1.0, 0.0
    gen = as_seed(seed).generator(LEPAGE_BASE, 2)
    vals = np.empty(reps)
    chunk = max(1, 2_000_000 // (m + 1))
    for start in range(0, reps, chunk):
        k = min(chunk, reps - start)
        Y = _base_paths(base, gen, k, m)
        vals[start:start + k] = np.max(np.abs(Y), axis=1) ** alpha
    se = float(np.std(vals, ddof=1) / math.sqrt(reps)) if reps > 1 else float("inf")
    return float(vals.mean()), se
