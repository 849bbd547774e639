"""Poisson random measure construction of the D-valued stable motion.

Atoms (T_i, R_i, W_i) live on [0, T_max] x (eps, inf) x S_D with intensity
Leb x c nu_alpha x Gamma_1, where nu_alpha(dr) = alpha r^{-alpha-1} dr.

Radii are organised in annuli I_0 = (1, inf) and I_j = (eps_j, eps_{j-1}] with
eps_j = 2^{-j}.  Each annulus draws from its own seed sub-stream, so lowering
eps only adds atoms and sheets for different eps are nested pathwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .cadlag import PathOfPaths
from .errors import AlphaBelowOne, DegenerateTails, InvalidParams, OutOfWindow
from .rv import StableParams, c_alpha_inv, check_construction_alpha
from .seeds import PRM, PREPASS, SeedSpec, as_seed
from .spectral import SpectralSampler, phi_psi, sample_spectral_array

PREPASS_COUNT = 100_000


def annulus_edges(j: int) -> Tuple[float, float]:
    """(lower, upper) radius of annulus j; the upper edge of I_0 is inf."""
    if j == 0:
        return 1.0, math.inf
    return 2.0 ** (-j), 2.0 ** (-(j - 1))


def annuli_for(eps: float) -> int:
    """Index of the deepest annulus needed to cover (eps, inf)."""
    if eps >= 1.0:
        return 0
    return int(math.ceil(-math.log2(eps) - 1e-12))


def nu_mass(lo: float, hi: float, alpha: float) -> float:
    """nu_alpha((lo, hi])."""
    return lo ** (-alpha) - (0.0 if math.isinf(hi) else hi ** (-alpha))


def nu_first_moment(lo: float, hi: float, alpha: float) -> float:
    """int_lo^hi r nu_alpha(dr), alpha != 1."""
    if math.isinf(hi):
        if alpha <= 1:
            return math.inf
        return alpha / (alpha - 1) * lo ** (1 - alpha)
    return alpha / (1 - alpha) * (hi ** (1 - alpha) - lo ** (1 - alpha))


def nu_second_moment(lo: float, hi: float, alpha: float) -> float:
    """int_lo^hi r^2 nu_alpha(dr)."""
    if math.isinf(hi):
        return math.inf
    return alpha / (2 - alpha) * (hi ** (2 - alpha) - lo ** (2 - alpha))


@dataclass(frozen=True, eq=False)
class PointSet:
    T_max: float
    eps: float
    c: float
    alpha: float
    T: np.ndarray
    R: np.ndarray
    W: np.ndarray
    annulus: np.ndarray

    def __post_init__(self):
        for name in ("T", "R", "W", "annulus"):
            a = np.asarray(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def __len__(self):
        return self.T.size

    @property
    def m(self) -> int:
        return self.W.shape[1] - 1

    def restrict(self, eps: float) -> "PointSet":
        keep = self.R > eps
        return PointSet(self.T_max, max(eps, self.eps), self.c, self.alpha,
                        self.T[keep], self.R[keep], self.W[keep], self.annulus[keep])

    def block(self, j: int) -> "PointSet":
        keep = self.annulus == j
        lo, _ = annulus_edges(j)
        return PointSet(self.T_max, max(lo, self.eps), self.c, self.alpha,
                        self.T[keep], self.R[keep], self.W[keep], self.annulus[keep])


def _validate_window(T_max, eps, c, alpha):
    if not T_max > 0:
        raise InvalidParams("T_max must be positive")
    if not eps > 0:
        raise InvalidParams("eps must be positive")
    if not c > 0:
        raise InvalidParams("c must be positive")
    check_construction_alpha(alpha)


def sample_point_window(T_max: float, eps: float, c: float, alpha: float,
                        spectral: SpectralSampler, seed) -> PointSet:
    """A single window drawn directly: K ~ Poisson(T_max c eps^-alpha), R = eps U^{-1/alpha}."""
    _validate_window(T_max, eps, c, alpha)
    gen = as_seed(seed).generator(PRM)
    K = int(gen.poisson(T_max * c * eps ** (-alpha)))
    T = T_max * (1.0 - gen.random(K))
    R = eps * (1.0 - gen.random(K)) ** (-1 / alpha)
    W = sample_spectral_array(spectral, gen, K)
    return PointSet(T_max, eps, c, alpha, T, R, W, np.full(K, -1, dtype=np.intp))


def _annulus_points(T_max, j, c, alpha, spectral, seed: SeedSpec, marginal_index=None):
    lo, hi = annulus_edges(j)
    gen = seed.generator(PRM, j)
    K = int(gen.poisson(T_max * c * nu_mass(lo, hi, alpha)))
    T = T_max * (1.0 - gen.random(K))
    U = 1.0 - gen.random(K)
    a_lo = lo ** (-alpha)
    a_hi = 0.0 if math.isinf(hi) else hi ** (-alpha)
    R = (a_lo - U * (a_lo - a_hi)) ** (-1 / alpha)
    if spectral.kind == "constant_one":
        W = np.ones((K, spectral.m + 1))
    else:
        W = sample_spectral_array(spectral, seed.generator(PRM, j, 1), K)
    if marginal_index is not None:
        W = W[:, marginal_index]
    return T, R, W


def sample_ladder(T_max: float, eps: float, c: float, alpha: float,
                  spectral: SpectralSampler, seed) -> PointSet:
    """Atoms with R > eps, assembled annulus by annulus (nested in eps)."""
    _validate_window(T_max, eps, c, alpha)
    seed = as_seed(seed)
    Ts, Rs, Ws, As = [], [], [], []
    for j in range(annuli_for(eps) + 1):
        T, R, W = _annulus_points(T_max, j, c, alpha, spectral, seed)
        keep = R > eps
        Ts.append(T[keep]); Rs.append(R[keep]); Ws.append(W[keep])
        As.append(np.full(int(keep.sum()), j, dtype=np.intp))
    return PointSet(T_max, eps, c, alpha, np.concatenate(Ts), np.concatenate(Rs),
                    np.concatenate(Ws, axis=0), np.concatenate(As))


def _s_index(points: PointSet, s: float) -> int:
    if not 0 <= s <= 1:
        raise OutOfWindow("s must lie in [0, 1]")
    return points.m if s >= 1 else int(math.floor(s * points.m))


def _check_t(points: PointSet, t: float):
    if not 0 <= t <= points.T_max:
        raise OutOfWindow(f"t = {t} lies outside the window [0, {points.T_max}]")


def z_eps_eval(points: PointSet, t: float, s: float) -> float:
    """sum_{T_i <= t} R_i W_i(s), correctly rounded (order independent)."""
    _check_t(points, t)
    l = _s_index(points, s)
    sel = points.T <= t
    return math.fsum((points.R[sel] * points.W[sel, l]).tolist())


def z_block_eval(points: PointSet, j: int, t: float, s: float) -> float:
    """Contribution of annulus j alone."""
    return z_eps_eval(points.block(j), t, s)


def mean_z_eps(t: float, s_phi: float, eps: float, c: float, alpha: float) -> float:
    """E Z^(eps)(t, s) = c t phi(s) alpha/(alpha-1) eps^{1-alpha}, alpha > 1."""
    if alpha <= 1:
        raise AlphaBelowOne("the truncated mean is finite only for alpha > 1")
    return c * t * s_phi * alpha / (alpha - 1) * eps ** (1 - alpha)


def phi_for(spectral: SpectralSampler, seed=0) -> Tuple[np.ndarray, float]:
    """phi on the grid and the largest standard error of its estimate."""
    pp = phi_psi(spectral, as_seed(seed).child(PREPASS), PREPASS_COUNT)
    return pp.phi, float(np.max(pp.phi_se))


@dataclass(frozen=True, eq=False)
class SheetGrid:
    """Values Z(k T_max / n, l / m) for k = 0..n, l = 0..m."""

    values: np.ndarray
    T_max: float = 1.0
    centered: bool = False
    meta: Dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise InvalidParams("sheet values must be 2-D")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0] - 1

    @property
    def m(self) -> int:
        return self.values.shape[1] - 1

    def times(self) -> np.ndarray:
        return self.T_max * np.arange(self.n + 1) / self.n

    def space(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    def as_path_of_paths(self) -> PathOfPaths:
        return PathOfPaths(self.values, self.T_max)


def accumulate(points: PointSet, n: int, W: Optional[np.ndarray] = None) -> np.ndarray:
    """Raw sums on the grid t_k = k T_max / n; row 0 is exactly zero."""
    W = points.W if W is None else W
    m1 = W.shape[1]
    # first grid time t_k >= T_i; comparing against the float grid keeps T_i <= t_k exact
    t_grid = points.T_max * np.arange(n + 1) / n
    rows = np.searchsorted(t_grid, points.T, side="left")
    inc = np.zeros((n + 2, m1))
    np.add.at(inc, rows, points.R[:, None] * W)
    out = np.cumsum(inc[: n + 1], axis=0)
    out[0] = 0.0
    return out


def build_sheet_prm(n: int, m: int, eps: float, c: float, alpha: float,
                    spectral: SpectralSampler, T_max: float, seed,
                    center: Optional[bool] = None, points: Optional[PointSet] = None) -> SheetGrid:
    """Sheet of Z^(eps) on the grid, centred by its mean when alpha > 1."""
    if n < 1 or m < 1:
        raise InvalidParams("grid resolutions must be >= 1")
    if spectral.m != m:
        raise InvalidParams("spectral sampler resolution must equal m")
    if points is None:
        points = sample_ladder(T_max, eps, c, alpha, spectral, seed)
    vals = accumulate(points, n)
    center = (alpha > 1) if center is None else center
    meta = {"eps": eps, "c": c, "alpha": alpha, "T_max": T_max, "spectral": spectral.to_config()}
    if center:
        phi, phi_se = phi_for(spectral, seed)
        t = T_max * np.arange(n + 1) / n
        vals = vals - c * (alpha / (alpha - 1)) * eps ** (1 - alpha) * np.outer(t, phi)
        meta["phi_se"] = phi_se
    return SheetGrid(vals, T_max, bool(center), meta)


def sup_norm_exact(points: PointSet, T: float, drift: Optional[np.ndarray] = None) -> float:
    """sup over t in [0, T] and grid s of |Z(t, s) - t drift(s)|, from the atoms."""
    _check_t(points, T)
    sel = points.T <= T
    order = np.argsort(points.T[sel], kind="stable")
    Ts = points.T[sel][order]
    incr = points.R[sel][order, None] * points.W[sel][order]
    S = np.cumsum(incr, axis=0)
    m1 = points.W.shape[1]
    if drift is None:
        return float(np.max(np.abs(S))) if S.size else 0.0
    drift = np.asarray(drift, dtype=float)
    # value at each jump time and just before the next one (or at T)
    S0 = np.vstack([np.zeros((1, m1)), S])
    starts = np.concatenate([[0.0], Ts])
    ends = np.concatenate([Ts, [T]])
    a = np.abs(S0 - starts[:, None] * drift[None, :])
    b = np.abs(S0 - ends[:, None] * drift[None, :])
    return float(max(a.max(), b.max()))


# ---------------------------------------------------------------------------
# marginal laws

@dataclass(frozen=True)
class MarginalLaw:
    """Stable law of Z(t, s) under both scale readings.

    ``power``: sigma^alpha = C_alpha^{-1} (c+ + c-), the reading implied by the
    Levy-Khintchine calculus; ``linear``: sigma = C_alpha^{-1} (c+ + c-).
    """

    beta: float
    power: StableParams
    linear: StableParams

    def reading(self, name: str) -> StableParams:
        if name not in ("power", "linear"):
            raise InvalidParams("reading must be 'power' or 'linear'")
        return getattr(self, name)


def marginal_params(t: float, c: float, alpha: float, c_plus: float, c_minus: float) -> MarginalLaw:
    """Marginal of Z(t, s) given the tail constants c_s^+ and c_s^- (both already scaled by c)."""
    check_construction_alpha(alpha)
    if not t > 0:
        raise InvalidParams("t must be positive for a non-degenerate marginal")
    tot = c_plus + c_minus
    if not tot > 0 or c_plus < 0 or c_minus < 0:
        raise DegenerateTails("c_s^+ + c_s^- must be positive")
    beta = (c_plus - c_minus) / tot
    k = c_alpha_inv(alpha) * tot
    ts = t ** (1 / alpha)
    return MarginalLaw(beta, StableParams(alpha, ts * k ** (1 / alpha), beta, 0.0),
                       StableParams(alpha, ts * k, beta, 0.0))


def marginal_samples(t: float, s: float, eps: float, c: float, alpha: float,
                     spectral: SpectralSampler, seed, reps: int,
                     center: Optional[bool] = None) -> np.ndarray:
    """Independent draws of Z^(eps)(t, s), one replicate per stream."""
    _validate_window(max(t, 1e-300), eps, c, alpha)
    seed = as_seed(seed)
    l = spectral.m if s >= 1 else int(math.floor(s * spectral.m))
    center = (alpha > 1) if center is None else center
    shift = 0.0
    if center:
        phi, _ = phi_for(spectral, seed)
        shift = mean_z_eps(t, float(phi[l]), eps, c, alpha)
    out = np.empty(reps)
    J = annuli_for(eps)
    for r in range(reps):
        rs = seed.replicate(r)
        acc = 0.0
        if t > 0:
            for j in range(J + 1):
                _, R, W = _annulus_points(t, j, c, alpha, spectral, rs, marginal_index=l)
                acc += float(np.sum(R * W, where=R > eps))
        out[r] = acc - shift
    return out


def self_similarity_pair(c_factor: float, t: float, s: float, eps: float, c: float, alpha: float,
                         spectral: SpectralSampler, reps: int, seed) -> Tuple[np.ndarray, np.ndarray]:
    """Draws of Z(c_factor t, s) and of c_factor^{1/alpha} Z(t, s) from disjoint streams."""
    seed = as_seed(seed)
    a = marginal_samples(c_factor * t, s, eps, c, alpha, spectral, seed.child(2 * seed.stream + 1), reps)
    b = marginal_samples(t, s, eps, c, alpha, spectral, seed.child(2 * seed.stream + 2), reps)
    return a, c_factor ** (1 / alpha) * b
