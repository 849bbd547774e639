"""Regularly varying scalar laws and the stable oracle sampler.

Stable laws use the (alpha, sigma, beta, mu) parameterization of
Samorodnitsky and Taqqu (their "S1" form): for alpha != 1 the characteristic
function is exp{-sigma^a |u|^a (1 - i beta sign(u) tan(pi a / 2)) + i mu u}.
This matches ``scipy.stats.levy_stable`` with ``parameterization='S1'``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, special

from .errors import AlphaOne, InsufficientData, InvalidParams
from .seeds import LAW, SeedSpec, as_seed

ALPHA_EDGE = 1e-9


def c_alpha_inv(alpha: float) -> float:
    """Gamma(2 - a) / (1 - a) * cos(pi a / 2); positive on (0, 1) and (1, 2)."""
    if not 0 < alpha < 2:
        raise InvalidParams(f"alpha must lie in (0, 2), got {alpha}")
    if abs(alpha - 1.0) < ALPHA_EDGE:
        raise AlphaOne("C_alpha")
    return math.gamma(2.0 - alpha) / (1.0 - alpha) * math.cos(math.pi * alpha / 2.0)


def check_construction_alpha(alpha: float, what: str = "this construction"):
    """Open interval (0, 2) minus 1, with a 1e-9 guard at each edge."""
    if not (ALPHA_EDGE < alpha < 2.0 - ALPHA_EDGE):
        raise InvalidParams(f"alpha must lie strictly inside (0, 2), got {alpha}")
    if abs(alpha - 1.0) < ALPHA_EDGE:
        raise AlphaOne(what)


@dataclass(frozen=True)
class StableParams:
    alpha: float
    sigma: float = 1.0
    beta: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise InvalidParams("stable index must lie in (0, 2]")
        if not self.sigma > 0:
            raise InvalidParams("stable scale must be positive")
        if not -1 <= self.beta <= 1:
            raise InvalidParams("skewness must lie in [-1, 1]")
        if not math.isfinite(self.mu):
            raise InvalidParams("location must be finite")

    def scipy_dist(self):
        from scipy.stats import levy_stable
        d = levy_stable(self.alpha, self.beta, loc=self.mu, scale=self.sigma)
        d.dist.parameterization = "S1"
        return d


def cms_transform(p: StableParams, V: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Chambers-Mallows-Stuck map of V ~ U(-pi/2, pi/2), W ~ Exp(1) to S_a(sigma, beta, mu)."""
    a, b = p.alpha, p.beta
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    if a == 1.0:
        h = math.pi / 2 + b * V
        X = (2 / math.pi) * (h * np.tan(V) - b * np.log((math.pi / 2) * W * np.cos(V) / h))
        return p.sigma * X + (2 / math.pi) * b * p.sigma * math.log(p.sigma) + p.mu
    if a == 2.0:
        # beta plays no role; the general formula reduces to this
        return p.sigma * 2.0 * np.sin(V) * np.sqrt(W) + p.mu
    t = b * math.tan(math.pi * a / 2)
    B = math.atan(t) / a
    S = (1 + t * t) ** (1 / (2 * a))
    X = (S * np.sin(a * (V + B)) / np.cos(V) ** (1 / a)
         * (np.cos(V - a * (V + B)) / W) ** ((1 - a) / a))
    return p.sigma * X + p.mu


def stable_from_uniforms(p: StableParams, U: np.ndarray) -> np.ndarray:
    """CMS applied to uniforms U[..., 0], U[..., 1] in [0, 1)."""
    V = math.pi * (U[..., 0] - 0.5)
    W = -np.log1p(-U[..., 1])
    return cms_transform(p, V, W)


def sample_stable_cms(p: StableParams, seed, count) -> np.ndarray:
    """i.i.d. S_a(sigma, beta, mu) draws; ``count`` may be a shape tuple."""
    gen = seed if isinstance(seed, np.random.Generator) else as_seed(seed).generator(LAW)
    shape = (count,) if np.isscalar(count) else tuple(count)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return stable_from_uniforms(p, gen.random(shape + (2,)))


_KINDS = ("pareto", "two_sided_pareto", "frechet", "burr", "stable")


@dataclass(frozen=True)
class RVLaw:
    """Regularly varying law: P(|xi| > x) ~ C x^{-alpha}, positive-tail share p."""

    kind: str
    alpha: float = 1.5
    p_tail: float = 1.0
    a: float = 1.0
    b: float = 1.0
    stable: Optional[StableParams] = field(default=None)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidParams(f"unknown law kind {self.kind!r}; choose from {', '.join(_KINDS)}")
        if self.kind == "burr":
            if not (self.a > 0 and self.b > 0):
                raise InvalidParams("Burr parameters a, b must be positive")
            object.__setattr__(self, "alpha", self.a * self.b)
        elif self.kind == "stable":
            if self.stable is None:
                raise InvalidParams("stable law needs StableParams")
            if self.stable.alpha >= 2:
                raise InvalidParams("a Gaussian law is not regularly varying")
            object.__setattr__(self, "alpha", self.stable.alpha)
        if not self.alpha > 0:
            raise InvalidParams("tail index must be positive")
        if self.kind == "two_sided_pareto" and not 0 <= self.p_tail <= 1:
            raise InvalidParams("positive-tail fraction p must lie in [0, 1]")

    # constructors keep call sites short
    @classmethod
    def pareto(cls, alpha):
        return cls("pareto", alpha)

    @classmethod
    def two_sided_pareto(cls, alpha, p):
        return cls("two_sided_pareto", alpha, p_tail=p)

    @classmethod
    def frechet(cls, alpha):
        return cls("frechet", alpha)

    @classmethod
    def burr(cls, a, b):
        return cls("burr", a=a, b=b)

    @classmethod
    def stable_law(cls, alpha, sigma=1.0, beta=0.0, mu=0.0):
        return cls("stable", stable=StableParams(alpha, sigma, beta, mu))

    @classmethod
    def from_config(cls, cfg: dict) -> "RVLaw":
        kind = str(cfg.get("kind", "")).lower().replace("-", "_")
        if kind == "stable":
            return cls.stable_law(float(cfg["alpha"]), float(cfg.get("sigma", 1.0)),
                                  float(cfg.get("beta", 0.0)), float(cfg.get("mu", 0.0)))
        if kind == "burr":
            return cls.burr(float(cfg["a"]), float(cfg["b"]))
        if kind == "two_sided_pareto":
            return cls.two_sided_pareto(float(cfg["alpha"]), float(cfg.get("p", 0.5)))
        if kind in ("pareto", "frechet"):
            return cls(kind, float(cfg["alpha"]))
        raise InvalidParams(f"unknown law kind {cfg.get('kind')!r}; choose from {', '.join(_KINDS)}")

    def to_config(self) -> dict:
        d = {"kind": self.kind, "alpha": self.alpha}
        if self.kind == "two_sided_pareto":
            d["p"] = self.p_tail
        if self.kind == "burr":
            d.update(a=self.a, b=self.b)
        if self.kind == "stable":
            d.update(sigma=self.stable.sigma, beta=self.stable.beta, mu=self.stable.mu)
        return d

    @property
    def p(self) -> float:
        if self.kind == "two_sided_pareto":
            return self.p_tail
        if self.kind == "stable":
            return (1 + self.stable.beta) / 2
        return 1.0

    @property
    def C(self) -> float:
        if self.kind == "stable":
            return self.stable.sigma ** self.alpha / c_alpha_inv(self.alpha)
        return 1.0

    @property
    def mu(self) -> float:
        return centering_mu(self)

    # inverse-CDF maps, exposed so that tests can force the uniforms
    def transform(self, U: np.ndarray, U2: Optional[np.ndarray] = None) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        a = self.alpha
        if self.kind == "pareto":
            return U ** (-1 / a)
        if self.kind == "frechet":
            return (-np.log(U)) ** (-1 / a)
        if self.kind == "burr":
            return ((1 - U) ** (-1 / self.a) - 1) ** (1 / self.b)
        if self.kind == "two_sided_pareto":
            sign = np.where(U2 < self.p_tail, 1.0, -1.0)
            return sign * U ** (-1 / a)
        raise InvalidParams("stable draws use the CMS transform")

    def cdf(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        a = self.alpha
        if self.kind == "pareto":
            return np.where(x > 1, 1 - np.maximum(x, 1) ** (-a), 0.0)
        if self.kind == "frechet":
            with np.errstate(divide="ignore"):
                return np.where(x > 0, np.exp(-np.where(x > 0, x, 1.0) ** (-a)), 0.0)
        if self.kind == "burr":
            return np.where(x > 0, 1 - (1 + np.maximum(x, 0) ** self.b) ** (-self.a), 0.0)
        if self.kind == "two_sided_pareto":
            p, q = self.p_tail, 1 - self.p_tail
            ax = np.maximum(np.abs(x), 1.0)
            return np.where(x <= -1, q * ax ** (-a), np.where(x < 1, q, q + p * (1 - ax ** (-a))))
        return self.stable.scipy_dist().cdf(x)

    def tail(self, x: float) -> float:
        """P(xi > x) for the upper tail (x > 0)."""
        return float(1 - self.cdf(np.array([x]))[0])


def uniforms_per_draw(law: RVLaw) -> int:
    return 2 if law.kind in ("two_sided_pareto", "stable") else 1


def from_uniforms(law: RVLaw, U: np.ndarray) -> np.ndarray:
    """Map uniforms in [0, 1) of shape (..., k) to draws of shape (...)."""
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if law.kind == "stable":
            return stable_from_uniforms(law.stable, U)
        if law.kind == "two_sided_pareto":
            return law.transform(1.0 - U[..., 0], U[..., 1])
        if law.kind == "pareto":
            return law.transform(1.0 - U[..., 0])
        # Frechet and Burr accept [0, 1); U = 0 maps to the lower endpoint 0
        return law.transform(U[..., 0])


def sample(law: RVLaw, seed, count) -> np.ndarray:
    """i.i.d. draws by inverse CDF, or CMS for stable laws.

    The uniforms are drawn in one row-major block of shape ``count + (k,)``,
    so the draws for a leading sub-block of rows do not depend on how many
    rows follow.
    """
    gen = seed if isinstance(seed, np.random.Generator) else as_seed(seed).generator(LAW)
    shape = (int(count),) if np.isscalar(count) else tuple(int(c) for c in count)
    if any(c < 0 for c in shape):
        raise InvalidParams("count must be non-negative")
    return from_uniforms(law, gen.random(shape + (uniforms_per_draw(law),)))


def normalizing_a_n(law: RVLaw, n: int) -> float:
    if n < 1:
        raise InvalidParams("n must be a positive integer")
    return (law.C * n) ** (1 / law.alpha)


def burr_mean(a: float, b: float) -> float:
    if not a * b > 1:
        raise InvalidParams("Burr mean is finite only for a b > 1")
    val, _ = integrate.quad(lambda x: (1 + x ** b) ** (-a), 0, np.inf, epsrel=1e-8, limit=200)
    return float(val)


def centering_mu(law: RVLaw) -> float:
    """0 below alpha = 1, the mean E(xi) above it."""
    a = law.alpha
    if abs(a - 1.0) < ALPHA_EDGE:
        raise AlphaOne("centering")
    if a < 1:
        return 0.0
    if law.kind == "pareto":
        return a / (a - 1)
    if law.kind == "two_sided_pareto":
        return (2 * law.p_tail - 1) * a / (a - 1)
    if law.kind == "frechet":
        return math.gamma(1 - 1 / a)
    if law.kind == "burr":
        return burr_mean(law.a, law.b)
    return law.stable.mu


def burr_mean_closed(a: float, b: float) -> float:
    return float(np.exp(special.gammaln(a - 1 / b) + special.gammaln(1 + 1 / b) - special.gammaln(a)))


def hill_estimator(samples, k: int) -> float:
    """1 / mean(log X_(n-i+1) - log X_(n-k)), i = 1..k."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if not 1 <= k < n:
        raise InsufficientData(f"need 1 <= k < sample size, got k={k}, n={n}")
    top = np.sort(x)[n - k - 1:]
    if top[0] <= 0:
        raise InsufficientData("the (k+1)-th largest value must be positive")
    logs = np.log(top)
    h = float(np.mean(logs[1:] - logs[0]))
    if h <= 0:
        raise InsufficientData("upper order statistics are tied; tail index undefined")
    return 1.0 / h
