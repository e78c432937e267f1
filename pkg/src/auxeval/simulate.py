"""Gaussian simulation datasets and the closed-form oracle quantities.

Data-generating process, per instance i of model l:

    x ~ N(0, 1),   g = x,   y = x + eps,   eps ~ N(0, sigma_l^2)

Each of the M+1 auxiliary rounds j carries a latent reasoning state
eps_j; round 1 (the correction sample) reuses the instance's own eps,
rounds 2..M+1 draw a fresh latent so they are genuine Monte Carlo draws
from the auxiliary generation law. Within round j:

    w_s = x + rho_s * eps_j + eta_{s,j},   eta ~ N(0, sigma_eta^2),  s in {1, 2}
    v_j = 1{|w1 - (x + eps_j)| <= |w2 - (x + eps_j)|}

so all M+1 triples are identically distributed and round 1 is the one
correlated with the observed output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AuxTriple, SimRecord
from .errors import DegenerateSignalError, InvalidInputError


@dataclass(frozen=True)
class SimConfig:
    n: int = 1000
    m: int = 500
    sigma_sq_per_model: tuple[float, ...] = (1.0, 1.05, 1.1)
    rho1: float = 0.8
    rho2: float = 0.6
    sigma_eta: float = 0.6
    seed: int = 3
    trials: int = 100

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError(f"n must be >= 2, got {self.n}")
        if self.m < 1:
            raise InvalidInputError(f"m must be >= 1, got {self.m}")
        if self.trials < 1:
            raise InvalidInputError(f"trials must be >= 1, got {self.trials}")
        if not self.sigma_sq_per_model or any(s <= 0 for s in self.sigma_sq_per_model):
            raise InvalidInputError("every sigma_sq_per_model entry must be > 0")
        if self.sigma_eta < 0:
            raise InvalidInputError("sigma_eta must be >= 0")

    def replace(self, **kw) -> "SimConfig":
        from dataclasses import replace
        return replace(self, **kw)


@dataclass(frozen=True)
class OracleParams:
    sigma_sq: float
    rho: float
    sigma_eta: float

    def __post_init__(self):
        if self.sigma_sq <= 0:
            raise InvalidInputError("sigma_sq must be > 0")
        if self.sigma_eta < 0:
            raise InvalidInputError("sigma_eta must be >= 0")


def oracle_params_for(config: SimConfig, model_index: int) -> OracleParams:
    """Oracle parameters for one model; the oracle conditions on w1 with rho1."""
    return OracleParams(config.sigma_sq_per_model[model_index], config.rho1, config.sigma_eta)


def child_stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based stream for one unit of work, keyed so that distinct
    (trial, model, purpose) units can be generated concurrently in any order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=key)))


def preference_label(w1: float, w2: float, y: float) -> int:
    """1 iff the first response is at least as close to y (ties prefer w1)."""
    return 1 if abs(w1 - y) <= abs(w2 - y) else 0


class SimDataset:
    """Array-backed sequence of SimRecord.

    Behaves like a list of records (len / indexing) while exposing the
    underlying arrays for vectorized estimation: x, y, g of shape (n,),
    w1, w2, v of shape (n, m+1) with column 0 the correction sample.
    """

    def __init__(self, x, y, g, w1, w2, v):
        self.x = x
        self.y = y
        self.g = g
        self.w1 = w1
        self.w2 = w2
        self.v = v

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def m(self) -> int:
        return self.w1.shape[1] - 1

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        aux = tuple(
            AuxTriple(float(self.w1[i, j]), float(self.w2[i, j]), int(self.v[i, j]))
            for j in range(self.w1.shape[1])
        )
        return SimRecord(float(self.x[i]), float(self.y[i]), float(self.g[i]), aux)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def phi(self, metric) -> np.ndarray:
        from .core import MetricKind
        if metric is not MetricKind.SQUARED_ERROR:
            raise InvalidInputError("simulated records are scalar-kind; only the "
                                    "squared-error metric applies")
        return (self.y - self.g) ** 2


def as_sim_dataset(dataset) -> SimDataset:
    """Accept a SimDataset or any sequence of SimRecord and return arrays."""
    if isinstance(dataset, SimDataset):
        return dataset
    records = list(dataset)
    if not records:
        raise InvalidInputError("empty dataset")
    m1 = len(records[0].aux)
    if any(len(r.aux) != m1 for r in records):
        raise InvalidInputError("all records must carry the same number of aux triples")
    x = np.array([r.x for r in records], dtype=float)
    y = np.array([r.y for r in records], dtype=float)
    g = np.array([r.g for r in records], dtype=float)
    w1 = np.array([[t.w1 for t in r.aux] for r in records], dtype=float)
    w2 = np.array([[t.w2 for t in r.aux] for r in records], dtype=float)
    v = np.array([[t.v for t in r.aux] for r in records], dtype=np.int8)
    return SimDataset(x=x, y=y, g=g, w1=w1, w2=w2, v=v)


def gen_sim_dataset(config: SimConfig, model_index: int,
                    stream: np.random.Generator) -> SimDataset:
    """Draw one dataset for the given model from the supplied stream.

    The draw layout is fixed (x, eps, fresh latents, eta) so identical
    (config, model_index, stream key) yield bitwise-identical datasets.
    """
    if not 0 <= model_index < len(config.sigma_sq_per_model):
        raise InvalidInputError(f"model_index {model_index} out of range")
    n, m = config.n, config.m
    sigma = math.sqrt(config.sigma_sq_per_model[model_index])

    x = stream.standard_normal(n)
    eps = stream.standard_normal(n) * sigma
    latents = np.empty((n, m + 1))
    latents[:, 0] = eps
    latents[:, 1:] = stream.standard_normal((n, m)) * sigma
    eta = stream.standard_normal((n, m + 1, 2)) * config.sigma_eta

    w1 = x[:, None] + config.rho1 * latents + eta[:, :, 0]
    w2 = x[:, None] + config.rho2 * latents + eta[:, :, 1]
    y_round = x[:, None] + latents
    v = (np.abs(w1 - y_round) <= np.abs(w2 - y_round)).astype(np.int8)

    return SimDataset(x=x, y=x + eps, g=x.copy(), w1=w1, w2=w2, v=v)


def _signal_variance(p: OracleParams) -> float:
    denom = p.rho**2 * p.sigma_sq + p.sigma_eta**2
    if denom == 0:
        raise DegenerateSignalError(
            "rho = 0 with sigma_eta = 0 leaves no auxiliary signal to regress on")
    return denom


def kappa(p: OracleParams) -> float:
    """Linear-regression coefficient of the latent on the centered signal w1 - x."""
    return p.rho * p.sigma_sq / _signal_variance(p)


def oracle_tau(x, w1, p: OracleParams):
    """Closed-form outcome regression: intercept plus quadratic in (w1 - x)."""
    k = kappa(p)
    return (1.0 - k * p.rho) * p.sigma_sq + k**2 * (w1 - x) ** 2


def oracle_m(p: OracleParams) -> float:
    """Integrated regression; constant and equal to the target parameter here."""
    return p.sigma_sq


def oracle_influence(x, y, g, w1, p: OracleParams):
    """Mean-zero influence value phi - oracle_tau (the m - theta term vanishes)."""
    return (y - g) ** 2 - oracle_tau(x, w1, p)


def r_squared(p: OracleParams) -> float:
    """Coefficient of determination of the latent on the auxiliary signal."""
    return p.rho**2 * p.sigma_sq / _signal_variance(p)


def theoretical_variances(p: OracleParams) -> tuple[float, float, float]:
    """(var_naive, var_onestep, vr): 2*sigma^4, 2*sigma^4*(1-(R^2)^2), (R^2)^2."""
    var_naive = 2.0 * p.sigma_sq**2
    if p.rho == 0.0 and p.sigma_eta == 0.0:
        raise DegenerateSignalError(
            "rho = 0 with sigma_eta = 0 leaves no auxiliary signal to regress on")
    vr = r_squared(p) ** 2
    return var_naive, var_naive * (1.0 - vr), vr
