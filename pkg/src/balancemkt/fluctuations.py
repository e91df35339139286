"""Forecast-error sampling for load, PV and wind.

Each fluctuating element draws from its own labelled :class:`RngStream`.
By default the stream label does not contain the time instant, so member
``j`` of an ensemble sees the same underlying random numbers at every
instant of the day (a day-long forecast error).  Set
``independent_instants=True`` to resample every instant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .grid_model import GridScenario
from .rng import RngStream

_MIN_WINDOW = 0.01  # below this acceptance probability use the inverse CDF


@dataclass(frozen=True)
class FluctuationSpec:
    sigma_l: float = 0.1
    sigma_pv: float = 0.08
    sigma_w: float = 0.1
    wind_model: str = "gaussian"
    weibull_shape: float = 2.0
    independent_instants: bool = False

    def __post_init__(self):
        if min(self.sigma_l, self.sigma_pv, self.sigma_w) < 0:
            raise ValueError("fluctuation sigmas must be >= 0")
        if not self.weibull_shape > 0:
            raise ValueError("weibull_shape must be > 0")
        if self.wind_model not in ("gaussian", "weibull"):
            raise ValueError(f"unknown wind_model {self.wind_model!r}")


def _generator(rng) -> np.random.Generator:
    return rng.gen if isinstance(rng, RngStream) else rng


def truncated_normal(mean: float, sd: float, lo: float, hi: float, rng, size: int) -> np.ndarray:
    """``size`` draws of Normal(mean, sd**2) conditioned on [lo, hi].

    Rejection from the untruncated normal, in rounds of ``size`` candidates
    so that element ``j`` of the result only depends on the ``j``-th
    candidate of each round.  If the window holds less than 1% of the mass
    the inverse CDF is used instead.
    """
    if lo > hi:
        raise ValueError(f"empty truncation window [{lo}, {hi}]")
    if sd < 0:
        raise ValueError("sd must be >= 0")
    if sd == 0 or lo == hi:
        return np.full(size, min(max(mean, lo), hi), dtype=float)
    gen = _generator(rng)
    a = (lo - mean) / sd
    b = (hi - mean) / sd
    window = special.ndtr(b) - special.ndtr(a)
    if window < _MIN_WINDOW:
        u = gen.random(size)
        return np.clip(mean + sd * stats.truncnorm.ppf(u, a, b), lo, hi)
    out = np.empty(size)
    todo = np.ones(size, dtype=bool)
    while todo.any():
        x = mean + sd * gen.standard_normal(size)
        ok = todo & (x >= lo) & (x <= hi)
        out[ok] = x[ok]
        todo &= ~ok
    return out


def weibull(p_w: float, a: float, rng, size: int) -> np.ndarray:
    """Weibull draws with shape ``a`` and scale chosen so the mean equals
    ``p_w`` (scale = p_w / Gamma(1 + 1/a)).  Inverse-CDF sampling, one
    uniform per draw."""
    if p_w < 0 or not a > 0:
        raise ValueError("need p_w >= 0 and a > 0")
    if p_w == 0:
        return np.zeros(size)
    lam = p_w / math.gamma(1.0 + 1.0 / a)
    u = _generator(rng).random(size)
    return lam * (-np.log1p(-u)) ** (1.0 / a)


def sample_truncated_normal(mean: float, sigma_rel: float, lo: float, hi: float, rng) -> float:
    """One forecast-error draw around ``mean`` with relative spread
    ``sigma_rel``, kept inside [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty truncation window [{lo}, {hi}]")
    if sigma_rel < 0:
        raise ValueError("sigma_rel must be >= 0")
    return float(truncated_normal(mean, sigma_rel * abs(mean), lo, hi, rng, 1)[0])


def sample_weibull(p_w: float, a: float, rng) -> float:
    return float(weibull(p_w, a, rng, 1)[0])


def load_bounds(scenario: GridScenario, t: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-load truncation bounds at ``t``; missing bounds default to
    0.5x and 1.5x of the expected demand."""
    expected = scenario.load_matrix[:, t]
    lo = np.array([0.5 * e if ld.d_min is None else ld.d_min for ld, e in zip(scenario.loads, expected)])
    hi = np.array([1.5 * e if ld.d_max is None else ld.d_max for ld, e in zip(scenario.loads, expected)])
    return lo, hi


@dataclass(frozen=True)
class EnsembleState:
    """Realised values of ``n`` ensemble members at instant ``t``.

    ``loads`` has shape (n, n_loads), ``res`` has shape (n, n_res), columns in
    scenario order.
    """

    t: int
    loads: np.ndarray
    res: np.ndarray

    @property
    def n_members(self) -> int:
        return self.loads.shape[0]


@dataclass(frozen=True)
class PerturbedState:
    t: int
    loads: dict
    res: dict
    config_index: int = 0


def perturb_ensemble(scenario: GridScenario, t: int, spec: FluctuationSpec, rng: RngStream,
                     n: int) -> EnsembleState:
    """Draw ``n`` perturbed configurations of the whole grid at instant ``t``.

    Each element uses the sub-stream ``rng.child(kind, element_id)`` (plus
    the instant when ``spec.independent_instants``), so load and PV draws do
    not depend on the wind model in use.
    """
    if not 0 <= t < scenario.n_instants:
        raise ValueError(f"instant {t} outside 0..{scenario.n_instants - 1}")

    def stream(kind, ident):
        labels = (kind, ident, "t", t) if spec.independent_instants else (kind, ident)
        return rng.child(*labels)

    lo, hi = load_bounds(scenario, t)
    loads = np.empty((n, len(scenario.loads)))
    for c, (ld, mean) in enumerate(zip(scenario.loads, scenario.load_matrix[:, t])):
        loads[:, c] = truncated_normal(mean, spec.sigma_l * mean, lo[c], hi[c], stream("load", ld.id), n)

    res = np.empty((n, len(scenario.res_generators)))
    for c, g in enumerate(scenario.res_generators):
        mean = float(scenario.res_matrix[c, t])
        if g.kind == "pv":
            res[:, c] = truncated_normal(mean, spec.sigma_pv * mean, g.floor, g.capacity, stream("pv", g.id), n)
        elif spec.wind_model == "weibull":
            draws = weibull(mean, spec.weibull_shape, stream("wind-weibull", g.id), n)
            res[:, c] = np.clip(draws, g.floor, g.capacity)
        else:
            res[:, c] = truncated_normal(mean, spec.sigma_w * mean, g.floor, g.capacity, stream("wind", g.id), n)
    return EnsembleState(t, loads, res)


def perturb(scenario: GridScenario, t: int, spec: FluctuationSpec, rng: RngStream,
            config_index: int = 0) -> PerturbedState:
    """One perturbed configuration at instant ``t`` (member 0 of the
    ensemble drawn from ``rng``)."""
    ens = perturb_ensemble(scenario, t, spec, rng, 1)
    return PerturbedState(
        t,
        {ld.id: float(v) for ld, v in zip(scenario.loads, ens.loads[0])},
        {g.id: float(v) for g, v in zip(scenario.res_generators, ens.res[0])},
        config_index,
    )
