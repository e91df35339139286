"""Experiment orchestration.

For every renewable share P%: rescale the scenario, solve the reference
dispatch at each simulated instant, draw the learning and evaluation
ensembles, and run one independent market (fresh agents, own random
streams) per (zone, instant) cell.  Cells are independent work units; the
reduction over cells is ordered by cell label, so the number of worker
processes never changes the results.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .dispatch import (DispatchResult, build_susceptance, ptdf, solve_reference_dispatch, zone_imbalance,
                       zone_membership)
from .fluctuations import FluctuationSpec, perturb_ensemble
from .grid_model import TECHNOLOGIES, GridScenario, read_scenario, scale_res_share
from .market import UP, AgentState, LearningParams, MarketSessionResult, run_evaluation, run_learning
from .rng import RngStream

log = logging.getLogger(__name__)

DEFAULT_SHARES = (0.24, 0.30, 0.40, 0.50, 0.60)
THREADS_ENV = "BALANCEMKT_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    p_percent: tuple = DEFAULT_SHARES
    fluctuations: FluctuationSpec = field(default_factory=FluctuationSpec)
    learning: LearningParams = field(default_factory=LearningParams)
    scenario: str | None = None
    time_stride: int = 4
    network_check: bool = False
    run_market: bool = True
    threads: int | None = None

    def __post_init__(self):
        if self.seed is None:
            raise ValueError("a master seed is required")
        object.__setattr__(self, "p_percent", tuple(float(p) for p in self.p_percent))
        for p in self.p_percent:
            if not 0 < p <= 1:
                raise ValueError(f"p_percent values must be in (0, 1], got {p}")
        if self.time_stride < 1:
            raise ValueError("time_stride must be >= 1")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        fl = FluctuationSpec(**doc.pop("fluctuations", {}))
        lp = dict(doc.pop("learning", {}))
        for flag in ("settlement", "legacy_update"):
            if flag in doc:
                lp[flag] = doc.pop(flag)
        known = {"seed", "p_percent", "scenario", "time_stride", "network_check", "run_market", "threads"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown experiment config keys: {sorted(unknown)}")
        if "seed" not in doc:
            raise ValueError("experiment config needs a 'seed'")
        return cls(fluctuations=fl, learning=LearningParams(**lp), **doc)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p_percent"] = list(self.p_percent)
        return d

    def digest(self) -> str:
        """Hash of everything that influences the results."""
        d = self.to_dict()
        d.pop("threads")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]


def read_config(path) -> ExperimentConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return ExperimentConfig.from_dict(doc)


@dataclass
class ShareResults:
    """Observables for one renewable share.  Daily arrays are indexed by
    evaluation member ``j``."""

    p_percent: float
    up_volume_gwh: np.ndarray
    down_volume_gwh: np.ndarray
    up_cost_eur: np.ndarray
    down_cost_eur: np.ndarray
    price_hour: np.ndarray  # hour of day of each cleared up-market session
    price_eur_mwh: np.ndarray  # its volume-weighted average price
    tech_profit_mean: dict  # technology -> mean profit per session, EUR
    tech_daily_profit: dict  # technology -> daily profit per member, EUR
    n_sessions: int = 0


@dataclass
class ExperimentResults:
    shares: dict  # p_percent -> ShareResults
    metadata: dict = field(default_factory=dict)

    @property
    def p_percent(self) -> list:
        return list(self.shares)

    def __getitem__(self, p) -> ShareResults:
        return self.shares[float(p)]


# ---------------------------------------------------------------------------
# profit bookkeeping

def aggregate_profit_by_technology(sessions, technology_of: dict) -> dict:
    """Mean over sessions of the profit earned by each technology class
    (sum over that class's agents within a session)."""
    totals = {tech: 0.0 for tech in TECHNOLOGIES}
    n = 0
    for sess in sessions:
        n += 1
        for agent, profit in sess.profits.items():
            try:
                tech = technology_of[agent]
            except KeyError:
                raise KeyError(f"no technology label for agent {agent!r}") from None
            if tech not in totals:
                raise ValueError(f"unknown technology {tech!r}")
            totals[tech] += profit
    return {tech: (v / n if n else 0.0) for tech, v in totals.items()}


# ---------------------------------------------------------------------------
# cell work unit

@dataclass
class _Cell:
    zone: str
    t: int
    gens: list
    g_given: np.ndarray
    learn_mwh: np.ndarray  # signed zonal imbalance per learning member, MWh
    eval_mwh: np.ndarray
    params: LearningParams
    seed: int
    labels: tuple
    hours: float
    guard: dict | None = None  # network check data, see _FlowGuard


class _FlowGuard:
    """Rejects balancing offers that would push a limited branch beyond its
    limit (or further beyond, if already overloaded)."""

    def __init__(self, ptdf_cols, limits, base_flows, hours):
        self.ptdf_cols = ptdf_cols  # (n_branch, n_agents)
        self.limits = limits
        self.base = base_flows  # (n_members, n_branch)
        self.hours = hours
        self.limited = limits > 0

    def for_session(self, member: int, direction: str):
        flows = self.base[member].copy()
        sign = 1.0 if direction == UP else -1.0

        def admit(i, q):
            new = flows + self.ptdf_cols[:, i] * sign * q / self.hours
            cap = np.maximum(self.limits, np.abs(flows))
            if np.any(self.limited & (np.abs(new) > cap + 1e-9)):
                return False
            flows[:] = new
            return True

        return admit


def _run_cell(cell: _Cell) -> tuple[list[AgentState], list[MarketSessionResult]]:
    agents = [AgentState.initial(g.id, cell.params.n_strategies) for g in cell.gens]
    learn_guard = eval_guard = None
    if cell.guard is not None:
        gd = cell.guard
        learn_guard = _FlowGuard(gd["ptdf"], gd["limits"], gd["learn_flows"], cell.hours)
        eval_guard = _FlowGuard(gd["ptdf"], gd["limits"], gd["eval_flows"], cell.hours)
    root = RngStream(cell.seed, cell.labels)
    trained = run_learning(((s, cell.g_given) for s in cell.learn_mwh), agents, cell.gens, cell.params,
                           root.child("learn"), cell.hours,
                           admit_for=learn_guard.for_session if learn_guard else None)
    sessions = run_evaluation(((s, cell.g_given) for s in cell.eval_mwh), trained, cell.gens, cell.params,
                              root.child("eval"), cell.hours,
                              admit_for=eval_guard.for_session if eval_guard else None)
    return trained, sessions


def _worker_count(hint: int | None) -> int:
    n = hint if hint else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, cap)
    return max(1, n)


def _map_cells(cells, workers):
    if workers <= 1 or len(cells) <= 1:
        return [_run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))


# ---------------------------------------------------------------------------
# experiment

def reference_dispatches(scenario: GridScenario, instants, p_percent=None) -> dict:
    system = build_susceptance(scenario)
    return {t: solve_reference_dispatch(scenario, t, system, p_percent) for t in instants}


def run_share(scenario: GridScenario, p: float, config: ExperimentConfig, workers: int = 1) -> ShareResults:
    """Full pipeline for one renewable share."""
    cfg = config
    scaled = scale_res_share(scenario, p)
    T = scaled.n_instants
    hours = 24.0 / T
    stride = cfg.time_stride
    instants = list(range(0, T, stride))
    refs: dict[int, DispatchResult] = reference_dispatches(scaled, instants, p)
    lp = cfg.learning
    n_learn, n_eval = lp.learning_iterations, lp.evaluation_iterations
    zones = [z.id for z in scaled.zones]

    # fluctuation streams carry no P% label: every share sees the same
    # underlying random numbers (common random numbers across shares)
    fl_root = RngStream(cfg.seed, ("fluct",))
    learn_s, eval_s, eval_dev, learn_dev = {}, {}, {}, {}
    need_nodes = cfg.network_check and cfg.run_market
    if need_nodes:
        system = build_susceptance(scaled)
        P = ptdf(system)
        idx = scaled.bus_index
        zl, zr = zone_membership(scaled)
    for t in instants:
        ens_l = perturb_ensemble(scaled, t, cfg.fluctuations, fl_root.child("learn"), n_learn) if cfg.run_market \
            else None
        ens_e = perturb_ensemble(scaled, t, cfg.fluctuations, fl_root.child("eval"), n_eval)
        eval_s[t] = zone_imbalance(scaled, ens_e)
        if ens_l is not None:
            learn_s[t] = zone_imbalance(scaled, ens_l)
        if need_nodes:
            for store, ens in ((learn_dev, ens_l), (eval_dev, ens_e)):
                store[t] = _nodal_deviation(scaled, ens, idx, zl, zr)

    cells = []
    if cfg.run_market:
        for zi, zone in enumerate(zones):
            gens = scaled.generators_in_zone(zone)
            if not gens:
                continue
            for t in instants:
                gidx = [refs[t].generator_ids.index(g.id) for g in gens]
                guard = None
                if need_nodes:
                    cols = P[:, [idx[g.bus_id] for g in gens]]
                    guard = {"ptdf": cols, "limits": system.flow_limits,
                             "learn_flows": refs[t].flows + learn_dev[t][zi] @ P.T,
                             "eval_flows": refs[t].flows + eval_dev[t][zi] @ P.T}
                cells.append(_Cell(zone, t, gens, np.asarray(refs[t].setpoints)[gidx],
                                   learn_s[t][:, zi] * hours, eval_s[t][:, zi] * hours, lp, cfg.seed,
                                   ("market", repr(float(p)), zone, t), hours, guard))
    log.info("P%%=%g: %d instants, %d market cells", p, len(instants), len(cells))
    outputs = _map_cells(cells, workers)

    # daily observables, member j paired across all cells
    S = np.stack([eval_s[t] for t in instants])  # (n_instants, n_eval, n_zones)
    up_vol = stride * hours * np.clip(S, 0, None).sum(axis=(0, 2)) / 1000.0
    down_vol = stride * hours * np.clip(-S, 0, None).sum(axis=(0, 2)) / 1000.0
    up_cost = np.zeros(n_eval)
    down_cost = np.zeros(n_eval)
    tech_of = {g.id: g.technology for g in scaled.generators}
    tech_daily = {tech: np.zeros(n_eval) for tech in TECHNOLOGIES}
    hours_l, prices_l = [], []
    all_sessions = []
    for cell, (_, sessions) in zip(cells, outputs):
        hour = int(cell.t * hours)
        for j, sess in enumerate(sessions):
            if sess.direction == UP:
                up_cost[j] += stride * sess.cost
                if sess.cleared > 0:
                    hours_l.append(hour)
                    prices_l.append(sess.average_price)
            else:
                down_cost[j] += stride * sess.cost
            for agent, profit in sess.profits.items():
                tech_daily[tech_of[agent]][j] += stride * profit
        all_sessions.extend(sessions)
    tech_mean = aggregate_profit_by_technology(all_sessions, tech_of)
    return ShareResults(p, up_vol, down_vol, up_cost, down_cost, np.array(hours_l, dtype=int),
                        np.array(prices_l, dtype=float), tech_mean, tech_daily, len(all_sessions))


def _nodal_deviation(scenario, ens, idx, zl, zr):
    """Per zone, nodal injection change caused by that zone's fluctuations:
    array (n_zones, n_members, n_bus)."""
    n_bus = len(scenario.buses)
    out = np.zeros((len(scenario.zones), ens.n_members, n_bus))
    dl = ens.loads - scenario.load_matrix[:, ens.t]
    for k, ld in enumerate(scenario.loads):
        z = int(np.argmax(zl[k]))
        out[z, :, idx[ld.bus_id]] -= dl[:, k]
    if scenario.res_generators:
        dr = ens.res - scenario.res_matrix[:, ens.t]
        for k, g in enumerate(scenario.res_generators):
            z = int(np.argmax(zr[k]))
            out[z, :, idx[g.bus_id]] += dr[:, k]
    return out


def run_experiment(config: ExperimentConfig, scenario: GridScenario | None = None) -> ExperimentResults:
    """Run every configured renewable share; a pure function of ``config``
    (and the scenario it names)."""
    if scenario is None:
        if not config.scenario:
            raise ValueError("no scenario given")
        scenario = read_scenario(config.scenario)
    if not config.p_percent:
        raise ValueError("p_percent list is empty")
    workers = _worker_count(config.threads)
    shares = {p: run_share(scenario, p, config, workers) for p in config.p_percent}
    meta = {
        "seed": config.seed,
        "config_digest": config.digest(),
        "scenario": scenario.name,
        "n_instants": scenario.n_instants,
        "time_stride": config.time_stride,
        "wind_model": config.fluctuations.wind_model,
        "learning_iterations": config.learning.learning_iterations,
        "evaluation_iterations": config.learning.evaluation_iterations,
        "p_percent": list(config.p_percent),
    }
    return ExperimentResults(shares, meta)


@dataclass
class WindComparison:
    gaussian: ExperimentResults
    weibull: ExperimentResults
    summary: dict  # p -> {"gaussian": {"mode": .., "mean": ..}, "weibull": {...}}


def compare_wind_models(config: ExperimentConfig, scenario: GridScenario | None = None) -> WindComparison:
    """Run the experiment twice, Gaussian and Weibull wind errors, with all
    other settings and random streams shared."""
    from .stats import histogram_mode

    gauss_cfg = replace(config, fluctuations=replace(config.fluctuations, wind_model="gaussian"))
    weib_cfg = replace(config, fluctuations=replace(config.fluctuations, wind_model="weibull"))
    g = run_experiment(gauss_cfg, scenario)
    w = run_experiment(weib_cfg, scenario)
    summary = {}
    for p in config.p_percent:
        summary[p] = {
            name: {"mode": histogram_mode(res[p].up_volume_gwh), "mean": float(np.mean(res[p].up_volume_gwh))}
            for name, res in (("gaussian", g), ("weibull", w))
        }
    return WindComparison(g, w, summary)
