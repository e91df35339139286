"""DC power flow, DC optimal power flow and zonal imbalance.

The OPF uses the B-theta formulation: generator outputs and bus angles are
the variables, every bus carries a power-balance equality, branch flows
``b_ij * (theta_i - theta_j) * base_mva`` are box-limited and the objective
is the linear production cost.  The LP is handed to HiGHS through
``scipy.optimize.linprog``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .fluctuations import EnsembleState, PerturbedState
from .grid_model import GridScenario


class DispatchError(RuntimeError):
    pass


class DisconnectedGridError(DispatchError):
    pass


class InfeasibleDispatchError(DispatchError):
    def __init__(self, message, t=None, p_percent=None, binding=()):
        where = []
        if p_percent is not None:
            where.append(f"P%={p_percent:g}")
        if t is not None:
            where.append(f"t={t}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
        self.t = t
        self.p_percent = p_percent
        self.binding = tuple(binding)


@dataclass(frozen=True, eq=False)
class SusceptanceSystem:
    bus_ids: tuple
    B: np.ndarray  # nodal susceptance matrix, per unit
    incidence: np.ndarray  # (n_branch, n_bus), +1 at from-bus, -1 at to-bus
    b: np.ndarray  # branch susceptances, per unit
    flow_limits: np.ndarray  # MW, 0 = unlimited
    slack: int
    base_mva: float

    @property
    def n_bus(self) -> int:
        return len(self.bus_ids)


def build_susceptance(scenario: GridScenario) -> SusceptanceSystem:
    n = len(scenario.buses)
    idx = scenario.bus_index
    A = np.zeros((len(scenario.branches), n))
    b = np.array([br.susceptance for br in scenario.branches], dtype=float)
    for k, br in enumerate(scenario.branches):
        A[k, idx[br.from_bus]] = 1.0
        A[k, idx[br.to_bus]] = -1.0
    B = A.T @ (b[:, None] * A)
    slack = scenario.slack_index
    keep = np.arange(n) != slack
    if n > 1 and np.linalg.matrix_rank(B[np.ix_(keep, keep)]) < n - 1:
        raise DisconnectedGridError("nodal susceptance matrix is singular: grid is disconnected")
    limits = np.array([br.flow_limit for br in scenario.branches], dtype=float)
    for arr in (A, b, B, limits):
        arr.setflags(write=False)
    return SusceptanceSystem(tuple(bu.id for bu in scenario.buses), B, A, b, limits, slack, scenario.base_mva)


def solve_dc_power_flow(system: SusceptanceSystem, injections) -> tuple[np.ndarray, np.ndarray]:
    """Angles (rad, slack = 0) and branch flows (MW) for nodal injections in
    MW.  Whatever the injections do not balance is taken by the slack bus."""
    P = np.asarray(injections, dtype=float).copy()
    n = system.n_bus
    keep = np.arange(n) != system.slack
    P[system.slack] -= P.sum()
    theta = np.zeros(n)
    if n > 1:
        Br = system.B[np.ix_(keep, keep)]
        try:
            theta[keep] = np.linalg.solve(Br, P[keep] / system.base_mva)
        except np.linalg.LinAlgError as exc:
            raise DisconnectedGridError("reduced susceptance matrix is singular") from exc
    flows = system.b * (system.incidence @ theta) * system.base_mva
    return theta, flows


def ptdf(system: SusceptanceSystem) -> np.ndarray:
    """Power transfer distribution factors, shape (n_branch, n_bus); column
    ``i`` is the flow change for 1 MW injected at bus ``i`` and withdrawn at
    the slack."""
    n = system.n_bus
    keep = np.arange(n) != system.slack
    X = np.zeros((n, n))
    if n > 1:
        X[np.ix_(keep, keep)] = np.linalg.inv(system.B[np.ix_(keep, keep)])
    return (system.b[:, None] * system.incidence) @ X


@dataclass(frozen=True, eq=False)
class DispatchResult:
    t: int
    generator_ids: tuple
    setpoints: np.ndarray  # MW, G_given
    angles: np.ndarray
    flows: np.ndarray
    total_cost: float  # EUR per hour of operation
    feasible: bool = True
    load_expected: np.ndarray | None = None  # per load point, MW
    res_expected: np.ndarray | None = None  # per RES plant, MW

    def setpoint(self, gen_id: str) -> float:
        return float(self.setpoints[self.generator_ids.index(gen_id)])

    def to_csv(self, scenario: GridScenario) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["generator_id", "setpoint_mw", "cost_eur_per_h"])
        for g, p in zip(scenario.generators, self.setpoints):
            w.writerow([g.id, repr(float(p)), repr(float(p * g.c_prod))])
        return buf.getvalue()


def _bus_injection_matrices(scenario: GridScenario):
    idx = scenario.bus_index
    n = len(scenario.buses)
    Cg = np.zeros((n, len(scenario.generators)))
    for k, g in enumerate(scenario.generators):
        Cg[idx[g.bus_id], k] = 1.0
    Cl = np.zeros((n, len(scenario.loads)))
    for k, ld in enumerate(scenario.loads):
        Cl[idx[ld.bus_id], k] = 1.0
    Cr = np.zeros((n, len(scenario.res_generators)))
    for k, g in enumerate(scenario.res_generators):
        Cr[idx[g.bus_id], k] = 1.0
    return Cg, Cl, Cr


def solve_reference_dispatch(scenario: GridScenario, t: int, system: SusceptanceSystem | None = None,
                             p_percent: float | None = None) -> DispatchResult:
    """Cost-minimal conventional dispatch covering expected load net of
    expected RES at instant ``t``, within generator and branch limits."""
    if not 0 <= t < scenario.n_instants:
        raise ValueError(f"instant {t} outside 0..{scenario.n_instants - 1}")
    system = system or build_susceptance(scenario)
    gens = scenario.generators
    ng, n = len(gens), system.n_bus
    keep = np.flatnonzero(np.arange(n) != system.slack)
    Cg, Cl, Cr = _bus_injection_matrices(scenario)
    load = scenario.load_matrix[:, t] if scenario.loads else np.zeros(0)
    res = scenario.res_matrix[:, t] if scenario.res_generators else np.zeros(0)
    net = Cl @ load - Cr @ res  # MW to be supplied at each bus

    base = system.base_mva
    # ties in cost go to the lowest generator id
    rank = np.argsort(np.argsort([g.id for g in gens], kind="stable"), kind="stable")
    cost = np.array([g.c_prod for g in gens])
    c = np.concatenate([cost + 1e-6 * rank, np.zeros(len(keep))])
    A_eq = np.hstack([Cg, -base * system.B[:, keep]])
    limited = np.flatnonzero(system.flow_limits > 0)
    F = base * (system.b[:, None] * system.incidence)[limited][:, keep]
    A_ub = np.vstack([np.hstack([np.zeros((len(limited), ng)), F]),
                      np.hstack([np.zeros((len(limited), ng)), -F])])
    b_ub = np.concatenate([system.flow_limits[limited], system.flow_limits[limited]])
    bounds = [(g.g_min, g.g_max) for g in gens] + [(None, None)] * len(keep)
    sol = linprog(c, A_ub=A_ub if len(limited) else None, b_ub=b_ub if len(limited) else None,
                  A_eq=A_eq, b_eq=net, bounds=bounds, method="highs")
    if sol.status != 0:
        raise InfeasibleDispatchError(_diagnose(scenario, net, sol.message), t=t, p_percent=p_percent,
                                      binding=_binding_guess(scenario, net))
    g = np.clip(sol.x[:ng], [gg.g_min for gg in gens], [gg.g_max for gg in gens])
    injections = Cg @ g - net
    theta, flows = solve_dc_power_flow(system, injections)
    for arr in (g, theta, flows):
        arr.setflags(write=False)
    return DispatchResult(t, tuple(gg.id for gg in gens), g, theta, flows, float(cost @ g), True,
                          np.array(load, dtype=float), np.array(res, dtype=float))


def _binding_guess(scenario, net):
    total = net.sum()
    if total > sum(g.g_max for g in scenario.generators):
        return ("g_max",)
    if total < sum(g.g_min for g in scenario.generators):
        return ("g_min",)
    return ("flow_limit",)


def _diagnose(scenario, net, solver_msg):
    total = float(net.sum())
    cap = sum(g.g_max for g in scenario.generators)
    floor = sum(g.g_min for g in scenario.generators)
    if total > cap:
        return f"residual load {total:.2f} MW exceeds conventional capacity {cap:.2f} MW"
    if total < floor:
        return f"residual load {total:.2f} MW below the sum of minimum outputs {floor:.2f} MW"
    return f"no dispatch satisfies the branch flow limits ({solver_msg})"


@dataclass(frozen=True)
class BalancingRequirement:
    """Zonal mismatch, MW.  Positive = deficit, up-regulation needed."""

    t: int
    per_zone: dict
    total: float
    config_index: int = 0


def compute_imbalance(reference: DispatchResult, scenario: GridScenario,
                      state: PerturbedState) -> BalancingRequirement:
    """Per node ``(realised - expected) load - (realised - expected) RES``,
    summed per zone."""
    if reference.t != state.t:
        raise ValueError(f"reference is for t={reference.t} but state is for t={state.t}")
    ref_load = reference.load_expected if reference.load_expected is not None else scenario.load_matrix[:, state.t]
    ref_res = reference.res_expected if reference.res_expected is not None else scenario.res_matrix[:, state.t]
    per_zone = {z.id: 0.0 for z in scenario.zones}
    zone_of = scenario.bus_zone
    for ld, expected in zip(scenario.loads, ref_load):
        per_zone[zone_of[ld.bus_id]] += state.loads[ld.id] - float(expected)
    for g, expected in zip(scenario.res_generators, ref_res):
        per_zone[zone_of[g.bus_id]] -= state.res[g.id] - float(expected)
    return BalancingRequirement(state.t, per_zone, float(sum(per_zone.values())), state.config_index)


def zone_membership(scenario: GridScenario) -> tuple[np.ndarray, np.ndarray]:
    """0/1 matrices mapping loads and RES plants to zones, shapes
    (n_loads, n_zones) and (n_res, n_zones)."""
    zi = scenario.zone_index
    zl = np.zeros((len(scenario.loads), len(scenario.zones)))
    for k, ld in enumerate(scenario.loads):
        zl[k, zi[scenario.bus_zone[ld.bus_id]]] = 1.0
    zr = np.zeros((len(scenario.res_generators), len(scenario.zones)))
    for k, g in enumerate(scenario.res_generators):
        zr[k, zi[scenario.bus_zone[g.bus_id]]] = 1.0
    return zl, zr


def zone_imbalance(scenario: GridScenario, ensemble: EnsembleState) -> np.ndarray:
    """Vectorised :func:`compute_imbalance` over an ensemble; shape
    (n_members, n_zones)."""
    zl, zr = zone_membership(scenario)
    dl = ensemble.loads - scenario.load_matrix[:, ensemble.t]
    s = dl @ zl
    if scenario.res_generators:
        s -= (ensemble.res - scenario.res_matrix[:, ensemble.t]) @ zr
    return s
