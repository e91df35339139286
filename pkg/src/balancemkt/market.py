"""Agent-based balancing market.

One agent per conventional generator keeps two propensity vectors over a
grid of price markups (upward bids: markups in [1, 10], downward bids:
[0, 1]).  Each session every agent draws a markup with probability
proportional to its propensity and offers its feasible ramp at
``c_prod * markup``; the market authority accepts offers in ascending price
order until the requirement is met.  Propensities then follow a modified
Roth-Erev update: the played strategy is reinforced by the realised profit,
all other strategies (and a rejected played one) receive an experimentation
share ``e * s / (N - 1)``, and everything decays with recency ``r``.

The object API (:func:`draw_bid`, :func:`clear_session`,
:func:`roth_erev_update`) and the array kernels used by the training loop
share the same code paths.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .grid_model import ConventionalGenerator
from .rng import RngStream

UP, DOWN = "up", "down"
PROPENSITY_FLOOR = 1e-6


@dataclass(frozen=True)
class MarkupGrid:
    n_strategies: int = 50

    def __post_init__(self):
        if self.n_strategies < 2:
            raise ValueError("need at least two strategies")

    @property
    def up(self) -> np.ndarray:
        return np.linspace(1.0, 10.0, self.n_strategies)

    @property
    def down(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_strategies)

    def markups(self, direction: str) -> np.ndarray:
        return self.up if direction == UP else self.down


@dataclass(frozen=True)
class LearningParams:
    recency: float = 0.1
    experimentation: float = 0.2
    learning_iterations: int = 3000
    evaluation_iterations: int = 1000
    n_strategies: int = 50
    legacy_update: bool = False  # experimentation term uses the markup instead of the propensity
    settlement: str = "pay_as_bid"

    def __post_init__(self):
        if not 0 <= self.recency <= 1 or not 0 <= self.experimentation <= 1:
            raise ValueError("recency and experimentation must lie in [0, 1]")
        if self.learning_iterations < 0 or self.evaluation_iterations < 0:
            raise ValueError("iteration counts must be >= 0")
        if self.settlement not in ("pay_as_bid", "marginal"):
            raise ValueError(f"unknown settlement rule {self.settlement!r}")

    @property
    def grid(self) -> MarkupGrid:
        return MarkupGrid(self.n_strategies)


@dataclass(frozen=True, eq=False)
class AgentState:
    generator_id: str
    propensities_up: np.ndarray
    propensities_down: np.ndarray

    @classmethod
    def initial(cls, generator_id: str, n_strategies: int = 50) -> "AgentState":
        return cls(generator_id, np.ones(n_strategies), np.ones(n_strategies))

    def propensities(self, direction: str) -> np.ndarray:
        return self.propensities_up if direction == UP else self.propensities_down

    def probabilities(self, direction: str) -> np.ndarray:
        s = self.propensities(direction)
        return s / s.sum()

    def __eq__(self, other):
        if not isinstance(other, AgentState):
            return NotImplemented
        return (self.generator_id == other.generator_id
                and np.array_equal(self.propensities_up, other.propensities_up)
                and np.array_equal(self.propensities_down, other.propensities_down))

    __hash__ = object.__hash__


@dataclass(frozen=True)
class Bid:
    agent_id: str
    direction: str
    quantity: float  # MWh offered in the session
    price: float  # EUR/MWh
    strategy: int
    c_prod: float


@dataclass(frozen=True)
class MarketSessionResult:
    direction: str
    requirement: float  # MWh
    cleared: float
    accepted: tuple  # (Bid, accepted MWh) in merit order
    cost: float  # EUR paid (or received back, down market) by the authority
    profits: dict  # agent id -> EUR
    shortfall: float
    marginal_price: float = float("nan")  # price of the last accepted offer

    @property
    def average_price(self) -> float:
        return self.cost / self.cleared if self.cleared > 0 else float("nan")


# ---------------------------------------------------------------------------
# bids

def feasible_quantity(gen: ConventionalGenerator, g_given: float, direction: str) -> float:
    """Largest deviation from ``g_given`` the plant can offer in one
    interval, within its output range and ramp limit (MW)."""
    tol = 1e-9 * max(1.0, gen.g_max)
    if not gen.g_min - tol <= g_given <= gen.g_max + tol:
        raise ValueError(f"{gen.id}: g_given={g_given} outside [{gen.g_min}, {gen.g_max}]")
    if direction == UP:
        room = gen.g_max - g_given
    elif direction == DOWN:
        room = g_given - gen.g_min
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return max(0.0, min(room, gen.g_ramp))


def choose_strategies(propensities: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF pick of one strategy per row, ``u`` uniform in [0, 1)."""
    cum = np.cumsum(propensities, axis=-1)
    idx = (cum < (u * cum[..., -1])[..., None]).sum(axis=-1)
    return np.minimum(idx, propensities.shape[-1] - 1)


def draw_bid(agent: AgentState, gen: ConventionalGenerator, g_given: float, direction: str, rng,
             grid: MarkupGrid | None = None, interval_hours: float = 1.0) -> Bid:
    grid = grid or MarkupGrid(len(agent.propensities_up))
    gen_ = rng.gen if isinstance(rng, RngStream) else rng
    i = int(choose_strategies(agent.propensities(direction), np.array(gen_.random()))[()])
    qty = feasible_quantity(gen, g_given, direction) * interval_hours
    return Bid(gen.id, direction, qty, gen.c_prod * float(grid.markups(direction)[i]), i, gen.c_prod)


# ---------------------------------------------------------------------------
# clearing

def merit_order(prices: np.ndarray, tie_rank: np.ndarray) -> np.ndarray:
    return np.lexsort((tie_rank, prices))


def fill(requirement: float, quantities: np.ndarray, order: np.ndarray,
         admit: Callable[[int, float], bool] | None = None) -> np.ndarray:
    """Greedy acceptance in ``order``; the marginal offer is partially
    accepted.  ``admit(i, q)``, when given, may veto offer ``i``."""
    accepted = np.zeros(len(quantities))
    if requirement <= 0:
        return accepted
    if admit is None:
        q = quantities[order]
        before = np.concatenate(([0.0], np.cumsum(q)[:-1]))
        accepted[order] = np.clip(requirement - before, 0.0, q)
        return accepted
    left = requirement
    for i in order:
        if left <= 0:
            break
        q = min(quantities[i], left)
        if q > 0 and admit(int(i), q):
            accepted[i] = q
            left -= q
    return accepted


def settle(direction: str, accepted: np.ndarray, prices: np.ndarray, c_prod: np.ndarray,
           settlement: str = "pay_as_bid") -> tuple[np.ndarray, np.ndarray, float]:
    """Prices paid per offer, profit per offer and the marginal price."""
    taken = accepted > 0
    marginal = float(prices[taken].max()) if taken.any() else float("nan")
    paid = prices if settlement == "pay_as_bid" else np.full_like(prices, marginal if taken.any() else 0.0)
    margin = paid - c_prod if direction == UP else c_prod - paid
    return paid, np.where(taken, margin * accepted, 0.0), marginal


def clear_session(requirement: float, bids: Sequence[Bid], direction: str, settlement: str = "pay_as_bid",
                  admit: Callable[[Bid, float], bool] | None = None) -> MarketSessionResult:
    """Accept offers cheapest first (ties by agent id) until ``requirement``
    MWh are covered; the down market is ordered the same way since the
    authority buys back the reduction.

    ``admit(bid, quantity)`` is consulted for each offer about to be
    accepted; returning False skips it (used for network checks).
    """
    if requirement < 0:
        raise ValueError("requirement must be >= 0; pick the direction from the sign of the imbalance")
    bids = [b for b in bids if b.direction == direction]
    if not bids:
        return MarketSessionResult(direction, requirement, 0.0, (), 0.0, {}, requirement)
    qty = np.array([b.quantity for b in bids], dtype=float)
    prices = np.array([b.price for b in bids], dtype=float)
    c_prod = np.array([b.c_prod for b in bids], dtype=float)
    ids = [b.agent_id for b in bids]
    tie = np.argsort(np.argsort(ids, kind="stable"), kind="stable")
    order = merit_order(prices, tie)
    veto = None if admit is None else (lambda i, q: admit(bids[i], q))
    accepted = fill(requirement, qty, order, veto)
    paid, profit, marginal = settle(direction, accepted, prices, c_prod, settlement)
    cleared = float(accepted.sum())
    profits = {}
    for b, p in zip(bids, profit):
        profits[b.agent_id] = profits.get(b.agent_id, 0.0) + float(p)
    return MarketSessionResult(
        direction, float(requirement), cleared,
        tuple((bids[i], float(accepted[i])) for i in order if accepted[i] > 0),
        float(paid @ accepted), profits, max(0.0, float(requirement) - cleared), marginal)


# ---------------------------------------------------------------------------
# learning

def update_propensities(s: np.ndarray, played: np.ndarray, accepted: np.ndarray, profit: np.ndarray,
                        params: LearningParams, markups: np.ndarray | None = None) -> np.ndarray:
    """Roth-Erev step for a stack of agents; ``s`` has shape (agents, N)."""
    n = s.shape[-1]
    r, e = params.recency, params.experimentation
    if params.legacy_update:
        if markups is None:
            raise ValueError("legacy update needs the markup grid")
        explore = np.broadcast_to(e * markups / (n - 1), s.shape)
    else:
        explore = e * s / (n - 1)
    new = (1.0 - r) * s + explore
    rows = np.flatnonzero(accepted)
    if rows.size:
        cols = played[rows]
        new[rows, cols] = (1.0 - r) * s[rows, cols] + profit[rows]
    return np.maximum(new, PROPENSITY_FLOOR)


def roth_erev_update(agent: AgentState, played: int, accepted: bool, profit: float, params: LearningParams,
                     direction: str) -> AgentState:
    s = agent.propensities(direction)[None, :]
    markups = MarkupGrid(s.shape[1]).markups(direction)
    new = update_propensities(s, np.array([played]), np.array([bool(accepted)]), np.array([float(profit)]),
                              params, markups)[0]
    if direction == UP:
        return replace(agent, propensities_up=new)
    return replace(agent, propensities_down=new)


@dataclass
class _Fleet:
    """Array view of the agents taking part in one market."""

    gens: list
    c_prod: np.ndarray = field(init=False)
    g_min: np.ndarray = field(init=False)
    g_max: np.ndarray = field(init=False)
    ramp: np.ndarray = field(init=False)
    tie: np.ndarray = field(init=False)

    def __post_init__(self):
        self.c_prod = np.array([g.c_prod for g in self.gens], dtype=float)
        self.g_min = np.array([g.g_min for g in self.gens], dtype=float)
        self.g_max = np.array([g.g_max for g in self.gens], dtype=float)
        self.ramp = np.array([g.g_ramp for g in self.gens], dtype=float)
        ids = [g.id for g in self.gens]
        self.tie = np.argsort(np.argsort(ids, kind="stable"), kind="stable")

    def quantities(self, g_given: np.ndarray, hours: float) -> tuple[np.ndarray, np.ndarray]:
        up = np.clip(np.minimum(self.g_max - g_given, self.ramp), 0.0, None) * hours
        down = np.clip(np.minimum(g_given - self.g_min, self.ramp), 0.0, None) * hours
        return up, down


def _check_agents(agents, gens):
    if [a.generator_id for a in agents] != [g.id for g in gens]:
        raise ValueError("agents and generators must be listed in the same order")


def run_learning(sessions: Iterable, agents: Sequence[AgentState], gens: Sequence[ConventionalGenerator],
                 params: LearningParams, rng, interval_hours: float = 1.0,
                 admit_for: Callable | None = None, history: list | None = None) -> list[AgentState]:
    """Train ``agents`` on ``params.learning_iterations`` sessions.

    ``sessions`` yields ``(imbalance, g_given)`` with the signed imbalance in
    MWh (positive: up-regulation) and the schedule of each generator (MW).
    Every iteration both directions are bid; only the side selected by the
    sign of the imbalance clears and every agent updates both vectors.

    ``history``, if given, receives one ``(direction, mean accepted markup)``
    per iteration (NaN when nothing was accepted).
    """
    _check_agents(agents, gens)
    n_iter = params.learning_iterations
    if n_iter == 0:
        return list(agents)
    gen_ = rng.gen if isinstance(rng, RngStream) else rng
    fleet = _Fleet(list(gens))
    grid = params.grid
    mk = {UP: grid.up, DOWN: grid.down}
    s = {UP: np.array([a.propensities_up for a in agents], dtype=float),
         DOWN: np.array([a.propensities_down for a in agents], dtype=float)}
    n_agents = len(agents)
    u = gen_.random((n_iter, 2, n_agents))
    it = iter(sessions)
    for k in range(n_iter):
        try:
            imbalance, g_given = next(it)
        except StopIteration:
            raise ValueError(f"session stream exhausted after {k} of {n_iter} learning iterations") from None
        q_up, q_down = fleet.quantities(np.asarray(g_given, dtype=float), interval_hours)
        picks = {UP: choose_strategies(s[UP], u[k, 0]), DOWN: choose_strategies(s[DOWN], u[k, 1])}
        active = UP if imbalance > 0 else DOWN
        accepted = np.zeros(n_agents)
        profit = np.zeros(n_agents)
        if imbalance != 0:
            prices = fleet.c_prod * mk[active][picks[active]]
            admit = admit_for(k, active) if admit_for is not None else None
            accepted = fill(abs(imbalance), q_up if active == UP else q_down, merit_order(prices, fleet.tie), admit)
            _, profit, _ = settle(active, accepted, prices, fleet.c_prod, params.settlement)
        if history is not None:
            taken = accepted > 0
            history.append((active, float(mk[active][picks[active]][taken].mean()) if taken.any() else float("nan")))
        for d in (UP, DOWN):
            if d == active:
                s[d] = update_propensities(s[d], picks[d], accepted > 0, profit, params, mk[d])
            else:
                s[d] = update_propensities(s[d], picks[d], np.zeros(n_agents, dtype=bool), profit * 0, params, mk[d])
    return [AgentState(a.generator_id, s[UP][i].copy(), s[DOWN][i].copy()) for i, a in enumerate(agents)]


def run_evaluation(sessions: Iterable, agents: Sequence[AgentState], gens: Sequence[ConventionalGenerator],
                   params: LearningParams, rng, interval_hours: float = 1.0,
                   admit_for: Callable | None = None) -> list[MarketSessionResult]:
    """Clear ``params.evaluation_iterations`` sessions with frozen
    propensities.  Bids are still drawn at random from them."""
    _check_agents(agents, gens)
    n_iter = params.evaluation_iterations
    gen_ = rng.gen if isinstance(rng, RngStream) else rng
    fleet = _Fleet(list(gens))
    grid = params.grid
    probs_up = np.array([a.propensities_up for a in agents], dtype=float)
    probs_down = np.array([a.propensities_down for a in agents], dtype=float)
    u = gen_.random((n_iter, 2, len(agents)))
    results = []
    it = iter(sessions)
    for k in range(n_iter):
        try:
            imbalance, g_given = next(it)
        except StopIteration:
            raise ValueError(f"session stream exhausted after {k} of {n_iter} evaluation iterations") from None
        q_up, q_down = fleet.quantities(np.asarray(g_given, dtype=float), interval_hours)
        direction = UP if imbalance >= 0 else DOWN
        if direction == UP:
            picks, qty, mk = choose_strategies(probs_up, u[k, 0]), q_up, grid.up
        else:
            picks, qty, mk = choose_strategies(probs_down, u[k, 1]), q_down, grid.down
        bids = [Bid(g.id, direction, float(qty[i]), float(g.c_prod * mk[picks[i]]), int(picks[i]), g.c_prod)
                for i, g in enumerate(gens)]
        admit = admit_for(k, direction) if admit_for is not None else None
        veto = None
        if admit is not None:
            pos = {g.id: i for i, g in enumerate(gens)}
            veto = lambda bid, q, admit=admit: admit(pos[bid.agent_id], q)  # noqa: E731
        results.append(clear_session(abs(imbalance), bids, direction, params.settlement, veto))
    return results
