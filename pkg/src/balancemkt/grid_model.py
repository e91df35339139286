"""Grid and scenario data model.

A :class:`GridScenario` bundles the transmission network (buses, branches),
the conventional fleet, renewable (wind/PV) plants, load points, market zones
and the daily profile of expected load and renewable output.  Scenarios are
immutable once built and are exchanged as JSON documents, see
:func:`load_scenario` / :func:`dump_scenario`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path

import numpy as np

TECHNOLOGIES = ("coal", "combined_cycle", "turbogas", "oil")
RES_KINDS = ("wind", "pv")

# EUR/MWh; only the ordering matters for the profit results
DEFAULT_PRODUCTION_COST = {"coal": 40.0, "combined_cycle": 60.0, "turbogas": 110.0, "oil": 130.0}


class ScenarioError(ValueError):
    """Base class for scenario problems."""


class ScenarioParseError(ScenarioError):
    """The document is not valid JSON or does not follow the schema."""


class ScenarioValidationError(ScenarioError):
    """A scenario invariant is violated.

    ``entity`` names the offending element (bus, branch, generator...) when
    there is one.
    """

    def __init__(self, message: str, entity: str | None = None):
        super().__init__(message if entity is None else f"{entity}: {message}")
        self.entity = entity


@dataclass(frozen=True)
class Zone:
    id: str
    name: str = ""


@dataclass(frozen=True)
class Bus:
    id: str
    zone_id: str
    is_slack: bool = False


@dataclass(frozen=True)
class Branch:
    id: str
    from_bus: str
    to_bus: str
    susceptance: float  # per unit on meta.base_mva
    flow_limit: float  # MW, 0 = unlimited


@dataclass(frozen=True)
class ConventionalGenerator:
    id: str
    bus_id: str
    technology: str
    g_min: float
    g_max: float
    g_ramp: float  # MW per market interval
    c_prod: float  # EUR/MWh


@dataclass(frozen=True)
class ResGenerator:
    id: str
    bus_id: str
    kind: str
    capacity: float
    floor: float = 0.0


@dataclass(frozen=True)
class LoadPoint:
    """A demand point.  ``d_min``/``d_max`` of ``None`` means "use
    0.5x / 1.5x of the expected demand at each instant" as fluctuation
    bounds."""

    id: str
    bus_id: str
    d_min: float | None = None
    d_max: float | None = None


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DailyProfile:
    """Expected load per load point and expected output per RES plant,
    ``n_instants`` evenly spaced samples over one day (MW)."""

    n_instants: int
    load: dict
    res: dict

    def __post_init__(self):
        object.__setattr__(self, "load", {k: _frozen(v) for k, v in self.load.items()})
        object.__setattr__(self, "res", {k: _frozen(v) for k, v in self.res.items()})

    @property
    def interval_hours(self) -> float:
        return 24.0 / self.n_instants

    def __eq__(self, other):
        if not isinstance(other, DailyProfile) or self.n_instants != other.n_instants:
            return NotImplemented if not isinstance(other, DailyProfile) else False
        return all(
            mine.keys() == theirs.keys() and all(np.array_equal(mine[k], theirs[k]) for k in mine)
            for mine, theirs in ((self.load, other.load), (self.res, other.res)))

    __hash__ = object.__hash__


@dataclass(frozen=True)
class GridScenario:
    buses: tuple
    branches: tuple
    generators: tuple
    res_generators: tuple
    loads: tuple
    zones: tuple
    profile: DailyProfile
    name: str = "scenario"
    base_mva: float = 100.0
    extra_meta: dict = field(default_factory=dict, compare=False)

    @property
    def n_instants(self) -> int:
        return self.profile.n_instants

    @cached_property
    def bus_index(self) -> dict:
        return {b.id: i for i, b in enumerate(self.buses)}

    @cached_property
    def zone_index(self) -> dict:
        return {z.id: i for i, z in enumerate(self.zones)}

    @cached_property
    def bus_zone(self) -> dict:
        return {b.id: b.zone_id for b in self.buses}

    @cached_property
    def slack_index(self) -> int:
        return next(i for i, b in enumerate(self.buses) if b.is_slack)

    @cached_property
    def load_matrix(self) -> np.ndarray:
        """Expected load, shape (n_loads, T)."""
        m = np.array([self.profile.load[ld.id] for ld in self.loads]).reshape(len(self.loads), self.n_instants)
        m.setflags(write=False)
        return m

    @cached_property
    def res_matrix(self) -> np.ndarray:
        """Expected RES output, shape (n_res, T)."""
        m = np.array([self.profile.res[g.id] for g in self.res_generators]).reshape(
            len(self.res_generators), self.n_instants)
        m.setflags(write=False)
        return m

    def total_load(self, t: int | None = None):
        tot = self.load_matrix.sum(axis=0)
        return tot if t is None else float(tot[t])

    def total_res(self, t: int | None = None):
        tot = self.res_matrix.sum(axis=0) if self.res_generators else np.zeros(self.n_instants)
        return tot if t is None else float(tot[t])

    def generators_in_zone(self, zone_id: str) -> list:
        return [g for g in self.generators if self.bus_zone[g.bus_id] == zone_id]

    def __hash__(self):
        return id(self)


# ---------------------------------------------------------------------------
# validation

def validate_scenario(sc: GridScenario) -> GridScenario:
    """Check every scenario invariant; raise :class:`ScenarioValidationError`
    naming the first violation."""
    zone_ids = set()
    for z in sc.zones:
        if z.id in zone_ids:
            raise ScenarioValidationError("duplicate zone id", z.id)
        zone_ids.add(z.id)
    if not sc.buses:
        raise ScenarioValidationError("scenario has no buses")
    bus_ids = set()
    for b in sc.buses:
        if b.id in bus_ids:
            raise ScenarioValidationError("duplicate bus id", b.id)
        bus_ids.add(b.id)
        if b.zone_id not in zone_ids:
            raise ScenarioValidationError(f"unknown zone {b.zone_id!r}", b.id)
    n_slack = sum(b.is_slack for b in sc.buses)
    if n_slack != 1:
        raise ScenarioValidationError(f"expected exactly one slack bus, found {n_slack}")
    if not sc.base_mva > 0:
        raise ScenarioValidationError("base_mva must be positive", "meta")

    seen = set()
    for br in sc.branches:
        if br.id in seen:
            raise ScenarioValidationError("duplicate branch id", br.id)
        seen.add(br.id)
        for end in (br.from_bus, br.to_bus):
            if end not in bus_ids:
                raise ScenarioValidationError(f"endpoint {end!r} is not a bus", br.id)
        if br.from_bus == br.to_bus:
            raise ScenarioValidationError("branch connects a bus to itself", br.id)
        if not br.susceptance > 0:
            raise ScenarioValidationError("susceptance must be > 0", br.id)
        if br.flow_limit < 0:
            raise ScenarioValidationError("flow_limit must be >= 0", br.id)
    _check_connected(sc, bus_ids)

    for g in sc.generators:
        _check_unique(g.id, seen)
        if g.bus_id not in bus_ids:
            raise ScenarioValidationError(f"unknown bus {g.bus_id!r}", g.id)
        if g.technology not in TECHNOLOGIES:
            raise ScenarioValidationError(f"unknown technology {g.technology!r}", g.id)
        if not 0 <= g.g_min <= g.g_max:
            raise ScenarioValidationError("need 0 <= g_min <= g_max", g.id)
        if not g.g_ramp > 0:
            raise ScenarioValidationError("g_ramp must be > 0", g.id)
        if not g.c_prod > 0:
            raise ScenarioValidationError("c_prod must be > 0", g.id)

    T = sc.profile.n_instants
    if T < 1:
        raise ScenarioValidationError("profile needs at least one instant", "profile")
    for g in sc.res_generators:
        _check_unique(g.id, seen)
        if g.bus_id not in bus_ids:
            raise ScenarioValidationError(f"unknown bus {g.bus_id!r}", g.id)
        if g.kind not in RES_KINDS:
            raise ScenarioValidationError(f"unknown RES kind {g.kind!r}", g.id)
        if not 0 <= g.floor <= g.capacity:
            raise ScenarioValidationError("need 0 <= floor <= capacity", g.id)
        prof = _profile_row(sc.profile.res, g.id, T)
        if np.any(prof < 0) or np.any(prof > g.capacity * (1 + 1e-9)):
            raise ScenarioValidationError("expected output outside [0, capacity]", g.id)

    for ld in sc.loads:
        _check_unique(ld.id, seen)
        if ld.bus_id not in bus_ids:
            raise ScenarioValidationError(f"unknown bus {ld.bus_id!r}", ld.id)
        prof = _profile_row(sc.profile.load, ld.id, T)
        if np.any(prof < 0):
            raise ScenarioValidationError("negative expected load", ld.id)
        lo = 0.0 if ld.d_min is None else ld.d_min
        hi = math.inf if ld.d_max is None else ld.d_max
        if lo < 0 or lo > hi:
            raise ScenarioValidationError("need 0 <= d_min <= d_max", ld.id)
        if np.any(prof < lo - 1e-9) or np.any(prof > hi + 1e-9):
            raise ScenarioValidationError("expected load outside [d_min, d_max]", ld.id)

    extra = (set(sc.profile.load) - {ld.id for ld in sc.loads}) | (
        set(sc.profile.res) - {g.id for g in sc.res_generators})
    if extra:
        raise ScenarioValidationError("profile references unknown elements", sorted(extra)[0])

    g_cap = sum(g.g_max for g in sc.generators)
    total = sc.total_load()
    if total.size and g_cap < total.max() - 1e-9:
        t = int(np.argmax(total))
        raise ScenarioValidationError(
            f"infeasible: total load {total[t]:.3f} MW at t={t} exceeds conventional capacity {g_cap:.3f} MW",
            "feasibility")
    return sc


def _check_unique(ident, seen):
    if ident in seen:
        raise ScenarioValidationError("duplicate element id", ident)
    seen.add(ident)


def _profile_row(table, ident, T):
    if ident not in table:
        raise ScenarioValidationError("missing profile row", ident)
    row = table[ident]
    if row.shape != (T,):
        raise ScenarioValidationError(f"profile row must have {T} entries", ident)
    return row


def _check_connected(sc, bus_ids):
    adj = {b: [] for b in bus_ids}
    for br in sc.branches:
        adj[br.from_bus].append(br.to_bus)
        adj[br.to_bus].append(br.from_bus)
    start = sc.buses[0].id
    seen = {start}
    stack = [start]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(bus_ids):
        missing = sorted(bus_ids - seen)[0]
        raise ScenarioValidationError("grid is not connected", missing)


# ---------------------------------------------------------------------------
# JSON (de)serialisation

def scenario_to_dict(sc: GridScenario) -> dict:
    meta = {"name": sc.name, "base_mva": sc.base_mva, "n_instants": sc.n_instants}
    meta.update(sc.extra_meta)
    return {
        "meta": meta,
        "zones": [{"id": z.id, "name": z.name} for z in sc.zones],
        "buses": [{"id": b.id, "zone_id": b.zone_id, "is_slack": b.is_slack} for b in sc.buses],
        "branches": [{"id": br.id, "from_bus": br.from_bus, "to_bus": br.to_bus,
                      "susceptance": br.susceptance, "flow_limit": br.flow_limit} for br in sc.branches],
        "generators": [{"id": g.id, "bus_id": g.bus_id, "technology": g.technology, "g_min": g.g_min,
                        "g_max": g.g_max, "g_ramp": g.g_ramp, "c_prod": g.c_prod} for g in sc.generators],
        "res_generators": [{"id": g.id, "bus_id": g.bus_id, "kind": g.kind, "capacity": g.capacity,
                            "floor": g.floor} for g in sc.res_generators],
        "loads": [{"id": ld.id, "bus_id": ld.bus_id, "d_min": ld.d_min, "d_max": ld.d_max} for ld in sc.loads],
        "profile": {
            "load": {k: v.tolist() for k, v in sc.profile.load.items()},
            "res": {k: v.tolist() for k, v in sc.profile.res.items()},
        },
    }


def dump_scenario(sc: GridScenario, indent: int | None = 1) -> str:
    return json.dumps(scenario_to_dict(sc), indent=indent)


def _opt_float(v):
    return None if v is None else float(v)


def scenario_from_dict(doc: dict) -> GridScenario:
    """Build and validate a scenario from a parsed document."""
    try:
        meta = dict(doc["meta"])
        profile = doc["profile"]
        load_prof = {str(k): v for k, v in profile.get("load", {}).items()}
        res_prof = {str(k): v for k, v in profile.get("res", {}).items()}
        lengths = {len(v) for v in list(load_prof.values()) + list(res_prof.values())}
        T = int(meta.get("n_instants", lengths.pop() if len(lengths) == 1 else 96))
        zones = tuple(Zone(str(z["id"]), str(z.get("name", ""))) for z in doc["zones"])
        buses = tuple(Bus(str(b["id"]), str(b["zone_id"]), bool(b.get("is_slack", False))) for b in doc["buses"])
        branches = tuple(
            Branch(str(br.get("id", f"{br['from_bus']}-{br['to_bus']}")), str(br["from_bus"]), str(br["to_bus"]),
                   float(br["susceptance"]), float(br.get("flow_limit", 0.0)))
            for br in doc.get("branches", []))
        gens = tuple(
            ConventionalGenerator(str(g["id"]), str(g["bus_id"]), str(g["technology"]), float(g["g_min"]),
                                  float(g["g_max"]), float(g["g_ramp"]),
                                  float(g.get("c_prod", DEFAULT_PRODUCTION_COST.get(g["technology"], 0.0))))
            for g in doc.get("generators", []))
        res = tuple(
            ResGenerator(str(g["id"]), str(g["bus_id"]), str(g["kind"]), float(g["capacity"]),
                         float(g.get("floor", 0.0)))
            for g in doc.get("res_generators", []))
        loads = tuple(
            LoadPoint(str(ld.get("id", ld["bus_id"])), str(ld["bus_id"]), _opt_float(ld.get("d_min")),
                      _opt_float(ld.get("d_max")))
            for ld in doc.get("loads", []))
        name = str(meta.pop("name", "scenario"))
        base = float(meta.pop("base_mva", 100.0))
        meta.pop("n_instants", None)
        prof = DailyProfile(T, load_prof, res_prof)
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ScenarioParseError(f"malformed scenario document: {exc!r}") from exc
    sc = GridScenario(buses, branches, gens, res, loads, zones, prof, name=name, base_mva=base, extra_meta=meta)
    return validate_scenario(sc)


def load_scenario(source) -> GridScenario:
    """Parse a scenario from JSON text (``str``/``bytes``) or an already
    decoded mapping.  Use :func:`read_scenario` for paths."""
    if isinstance(source, dict):
        return scenario_from_dict(source)
    try:
        doc = json.loads(source)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ScenarioParseError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioParseError("scenario document must be a JSON object")
    return scenario_from_dict(doc)


def read_scenario(path) -> GridScenario:
    return load_scenario(Path(path).read_text())


def write_scenario(sc: GridScenario, path) -> None:
    Path(path).write_text(dump_scenario(sc) + "\n")


# ---------------------------------------------------------------------------
# renewable share

def scale_res_share(sc: GridScenario, p_percent: float) -> GridScenario:
    """Rescale expected RES output so that it covers ``p_percent`` of the
    total load at every instant.

    All RES expectations at instant t are multiplied by the same factor
    ``p * L(t) / RES(t)``; loads stay fixed.  A plant whose new expectation
    exceeds its capacity gets its capacity raised to that peak.
    """
    if not 0 < p_percent <= 1:
        raise ValueError(f"p_percent must be in (0, 1], got {p_percent}")
    if not sc.res_generators:
        raise ScenarioValidationError("cannot rescale renewable share without RES generators", "res_generators")
    load = sc.total_load()
    res = sc.total_res()
    bad = np.flatnonzero((res <= 0) & (load > 0))
    if bad.size:
        raise ScenarioValidationError(f"no renewable output to rescale at t={int(bad[0])}", "profile")
    with np.errstate(divide="ignore", invalid="ignore"):
        factor = np.where(res > 0, (p_percent * load) / res, 0.0)
    new_prof = {}
    new_res = []
    for g, row in zip(sc.res_generators, sc.res_matrix):
        scaled = factor * row
        new_prof[g.id] = scaled
        peak = float(scaled.max())
        new_res.append(replace(g, capacity=max(g.capacity, peak)))
    profile = DailyProfile(sc.n_instants, dict(sc.profile.load), new_prof)
    return replace(sc, res_generators=tuple(new_res), profile=profile,
                   extra_meta={**sc.extra_meta, "res_share": p_percent})


# ---------------------------------------------------------------------------
# synthetic scenarios

@dataclass(frozen=True)
class SynthesisSpec:
    """Knobs for :func:`synthesize_scenario`.

    ``res_fraction_of_capacity`` is the share of total installed capacity
    that is renewable; ``pv_share`` splits that between PV and wind.
    ``wind_farms_per_bus`` spreads wind over several small plants per bus.
    ``res_zone_weights`` sets the relative RES capacity installed in each
    zone (uniform when None).
    """

    n_buses: int = 20
    n_zones: int = 6
    res_fraction_of_capacity: float = 0.3
    seed: int = 0
    n_instants: int = 96
    pv_share: float = 0.6
    wind_farms_per_bus: int = 1
    base_mva: float = 100.0
    res_zone_weights: tuple | None = None


def load_shape(hours: np.ndarray) -> np.ndarray:
    """Winter weekday load, normalised to peak 1: night valley, a morning
    peak around 11h and the evening peak around 18-19h."""
    morning = 0.30 * np.exp(-0.5 * ((hours - 11.0) / 2.5) ** 2)
    evening = 0.38 * np.exp(-0.5 * ((hours - 18.5) / 2.0) ** 2)
    base = 0.62 + 0.06 * np.sin(2 * np.pi * (hours - 6.0) / 24.0)
    shape = base + morning + evening
    return shape / shape.max()


def pv_shape(hours: np.ndarray, sunrise: float = 7.5, sunset: float = 16.5) -> np.ndarray:
    """Capacity factor of a PV plant on a clear winter day; exactly zero
    between sunset and sunrise."""
    span = sunset - sunrise
    x = (hours - sunrise) / span
    inside = (x > 0) & (x < 1)
    return np.where(inside, 0.7 * np.sin(np.pi * np.clip(x, 0, 1)) ** 2, 0.0)


# fraction of zonal peak load, g_min fraction, ramp fraction of g_max per interval
_FLEET = {
    "coal": (0.55, 0.25, 0.03),
    "combined_cycle": (0.50, 0.10, 0.06),
    "turbogas": (0.25, 0.0, 0.60),
    "oil": (0.20, 0.0, 0.50),
}


def synthesize_scenario(spec: SynthesisSpec) -> GridScenario:
    """Generate a self-contained desk-scale scenario, deterministic in
    ``spec`` (including its seed).

    Buses are assigned to zones round-robin.  Each zone owns one plant of
    every conventional technology; every bus carries a load; PV and wind
    plants are spread over the buses when ``res_fraction_of_capacity`` > 0.
    """
    if spec.n_buses < 2:
        raise ScenarioValidationError("need at least 2 buses", "synthesis")
    if spec.n_zones < 1 or spec.n_zones > spec.n_buses:
        raise ScenarioValidationError("need 1 <= n_zones <= n_buses", "synthesis")
    if not 0 <= spec.res_fraction_of_capacity < 1:
        raise ScenarioValidationError("res_fraction_of_capacity must be in [0, 1)", "synthesis")
    rng = np.random.default_rng(spec.seed)
    T = spec.n_instants
    hours = np.arange(T) * 24.0 / T

    zones = tuple(Zone(f"Z{k + 1}", f"zone {k + 1}") for k in range(spec.n_zones))
    buses = tuple(Bus(f"B{i + 1}", zones[i % spec.n_zones].id, is_slack=(i == 0)) for i in range(spec.n_buses))

    # ring + random chords keeps the grid connected and meshed
    edges = [(i, (i + 1) % spec.n_buses) for i in range(spec.n_buses if spec.n_buses > 2 else 1)]
    n_chords = max(0, spec.n_buses // 3)
    existing = {tuple(sorted(e)) for e in edges}
    tries = 0
    while n_chords and tries < 50 * spec.n_buses:
        tries += 1
        i, j = sorted(int(x) for x in rng.choice(spec.n_buses, size=2, replace=False))
        if (i, j) not in existing:
            existing.add((i, j))
            edges.append((i, j))
            n_chords -= 1

    peaks = rng.uniform(60.0, 160.0, size=spec.n_buses).round(1)
    shape = load_shape(hours)
    loads, load_prof = [], {}
    for i, b in enumerate(buses):
        lid = f"L{i + 1}"
        loads.append(LoadPoint(lid, b.id))
        load_prof[lid] = (peaks[i] * shape).round(4)
    total_peak = float(sum(load_prof[ld.id].max() for ld in loads))

    gens = []
    for k, z in enumerate(zones):
        zone_buses = [b for b in buses if b.zone_id == z.id]
        zone_peak = float(sum(peaks[i] for i, b in enumerate(buses) if b.zone_id == z.id))
        for n, (tech, (frac, fmin, framp)) in enumerate(_FLEET.items()):
            bus = zone_buses[(n * 2 + k) % len(zone_buses)]
            g_max = round(frac * zone_peak * float(rng.uniform(0.9, 1.1)), 1)
            cost = DEFAULT_PRODUCTION_COST[tech] * float(rng.uniform(0.95, 1.05))
            gens.append(ConventionalGenerator(f"G{k + 1}_{tech}", bus.id, tech, round(fmin * g_max, 1), g_max,
                                              round(max(framp * g_max, 1.0), 1), round(cost, 2)))
    conv_cap = sum(g.g_max for g in gens)

    res_gens, res_prof = [], {}
    f = spec.res_fraction_of_capacity
    if f > 0:
        res_cap = f / (1 - f) * conv_cap
        pv_cap = spec.pv_share * res_cap
        wind_cap = res_cap - pv_cap
        zw = np.ones(spec.n_zones) if spec.res_zone_weights is None else np.asarray(spec.res_zone_weights, float)
        if zw.shape != (spec.n_zones,) or np.any(zw < 0) or zw.sum() <= 0:
            raise ScenarioValidationError("res_zone_weights needs one non-negative weight per zone", "synthesis")
        per_bus = np.array([zw[i % spec.n_zones] / np.sum(np.arange(spec.n_buses) % spec.n_zones == i % spec.n_zones)
                            for i in range(spec.n_buses)])
        w_pv = rng.uniform(0.5, 1.5, size=spec.n_buses) * per_bus
        w_wind = rng.uniform(0.5, 1.5, size=(spec.n_buses, spec.wind_farms_per_bus)) * per_bus[:, None]
        pv_cf = pv_shape(hours)
        for i, b in enumerate(buses):
            if pv_cap > 0:
                cap = round(pv_cap * w_pv[i] / w_pv.sum(), 2)
                gid = f"PV{i + 1}"
                res_gens.append(ResGenerator(gid, b.id, "pv", cap))
                res_prof[gid] = np.minimum((cap * pv_cf).round(4), cap)
            for m in range(spec.wind_farms_per_bus):
                if wind_cap <= 0:
                    break
                cap = round(wind_cap * w_wind[i, m] / w_wind.sum(), 2)
                phase = rng.uniform(0, 2 * np.pi)
                cf = 0.35 + 0.08 * np.sin(2 * np.pi * hours / 24.0 + phase) \
                    + 0.04 * np.sin(2 * np.pi * hours / 8.0 + 2 * phase)
                gid = f"W{i + 1}" if spec.wind_farms_per_bus == 1 else f"W{i + 1}_{m + 1}"
                res_gens.append(ResGenerator(gid, b.id, "wind", cap))
                res_prof[gid] = np.minimum((cap * cf).round(4), cap)

    branches = []
    for n, (i, j) in enumerate(edges):
        b = round(float(rng.uniform(8.0, 20.0)), 3)
        branches.append(Branch(f"BR{n + 1}", buses[i].id, buses[j].id, b, round(total_peak, 1)))

    sc = GridScenario(buses, tuple(branches), tuple(gens), tuple(res_gens), tuple(loads), zones,
                      DailyProfile(T, load_prof, res_prof),
                      name=f"synthetic-{spec.n_buses}bus-{spec.n_zones}zone-seed{spec.seed}",
                      base_mva=spec.base_mva)
    return validate_scenario(sc)
