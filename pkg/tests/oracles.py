"""Independent reference implementations used as test oracles.

Nothing here imports the package's solver code: the DC network model is
rebuilt from the Laplacian pseudo-inverse and dispatches / acceptances are
found by exhaustive search on a 1 MW (1 MWh) grid.
"""
import itertools
import math

import numpy as np


def random_instance(rng, max_buses=5, max_gens=3):
    """Small integer DC-OPF case as a scenario document (one instant)."""
    n = int(rng.integers(2, max_buses + 1))
    buses = [{"id": f"B{i}", "zone_id": "Z", "is_slack": i == 0} for i in range(n)]
    edges = {(i, int(rng.integers(0, i))) for i in range(1, n)}  # random spanning tree
    for _ in range(int(rng.integers(0, 3))):
        i, j = sorted(int(x) for x in rng.choice(n, 2, replace=False))
        edges.add((j, i))
    branches = []
    for k, (i, j) in enumerate(sorted(edges)):
        limit = int(rng.choice([0, 20, 30, 40, 60, 80]))
        branches.append({"id": f"L{k}", "from_bus": f"B{i}", "to_bus": f"B{j}",
                         "susceptance": float(rng.integers(1, 6)), "flow_limit": float(limit)})
    ng = int(rng.integers(1, max_gens + 1))
    gens = []
    for k in range(ng):
        g_max = int(rng.integers(20, 61))
        gens.append({"id": f"G{k}", "bus_id": f"B{int(rng.integers(0, n))}", "technology": "coal",
                     "g_min": float(rng.integers(0, 6)), "g_max": float(g_max), "g_ramp": 10.0,
                     "c_prod": float(rng.integers(5, 50))})
    cap = sum(g["g_max"] for g in gens)
    n_loads = int(rng.integers(1, n + 1))
    load_buses = rng.choice(n, n_loads, replace=False)
    total = int(rng.integers(max(1, int(sum(g["g_min"] for g in gens))), int(cap) + 1))
    split = np.diff(np.sort(np.concatenate(([0, total], rng.integers(0, total + 1, n_loads - 1)))))
    loads = [{"id": f"D{k}", "bus_id": f"B{int(b)}"} for k, b in enumerate(load_buses)]
    return {
        "meta": {"name": "random", "base_mva": 100.0, "n_instants": 1},
        "zones": [{"id": "Z"}],
        "buses": buses, "branches": branches, "generators": gens, "res_generators": [],
        "loads": loads,
        "profile": {"load": {f"D{k}": [float(v)] for k, v in enumerate(split)}, "res": {}},
    }


def flow_matrix(doc):
    """Matrix M with branch flows (MW) = M @ nodal injections (MW, summing
    to zero), from the pseudo-inverse of the weighted Laplacian."""
    idx = {b["id"]: i for i, b in enumerate(doc["buses"])}
    n = len(idx)
    L = np.zeros((n, n))
    A = np.zeros((len(doc["branches"]), n))
    for k, br in enumerate(doc["branches"]):
        i, j, b = idx[br["from_bus"]], idx[br["to_bus"]], br["susceptance"]
        L[i, i] += b
        L[j, j] += b
        L[i, j] -= b
        L[j, i] -= b
        A[k, i], A[k, j] = b, -b
    # the per-unit base cancels between angles and flows
    return A @ np.linalg.pinv(L)


def network_flows(doc, injections):
    return flow_matrix(doc) @ np.asarray(injections, float)


def brute_force_opf(doc, step=1.0):
    """Cheapest feasible dispatch on a ``step`` MW grid; None if the grid
    holds no feasible point."""
    idx = {b["id"]: i for i, b in enumerate(doc["buses"])}
    gens = doc["generators"]
    demand = np.zeros(len(idx))
    for ld in doc["loads"]:
        demand[idx[ld["bus_id"]]] += doc["profile"]["load"][ld["id"]][0]
    total = demand.sum()
    limits = np.array([br["flow_limit"] for br in doc["branches"]])
    M = flow_matrix(doc)
    ranges = [np.arange(g["g_min"], g["g_max"] + 1e-9, step) for g in gens[:-1]]
    best = None
    for head in itertools.product(*ranges):
        last = total - sum(head)
        if not gens[-1]["g_min"] - 1e-9 <= last <= gens[-1]["g_max"] + 1e-9:
            continue
        g = np.array(list(head) + [last])
        inj = -demand.copy()
        for k, gen in enumerate(gens):
            inj[idx[gen["bus_id"]]] += g[k]
        flows = M @ inj
        if np.any((limits > 0) & (np.abs(flows) > limits + 1e-6)):
            continue
        cost = float(sum(gen["c_prod"] * v for gen, v in zip(gens, g)))
        if best is None or cost < best[0]:
            best = (cost, g)
    return best


def merit_order_cost(doc):
    gens = sorted(doc["generators"], key=lambda g: (g["c_prod"], g["id"]))
    need = sum(v[0] for v in doc["profile"]["load"].values()) - sum(g["g_min"] for g in gens)
    cost = sum(g["c_prod"] * g["g_min"] for g in gens)
    for g in gens:
        take = min(need, g["g_max"] - g["g_min"])
        cost += take * g["c_prod"]
        need -= take
    return cost


def cheapest_acceptance(requirement, offers):
    """Minimum cost to procure ``min(requirement, offered)`` MWh from integer
    offers ``[(quantity, price), ...]`` accepting any integer amount of each
    offer; exhaustive dynamic programme over acceptance levels."""
    target = min(requirement, sum(q for q, _ in offers))
    best = [0.0] + [math.inf] * target
    for q, p in offers:
        new = best[:]
        for r in range(target + 1):
            if best[r] == math.inf:
                continue
            for a in range(1, q + 1):
                if r + a > target:
                    break
                c = best[r] + a * p
                if c < new[r + a]:
                    new[r + a] = c
        best = new
    return target, best[target]


def subsets_cost(requirement, offers):
    """Cheapest way to fill ``requirement`` enumerating all subsets of fully
    accepted offers plus one partially accepted offer."""
    best = math.inf
    n = len(offers)
    for mask in range(1 << n):
        full = [offers[i] for i in range(n) if mask >> i & 1]
        got = sum(q for q, _ in full)
        if got > requirement:
            continue
        cost = sum(q * p for q, p in full)
        rest = requirement - got
        if rest == 0:
            best = min(best, cost)
            continue
        for i in range(n):
            if not mask >> i & 1 and offers[i][0] >= rest:
                best = min(best, cost + rest * offers[i][1])
    return best
