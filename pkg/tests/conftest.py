import numpy as np
import pytest

from balancemkt.grid_model import SynthesisSpec, load_scenario, synthesize_scenario


def scenario_doc(n_instants=4, load=100.0, g_max=200.0, c_prod=10.0, flow_limit=150.0, res=None):
    """Two buses, one generator on B1, one load on B2, optional wind on B2."""
    doc = {
        "meta": {"name": "two-bus", "base_mva": 100.0},
        "zones": [{"id": "Z1"}],
        "buses": [{"id": "B1", "zone_id": "Z1", "is_slack": True}, {"id": "B2", "zone_id": "Z1"}],
        "branches": [{"id": "L12", "from_bus": "B1", "to_bus": "B2", "susceptance": 10.0,
                      "flow_limit": flow_limit}],
        "generators": [{"id": "G1", "bus_id": "B1", "technology": "coal", "g_min": 0.0, "g_max": g_max,
                        "g_ramp": 50.0, "c_prod": c_prod}],
        "res_generators": [],
        "loads": [{"id": "D1", "bus_id": "B2"}],
        "profile": {"load": {"D1": [load] * n_instants}, "res": {}},
    }
    if res is not None:
        doc["res_generators"].append({"id": "W1", "bus_id": "B2", "kind": "wind", "capacity": 2 * res})
        doc["profile"]["res"]["W1"] = [res] * n_instants
    return doc


@pytest.fixture
def two_bus():
    return load_scenario(scenario_doc())


@pytest.fixture(scope="session")
def small_synth():
    """Fast synthetic case: 8 buses, 2 zones, 24 hourly instants."""
    return synthesize_scenario(SynthesisSpec(n_buses=8, n_zones=2, seed=3, n_instants=24))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
