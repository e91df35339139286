"""Monte-Carlo simulator of electricity balancing markets.

Forecast errors of load and renewables are sampled around a reference day,
turned into zonal imbalances on a DC grid model and procured from
conventional generators that learn their bid markups with a modified
Roth-Erev rule.
"""
from .dispatch import (BalancingRequirement, DispatchResult, InfeasibleDispatchError, build_susceptance,
                       compute_imbalance, solve_dc_power_flow, solve_reference_dispatch)
from .engine import ExperimentConfig, ExperimentResults, compare_wind_models, run_experiment
from .fluctuations import FluctuationSpec, PerturbedState, perturb, sample_truncated_normal, sample_weibull
from .grid_model import (GridScenario, ScenarioValidationError, SynthesisSpec, load_scenario, scale_res_share,
                         synthesize_scenario)
from .market import AgentState, Bid, LearningParams, MarketSessionResult, clear_session, roth_erev_update
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "AgentState", "BalancingRequirement", "Bid", "DispatchResult", "ExperimentConfig", "ExperimentResults",
    "FluctuationSpec", "GridScenario", "InfeasibleDispatchError", "LearningParams", "MarketSessionResult",
    "PerturbedState", "RngStream", "ScenarioValidationError", "SynthesisSpec", "build_susceptance",
    "clear_session", "compare_wind_models", "compute_imbalance", "load_scenario", "perturb", "roth_erev_update",
    "run_experiment", "sample_truncated_normal", "sample_weibull", "scale_res_share", "solve_dc_power_flow",
    "solve_reference_dispatch", "synthesize_scenario",
]
