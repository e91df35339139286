"""Acceptance criteria on the fixed synthetic scenario (20 buses, 3 zones,
hourly stride, 500 learning / 200 evaluation iterations, seeds 1-3).

Each test prints one ``PASS``/``FAIL`` line; run with ``pytest -v -m slow
tests/test_acceptance.py`` (or the whole suite) to see them.
"""
import math

import numpy as np
import pytest
from scipy import stats

from balancemkt.dispatch import InfeasibleDispatchError, solve_reference_dispatch
from balancemkt.engine import ExperimentConfig, compare_wind_models, run_experiment
from balancemkt.fluctuations import FluctuationSpec, truncated_normal, weibull
from balancemkt.grid_model import SynthesisSpec, load_scenario, synthesize_scenario
from balancemkt.market import UP, AgentState, Bid, LearningParams, clear_session, roth_erev_update, run_learning
from balancemkt.report import write_results
from balancemkt.rng import RngStream
from balancemkt.stats import summarize, skewness, tail_prob
from oracles import brute_force_opf, cheapest_acceptance, merit_order_cost, random_instance
from test_market import SMALL_FLEET, _stationary, rolling_variance_drop

pytestmark = pytest.mark.slow

SEEDS = (1, 2, 3)
SHARES = (0.24, 0.30, 0.40, 0.50, 0.60)
LEARNING = LearningParams(learning_iterations=500, evaluation_iterations=200)


def verdict(capsys, criterion, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def scenario():
    return synthesize_scenario(SynthesisSpec(n_buses=20, n_zones=3, seed=0))


def config(seed, shares=(0.24, 0.60), **kw):
    return ExperimentConfig(seed=seed, p_percent=shares, learning=LEARNING, time_stride=4, **kw)


@pytest.fixture(scope="module")
def trend_runs(scenario):
    return {seed: run_experiment(config(seed), scenario) for seed in SEEDS}


@pytest.fixture(scope="module")
def wind_runs(scenario):
    return {seed: compare_wind_models(config(seed, SHARES, run_market=False), scenario) for seed in SEEDS}


# -- 1 ------------------------------------------------------------------------

def test_criterion_1_sampler_fidelity(capsys):
    pvals = []
    for k, (mean, sd, lo, hi) in enumerate([(100.0, 10.0, 50.0, 150.0), (100.0, 10.0, 100.0, 200.0),
                                            (0.0, 1.0, 4.0, 5.0), (30.0, 3.0, 0.0, 60.0)]):
        x = truncated_normal(mean, sd, lo, hi, RngStream(11, ("tn", k)), 10_000)
        a, b = (lo - mean) / sd, (hi - mean) / sd
        pvals.append(stats.kstest(x, stats.truncnorm(a, b, loc=mean, scale=sd).cdf).pvalue)
    means = []
    for k, p_w in enumerate((10.0, 80.0, 250.0)):
        x = weibull(p_w, 2.0, RngStream(12, ("wb", k)), 10_000)
        lam = 2 * p_w / math.sqrt(math.pi)
        pvals.append(stats.kstest(x, lambda v: 1 - np.exp(-(np.asarray(v) / lam) ** 2)).pvalue)
        means.append(abs(x.mean() - p_w) / p_w)
    ok = min(pvals) > 0.01 and max(means) < 0.02
    verdict(capsys, 1, ok, f"min KS p-value {min(pvals):.3f} (> 0.01), max Weibull mean error {max(means):.4f} (< 0.02)")


# -- 2 ------------------------------------------------------------------------

def test_criterion_2_dcopf_oracle(capsys):
    rng = np.random.default_rng(77)
    worst, done, merit_err = 0.0, 0, 0.0
    while done < 50:
        doc = random_instance(rng)
        oracle = brute_force_opf(doc)
        try:
            r = solve_reference_dispatch(load_scenario(doc), 0)
        except InfeasibleDispatchError:
            assert oracle is None
            continue
        if oracle is None:
            continue
        done += 1
        max_cost = max(g["c_prod"] for g in doc["generators"])
        worst = max(worst, abs(r.total_cost - oracle[0]) / max_cost)
        for br in doc["branches"]:
            br["flow_limit"] = 0.0
        merit_err = max(merit_err, abs(solve_reference_dispatch(load_scenario(doc), 0).total_cost
                                       - merit_order_cost(doc)))
    ok = worst <= 1.0 and merit_err < 1e-6
    verdict(capsys, 2, ok, f"50 instances, worst gap {worst:.3f} MW x max cost (<= 1), merit-order error {merit_err:.1e}")


# -- 3 ------------------------------------------------------------------------

def test_criterion_3_clearing_oracle(capsys):
    rng = np.random.default_rng(78)
    worst_cost = worst_vol = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 11))
        offers = [(int(rng.integers(0, 31)), int(rng.integers(1, 201))) for _ in range(n)]
        req = int(rng.integers(0, 201))
        res = clear_session(float(req), [Bid(f"g{i}", UP, float(q), float(p), 0, 1.0)
                                         for i, (q, p) in enumerate(offers)], UP)
        target, best = cheapest_acceptance(req, offers)
        worst_cost = max(worst_cost, abs(res.cost - best))
        worst_vol = max(worst_vol, abs(res.cleared - min(req, sum(q for q, _ in offers))))
    ok = worst_cost < 1e-6 and worst_vol < 1e-9
    verdict(capsys, 3, ok, f"100 sessions, max cost error {worst_cost:.1e}, max volume error {worst_vol:.1e}")


# -- 4 ------------------------------------------------------------------------

def test_criterion_4_roth_erev(capsys):
    params = LearningParams(0.1, 0.2)
    rej = roth_erev_update(AgentState.initial("G"), 3, False, 0.0, params, UP).propensities_up
    acc = roth_erev_update(AgentState.initial("G"), 3, True, 5.0, params, UP).propensities_up
    hand = max(np.max(np.abs(rej - (0.9 + 0.2 / 49))), abs(acc[3] - 5.9),
               np.max(np.abs(np.delete(acc, 3) - (0.9 + 0.2 / 49))))
    hist = []
    agents = run_learning(_stationary(3000), [AgentState.initial(g.id) for g in SMALL_FLEET], SMALL_FLEET,
                          LearningParams(), RngStream(8), history=hist)
    valid = all(np.all(a.propensities(d) > 0) and abs(a.probabilities(d).sum() - 1) < 1e-12
                for a in agents for d in ("up", "down"))
    hist = []
    run_learning(_stationary(3000, 1.5), [AgentState.initial(g.id) for g in SMALL_FLEET], SMALL_FLEET,
                 LearningParams(), RngStream(0, ("stationary",)), history=hist)
    first, last = rolling_variance_drop(hist)
    ok = hand <= 1e-12 and valid and last < first
    verdict(capsys, 4, ok, f"hand-formula error {hand:.1e}, probabilities valid {valid}, "
                           f"accepted-markup variance {first:.3f} -> {last:.3f}")


# -- 5 ------------------------------------------------------------------------

def test_criterion_5_zero_fluctuations(scenario, capsys):
    res = run_experiment(config(1, SHARES, fluctuations=FluctuationSpec(0.0, 0.0, 0.0)), scenario)
    total = 0.0
    for sh in res.shares.values():
        total += float(np.abs(sh.up_volume_gwh).sum() + np.abs(sh.down_volume_gwh).sum())
        total += float(np.abs(sh.up_cost_eur).sum() + np.abs(sh.down_cost_eur).sum())
        total += sum(abs(v) for v in sh.tech_profit_mean.values())
        total += sum(float(np.abs(v).sum()) for v in sh.tech_daily_profit.values())
    verdict(capsys, 5, total == 0.0, f"sum of |volume|, |cost|, |profit| over all shares = {total}")


# -- 6 ------------------------------------------------------------------------

def test_criterion_6a_volume_skewness(trend_runs, capsys):
    pairs = {s: (skewness(r[0.24].up_volume_gwh), skewness(r[0.60].up_volume_gwh)) for s, r in trend_runs.items()}
    ok = all(b > a for a, b in pairs.values())
    detail = ", ".join(f"seed {s}: {a:.3f} -> {b:.3f}" for s, (a, b) in pairs.items())
    verdict(capsys, "6a", ok, f"up-volume skewness 24% -> 60%: {detail}")


def test_criterion_6b_cost_tail(trend_runs, capsys):
    pairs = {}
    for s, r in trend_runs.items():
        thr = np.percentile(r[0.24].up_cost_eur, 95)
        pairs[s] = (tail_prob(r[0.24].up_cost_eur, thr), tail_prob(r[0.60].up_cost_eur, thr))
    ok = all(b > a for a, b in pairs.values())
    detail = ", ".join(f"seed {s}: {a:.3f} -> {b:.3f}" for s, (a, b) in pairs.items())
    verdict(capsys, "6b", ok, f"P(cost > 95th pct of 24% run): {detail}")


def test_criterion_6c_fast_generator_profit(trend_runs, capsys):
    fast = lambda sh: sh.tech_profit_mean["turbogas"] + sh.tech_profit_mean["oil"]  # noqa: E731
    pairs = {s: (fast(r[0.24]), fast(r[0.60])) for s, r in trend_runs.items()}
    ok = all(b > a for a, b in pairs.values())
    detail = ", ".join(f"seed {s}: {a:.1f} -> {b:.1f}" for s, (a, b) in pairs.items())
    verdict(capsys, "6c", ok, f"turbogas+oil mean profit per session [EUR] 24% -> 60%: {detail}")


# -- 7 ------------------------------------------------------------------------

def test_criterion_7_weibull_comparison(wind_runs, capsys):
    lines, ok = [], True
    for s, cmp in wind_runs.items():
        for p in SHARES:
            g, w = cmp.gaussian[p].up_volume_gwh, cmp.weibull[p].up_volume_gwh
            diff = float(w.mean() - g.mean())
            if p >= 0.6:
                good = diff >= 0
                lines.append(f"seed {s} {p:.0%}: diff {diff:+.3f} GWh (>= 0) {'ok' if good else 'no'}")
            else:
                iqr = summarize(g).iqr
                good = abs(diff) <= iqr
                lines.append(f"seed {s} {p:.0%}: |diff| {abs(diff):.3f} vs IQR {iqr:.3f} {'ok' if good else 'no'}")
            ok &= good
    verdict(capsys, 7, ok, "Weibull minus Gaussian mean daily up-volume; " + "; ".join(lines))


# -- 8 ------------------------------------------------------------------------

def test_criterion_8_determinism(scenario, tmp_path, capsys):
    one = run_experiment(config(2, SHARES, threads=1), scenario)
    two = run_experiment(config(2, SHARES, threads=2), scenario)
    write_results(one, tmp_path / "one")
    write_results(two, tmp_path / "two")
    names = sorted(f.name for f in (tmp_path / "one").glob("*.csv"))
    same = [n for n in names if (tmp_path / "one" / n).read_bytes() == (tmp_path / "two" / n).read_bytes()]
    verdict(capsys, 8, same == names and len(names) == 5, f"{len(same)}/{len(names)} CSV files byte-identical "
                                                          f"(threads 1 vs 2)")
