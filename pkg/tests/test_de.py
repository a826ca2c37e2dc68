import csv
import io
import math

import numpy as np
import pytest

from srlmp.de import (DeConfig, UnsupportedConfiguration, cn_de_step, cn_de_step_enumerated, cn_de_step_g1,
                      cn_de_step_g2, converges, count_terms, de_run, extrinsic_channel_g1, extrinsic_channel_g2,
                      mc_cn_de_step, mc_vn_de_step, optimize_delta, reliability_params, schedule_for, threshold,
                      trajectory_csv, vn_de_step, vn_de_step_g1, vn_de_step_g2)
from srlmp.ensembles import DegreeDistribution

from oracles import cn_oracle, vn_oracle

DD35 = DegreeDistribution.regular(3, 5)
DD34 = DegreeDistribution.regular(3, 4)


def random_state(rng, K):
    return rng.dirichlet(np.ones(K) * 0.7)


# -- check-node side ------------------------------------------------------------------

def test_cn_golden():
    s = cn_de_step_g1([0, 0.95, 0.05], DD35, 2)
    assert s == pytest.approx([0, 0.82805, 0.17195], abs=5e-6)


def test_cn_fixed_points():
    assert cn_de_step_g1([0, 1, 0], DD35, 4) == pytest.approx([0, 1, 0])
    assert cn_de_step_g1([1, 0, 0], DD35, 4)[0] == pytest.approx(1.0)
    assert cn_de_step_g2([0, 1, 0, 0, 0], DD35, 4) == pytest.approx([0, 1, 0, 0, 0])


@pytest.mark.parametrize("q,gamma", [(2, 1), (3, 1), (4, 1), (8, 1), (3, 2), (4, 2), (5, 2), (7, 2), (8, 2)])
def test_cn_matches_sumset_oracle(q, gamma):
    rng = np.random.default_rng(q * 10 + gamma)
    K = 3 if gamma == 1 else 5
    for dd in (DD35, DegreeDistribution({3: 1.0}, {4: 0.5, 6: 0.5})):
        for _ in range(3):
            x = random_state(rng, K)
            assert cn_de_step(x, dd, q, gamma) == pytest.approx(cn_oracle(x, dd, q, gamma), abs=1e-12)


def test_cn_enumerated_agrees_with_closed_forms_in_characteristic_two():
    rng = np.random.default_rng(1)
    for q in (4, 8, 16):
        x = random_state(rng, 5)
        assert cn_de_step_enumerated(x, DD35, q, 2) == pytest.approx(cn_de_step_g2(x, DD35, q), abs=1e-12)
        x = random_state(rng, 3)
        assert cn_de_step_enumerated(x, DD35, q, 1) == pytest.approx(cn_de_step_g1(x, DD35, q), abs=1e-12)


@pytest.mark.parametrize("q,gamma,x", [(2, 1, [0, 0.95, 0.05]), (4, 2, [0, 0.95, 0.05, 0, 0]),
                                       (4, 2, [0.05, 0.6, 0.15, 0.15, 0.05])])
def test_cn_matches_sampling(q, gamma, x):
    rng = np.random.default_rng(5)
    exact = cn_de_step(np.array(x), DD35, q, gamma)
    est, _ = mc_cn_de_step(np.array(x), DD35, q, gamma, 10 ** 6, rng)
    sigma = np.sqrt(exact * (1 - exact) / 10 ** 6)
    assert np.all(np.abs(est - exact) <= 4 * sigma + 1e-12)


# -- extrinsic channel and reliabilities ------------------------------------------------

def test_extrinsic_g1():
    P, alpha = extrinsic_channel_g1([0.1, 0.6, 0.3], 4)
    row = dict(zip(alpha, P[0]))
    assert row[()] == pytest.approx(0.1)
    assert row[(0,)] == pytest.approx(0.6)
    assert [row[(e,)] for e in (1, 2, 3)] == pytest.approx([0.1] * 3)
    assert np.allclose(P.sum(axis=1), 1)
    P, _ = extrinsic_channel_g1([1, 0, 0], 4)
    assert np.all(P[:, 0] == 1)


def test_extrinsic_g2():
    P, alpha = extrinsic_channel_g2([0.1, 0.5, 0.15, 0.15, 0.1], 4)
    row = dict(zip(alpha, P[0]))
    assert row[()] == pytest.approx(0.1)
    assert row[(0,)] == pytest.approx(0.5)
    assert row[(2,)] == pytest.approx(0.05)
    assert row[(0, 3)] == pytest.approx(0.05)
    assert row[(1, 2)] == pytest.approx(0.1 / 3)
    assert np.allclose(P.sum(axis=1), 1)
    P, alpha = extrinsic_channel_g2([0, 1, 0, 0, 0], 5)
    assert all(P[u, alpha.index((u,))] == 1 for u in range(5))
    with pytest.raises(UnsupportedConfiguration):
        extrinsic_channel_g2([0, 1, 0, 0, 0], 2)


def test_reliability_params():
    d_ch, d1, d2 = reliability_params([0, 0.8, 0.2], 0.05, 2, 1)
    assert d_ch == pytest.approx(math.log(19))
    assert d2 is None
    assert reliability_params([0.4, 0.15, 0.45], 0.1, 4, 1)[1] == pytest.approx(0.0, abs=1e-12)
    capped = reliability_params([0, 1, 0], 0.1, 4, 1)[1]
    assert math.isfinite(capped) and capped == pytest.approx(-math.log(1e-300))
    _, _, d2 = reliability_params([0.1, 0.5, 0.15, 0.15, 0.1], 0.1, 4, 2)
    assert d2 == pytest.approx(math.log(0.05) - math.log(0.1 / 3))


# -- variable-node side ----------------------------------------------------------------

def test_vn_golden():
    x = vn_de_step_g1([0, 0.82805, 0.17195], 0.05, DD35, 2, 1.0)
    assert x == pytest.approx([0.06237, 0.92192, 0.01572], abs=5e-5)


def test_vn_golden_brute_force():
    s = cn_de_step_g1([0, 0.95, 0.05], DD35, 2)
    assert vn_de_step_g1(s, 0.05, DD35, 2, 1.0) == pytest.approx(vn_oracle(s, 0.05, DD35, 2, 1, 1.0), abs=1e-14)


@pytest.mark.parametrize("q,gamma,dd", [(2, 1, DD35), (3, 1, DD35), (4, 1, DD34), (5, 1, DD35),
                                        (3, 2, DD35), (4, 2, DD35), (5, 2, DD34),
                                        (4, 2, DegreeDistribution({2: 0.3, 4: 0.7}, {6: 1.0}))])
def test_vn_matches_brute_force(q, gamma, dd):
    rng = np.random.default_rng(q + 7 * gamma)
    K = 3 if gamma == 1 else 5
    for delta in (0.0, 0.7, 1.25, 2.5):
        s = random_state(rng, K)
        eps = float(rng.uniform(0.01, 0.3))
        exact = vn_de_step(s, eps, dd, q, gamma, delta)
        assert exact == pytest.approx(vn_oracle(s, eps, dd, q, gamma, delta), abs=1e-12)


def test_vn_brute_force_with_exact_ties():
    # s chosen so that d1 equals d_ch: Λ ties between channel and messages
    q, eps = 4, 0.1
    s1 = 0.6
    d_ch = math.log(0.9 * 3 / 0.1)
    s2 = 3 * s1 / math.exp(d_ch)
    s = np.array([1 - s1 - s2, s1, s2])
    assert reliability_params(s, eps, q, 1)[1] == pytest.approx(d_ch)
    for delta in (0.0, d_ch):
        assert vn_de_step(s, eps, DD35, q, 1, delta) == pytest.approx(
            vn_oracle(s, eps, DD35, q, 1, delta), abs=1e-12)


def test_vn_fixed_points():
    assert vn_de_step_g1([0, 1, 0], 0.1, DD35, 4, 1.0) == pytest.approx([0, 1, 0])
    assert vn_de_step_g2([0, 1, 0, 0, 0], 0.1, DD35, 4, 1.25) == pytest.approx([0, 1, 0, 0, 0])
    assert vn_de_step_g1([0.1, 0.6, 0.3], 0.1, DD35, 4, np.inf) == pytest.approx([1, 0, 0])
    assert vn_de_step_g2([0.1, 0.5, 0.2, 0.1, 0.1], 0.1, DD35, 4, np.inf) == pytest.approx([1, 0, 0, 0, 0])


def test_vn_matches_sampling_q4_gamma2():
    q, eps = 4, 0.1
    dd = DegreeDistribution({3: 1.0}, {5: 1.0})
    x0 = np.array([0, 1 - eps, eps, 0, 0])
    s = cn_de_step(x0, dd, q, 2)
    exact = vn_de_step_g2(s, eps, dd, q, 1.25)
    N = 2 * 10 ** 6
    est, _ = mc_vn_de_step(s, eps, dd, q, 2, 1.25, N, np.random.default_rng(3))
    sigma = np.sqrt(exact * (1 - exact) / N)
    assert np.all(np.abs(est - exact) <= 4 * sigma + 1e-12)


def test_mc_reproducible():
    s = np.array([0.05, 0.8, 0.15])
    a, _ = mc_vn_de_step(s, 0.1, DD35, 4, 1, 1.0, 20_000, np.random.default_rng(9))
    b, _ = mc_vn_de_step(s, 0.1, DD35, 4, 1, 1.0, 20_000, np.random.default_rng(9))
    assert np.array_equal(a, b)


def test_mc_variance_scaling():
    s = np.array([0.05, 0.8, 0.15])
    rng = np.random.default_rng(12)
    sizes = np.array([1000, 4000, 16000])
    var = []
    for N in sizes:
        est = np.array([mc_vn_de_step(s, 0.1, DD35, 2, 1, 1.0, int(N), rng)[0][1] for _ in range(300)])
        var.append(est.var(ddof=1))
    slope = np.polyfit(np.log(sizes), np.log(var), 1)[0]
    assert abs(slope + 1) < 0.1


def test_mass_conservation_random_states():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        gamma = int(rng.integers(1, 3))
        q = int(rng.choice([3, 4, 8] if gamma == 2 else [2, 3, 4, 8, 16]))
        K = 3 if gamma == 1 else 5
        dd = DD35 if rng.random() < 0.5 else DD34
        x = random_state(rng, K)
        s = cn_de_step(x, dd, q, gamma)
        xn = vn_de_step(s, float(rng.uniform(0.001, 0.4)), dd, q, gamma, float(rng.uniform(0, 3)))
        for v in (s, xn):
            assert abs(v.sum() - 1) < 1e-10
            assert np.all((v >= 0) & (v <= 1))


# -- iteration, thresholds, export -------------------------------------------------------

def test_de_run_examples():
    assert de_run(DeConfig(q=2, dd=DD35, eps=0.05)).converged
    assert not de_run(DeConfig(q=2, dd=DD35, eps=0.13)).converged
    r = de_run(DeConfig(q=2, dd=DD35, eps=1e-12))
    assert r.converged and r.iterations <= 3


def test_per_iteration_delta():
    cfg = DeConfig(q=4, dd=DD35, eps=0.1, delta=[0.5, 1.0, 1.5])
    assert [cfg.delta_at(i) for i in (1, 2, 3, 9)] == [0.5, 1.0, 1.5, 1.5]
    r = de_run(cfg)
    assert r.schedule.delta[:3] == [0.5, 1.0, 1.5]


def test_threshold_bracket():
    res = 1e-3
    thr = threshold(4, DD35, 1, 1.0, resolution=res)
    assert converges(4, DD35, 1, thr - res, 1.0)
    assert not converges(4, DD35, 1, thr + res, 1.0)
    with pytest.raises(ValueError):
        threshold(4, DD35, 1, 1.0, resolution=1e-6)


def test_optimize_delta_argmax():
    grid = [0.5, 1.0, 1.5]
    best, thr = optimize_delta(4, DD35, 1, grid=grid, resolution=1e-3, refine=None)
    values = {d: threshold(4, DD35, 1, d, resolution=1e-3) for d in grid}
    assert thr == max(values.values())
    assert best == min(d for d, v in values.items() if v == thr)
    assert thr >= values[1.0]
    best_r, thr_r = optimize_delta(4, DD35, 1, grid=grid, resolution=1e-3, refine=0.1)
    assert thr_r >= thr


def test_unsupported():
    with pytest.raises(UnsupportedConfiguration):
        cn_de_step_g2([0, 1, 0, 0, 0], DD35, 2)
    with pytest.raises(UnsupportedConfiguration):
        DeConfig(q=2, dd=DD35, eps=0.1, gamma=2)
    with pytest.raises(UnsupportedConfiguration):
        DeConfig(q=4, dd=DD35, eps=0.1, gamma=3)
    with pytest.raises(UnsupportedConfiguration):
        vn_de_step([0, 1, 0, 0, 0], 0.1, DD35, 4, 2, 1.0, budget=10)


def test_term_counts():
    # q=2, d=3, list size 1: 3 messages x 3 messages for each channel class
    assert count_terms(2, 1, 2, False) == 9
    assert count_terms(64, 2, 2, True) == count_terms(1024, 2, 2, True)


def test_config_validation():
    with pytest.raises(ValueError):
        DeConfig(q=4, dd=DD35, eps=0.1, convergence_tol=0.0)
    with pytest.raises(ValueError):
        DeConfig(q=4, dd=DD35, eps=1.5)
    with pytest.raises(ValueError):
        DeConfig(q=4, dd=DD35, eps=0.1, mode="fast")


def test_monte_carlo_mode_runs():
    r = de_run(DeConfig(q=4, dd=DD35, eps=0.05, mode="monte_carlo", samples=50_000, seed=1))
    assert r.converged


def test_trajectory_csv():
    r = de_run(DeConfig(q=4, dd=DD35, eps=0.1, gamma=2, delta=1.25))
    rows = list(csv.reader(io.StringIO(trajectory_csv(r, 2))))
    assert rows[0] == ["iteration", "x_I0", "x_I1", "x_I2", "x_I3", "x_I4",
                       "s_I0", "s_I1", "s_I2", "s_I3", "s_I4", "D1", "D2"]
    assert len(rows) == r.iterations + 2
    assert float(rows[-1][2]) > 1 - 1e-6
    assert rows[1][6] == ""


def test_schedule_export():
    sched = schedule_for(4, DD35, 2, 0.1, 1.25)
    assert sched.gamma == 2
    assert sched.d_ch == pytest.approx(math.log(0.9 * 3 / 0.1))
    assert len(sched.d1) == len(sched.d2) == len(sched.delta)
    assert sched.meta["converged"]
    stalled = schedule_for(4, DD35, 1, 0.2, 1.0)
    assert not stalled.meta["converged"]
