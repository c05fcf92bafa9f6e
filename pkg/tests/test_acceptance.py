"""One check per release criterion; each prints a PASS/FAIL line in the summary."""
import math
import time
from itertools import combinations, product

import numpy as np
import pytest

from qgridrl.agents import DoNothingAgent, PolicyAgent, RandomAgent
from qgridrl.gcn import normalized_adjacency
from qgridrl.grid.env import EnvConfig, GridEnv
from qgridrl.grid.powerflow import bus_balance, solve_dc_power_flow
from qgridrl.grid.spec import load_grid_spec
from qgridrl.opponent import AttackState, OpponentConfig, select_targets
from qgridrl.pqc import PQCParameters, QuantumFeatureProvider, SampledBackend, evaluate, quantum_feature
from qgridrl.ppo import PolicyNetwork, PPOConfig, QuantumConfig, RolloutBatch, clipped_surrogate, ppo_loss, train
from qgridrl.quantum import exact_distribution, parity_expectation, run_circuit, sample_distribution
from qgridrl.pqc import build_circuit
from qgridrl.screening import enumerate_contingencies, screen

import oracles
from grids import triangle, two_bus


def test_oracle_equivalence(acceptance):
    rng = np.random.default_rng(2024)
    thetas = rng.uniform(-np.pi, np.pi, size=(100, 8))
    t0 = time.perf_counter()
    ours = [evaluate(PQCParameters(t)) for t in thetas]
    elapsed = time.perf_counter() - t0
    ref = [oracles.parity_oracle(t, 4) for t in thetas]
    err = float(np.max(np.abs(np.subtract(ours, ref))))
    ok = err <= 1e-9 and elapsed < 1.0
    acceptance("oracle equivalence", ok, f"max err {err:.2e}, {elapsed:.3f} s for 100 circuits")
    assert ok


def test_sampling_consistency(acceptance):
    rng = np.random.default_rng(7)
    hits = 0
    for trial in range(100):
        state = run_circuit(build_circuit(PQCParameters(rng.uniform(-np.pi, np.pi, 8))), 4)
        exact = parity_expectation(exact_distribution(state))
        sampled = parity_expectation(sample_distribution(state, 1024, seed=trial))
        hits += abs(sampled - exact) <= 3 * math.sqrt((1 - exact**2) / 1024) + 1e-12
    acceptance("sampling consistency", hits >= 99, f"{hits}/100 within 3 sigma")
    assert hits >= 99


def test_zero_parameter_circuit(acceptance):
    e = evaluate(PQCParameters(np.zeros(8)))
    acceptance("zero-parameter expectation", abs(e) <= 1e-12, f"E = {e:.3e}")
    assert abs(e) <= 1e-12


def feature_stream(procedure, interval, steps=1000):
    prov = QuantumFeatureProvider(procedure, interval, SampledBackend(1024, seed=3), seed=3)
    stream = [prov.feature(t, lambda t=t: PQCParameters(np.sin(np.arange(8) + 0.01 * t))).vector
              for t in range(steps)]
    return np.array(stream), prov.backend_calls


def test_procedure_equivalence(acceptance):
    it, n_it = feature_stream("iterative", 1)
    h1, n_h1 = feature_stream("hybrid", 1)
    ca, n_ca = feature_stream("cached", 1)
    hinf, n_hinf = feature_stream("hybrid", math.inf)
    _, n_h50 = feature_stream("hybrid", 50)
    same = np.array_equal(it, h1) and np.array_equal(ca, hinf)
    counts = (n_it, n_h1, n_ca, n_hinf, n_h50)
    ok = same and counts == (1000, 1000, 1, 1, 20)
    acceptance("procedure equivalence", ok,
               f"streams identical: {same}; calls iterative/hybrid1/cached/hybridinf/hybrid50 = {counts}")
    assert ok


def test_power_flow_oracle(acceptance):
    errs = []
    pf = solve_dc_power_flow(two_bus(), np.ones(1, bool))
    errs += [pf.flows[0] / 100 - 0.5, pf.angles[1] + 0.05]
    pf = solve_dc_power_flow(triangle(), np.ones(3, bool))
    errs += list(pf.flows / 100 - [0.557142857142857, -0.042857142857143, 0.942857142857143])
    errs += list(pf.angles - [0.0, -19.5 / 350, -16.5 / 350])
    pf = solve_dc_power_flow(triangle(), np.array([True, True, False]))
    errs += list(pf.flows / 100 - [1.5, 0.9, 0.0]) + list(pf.angles - [0.0, -0.15, -0.33])
    fixture_err = float(np.max(np.abs(errs)))

    spec = load_grid_spec()
    env = GridEnv(spec, EnvConfig(max_steps=100), seed=11)
    rng = np.random.default_rng(11)
    balance, steps = 0.0, 0
    # uniform random actions end episodes early; keep resetting until 100 steps are done
    while steps < 100:
        env.reset()
        while not env.done and steps < 100:
            env.step(int(rng.integers(env.n_actions)))
            balance = max(balance, float(np.max(np.abs(bus_balance(spec, env.state.pf)))) / spec.base_mva)
            steps += 1
    ok = fixture_err <= 1e-8 and balance <= 1e-8
    acceptance("power-flow oracle", ok,
               f"fixture err {fixture_err:.1e} pu, worst balance {balance:.1e} pu over {steps} steps")
    assert ok


def test_contingency_enumeration(acceptance):
    counts = tuple(len(enumerate_contingencies(20, k)) for k in (2, 3, 4))
    spec = load_grid_spec()
    cases = enumerate_contingencies(20, 2)
    cfg = EnvConfig(load_scale=1.2)
    seq = screen(cases, RandomAgent(), spec, cfg, seed=0)
    par = screen(cases, RandomAgent(), spec, cfg, seed=0, parallel=2)
    ok = counts == (190, 1140, 4845) and seq == par
    acceptance("contingency enumeration", ok, f"counts {counts}, parallel identical: {seq == par}")
    assert ok


def brute_force(rho, k):
    best = max(combinations(range(len(rho)), k), key=lambda s: (sum(rho[i] for i in s), [-i for i in s]))
    return list(best)


def test_opponent_optimality(acceptance):
    grids = [((0.0, 1.0), 10), ((0.0, 0.5, 1.5), 7)]
    checked = mismatches = 0
    for values, max_len in grids:
        for n in range(1, max_len + 1):
            for rho in product(values, repeat=n):
                for k in (1, 2, 3):
                    if k > n:
                        continue
                    got = select_targets(rho, [True] * n, OpponentConfig(per_attack=k), AttackState(k))
                    want = brute_force(rho, k)
                    checked += 1
                    if sum(rho[i] for i in got) != sum(rho[i] for i in want) or got != want:
                        mismatches += 1
    acceptance("opponent optimality", mismatches == 0, f"{checked} cases, {mismatches} mismatches")
    assert mismatches == 0


def test_gradient_correctness(acceptance):
    rng = np.random.default_rng(5)
    net = PolicyNetwork.init(6, 9, seed=5)
    net.policy_w *= 50
    n, v = 5, 6
    a = normalized_adjacency(v, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    batch = RolloutBatch(
        rng.normal(size=(n, v, 6)), np.stack([a] * n),
        np.stack([quantum_feature(e).vector for e in rng.uniform(-1, 1, n)]),
        rng.integers(9, size=n), np.log(np.full(n, 1 / 9)) + rng.uniform(-0.1, 0.1, n),
        rng.normal(size=n), rng.normal(size=n), np.zeros(n))
    batch.advantages, batch.returns = rng.normal(size=n), rng.normal(size=n)
    cfg = PPOConfig(entropy_coef=0.05)
    _, grads, _ = ppo_loss(batch, net, cfg)
    eps, worst, checked = 1e-6, 0.0, 0
    for name, arr in net.params().items():
        if name == "angle_proj":
            continue
        for _ in range(8):
            idx = tuple(rng.integers(s) for s in arr.shape)
            old = arr[idx]
            arr[idx] = old + eps
            up = ppo_loss(batch, net, cfg)[0]
            arr[idx] = old - eps
            down = ppo_loss(batch, net, cfg)[0]
            arr[idx] = old
            fd = (up - down) / (2 * eps)
            g = grads[name][idx]
            if abs(fd) > 1e-9 or abs(g) > 1e-9:
                worst = max(worst, abs(g - fd) / max(abs(fd), abs(g)))
                checked += 1
    ok = worst <= 1e-4
    acceptance("gradient correctness", ok, f"max relative error {worst:.1e} over {checked} coordinates")
    assert ok


def test_ppo_clip_values(acceptance):
    a_hat = 0.37
    got = (float(clipped_surrogate(1.5, 1.0, 0.2)), float(clipped_surrogate(0.5, -1.0, 0.2)),
           float(clipped_surrogate(1.0, a_hat, 0.2)))
    ok = math.isclose(got[0], 1.2, abs_tol=1e-15) and math.isclose(got[1], -0.8, abs_tol=1e-15) \
        and got[2] == a_hat
    acceptance("PPO clip values", ok, f"{got}")
    assert ok


@pytest.mark.slow
def test_directional_learning(acceptance):
    spec = load_grid_spec()
    env_cfg = EnvConfig(load_scale=1.2)
    opp = OpponentConfig(budget=3, interval=10, per_attack=1)
    seed = 0
    t0 = time.perf_counter()
    net, _ = train(lambda s: GridEnv(spec, env_cfg, s), opp, PPOConfig(), QuantumConfig(),
                   total_steps=50_000, seed=seed)
    cases = enumerate_contingencies(spec.n_lines, 2)
    means = {}
    for agent in (PolicyAgent(net, QuantumConfig()), DoNothingAgent(), RandomAgent()):
        results = screen(cases, agent, spec, env_cfg, opp, seed)
        means[agent.name] = float(np.mean([r.steps_survived for r in results]))
    minutes = (time.perf_counter() - t0) / 60
    q, dn, rnd = means["quantum"], means["donothing"], means["random"]
    ok = q >= 1.2 * dn and q >= 1.2 * rnd and minutes < 30
    acceptance("directional learning", ok,
               f"hybrid {q:.2f} vs do-nothing {dn:.2f} (x{q / dn:.3f}) and random {rnd:.2f}; "
               f"{minutes:.1f} min")
    assert ok
