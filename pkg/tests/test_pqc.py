import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qgridrl.errors import (
    BackendUnavailableError,
    InvalidArgumentError,
    InvalidExpectationError,
    InvalidParametersError,
)
from qgridrl.pqc import (
    PQCParameters,
    QuantumCache,
    QuantumFeatureProvider,
    RemoteBackend,
    RescaleRange,
    SampledBackend,
    build_circuit,
    cached_feature,
    call_seed,
    evaluate,
    quantum_feature,
)

import oracles

THETA = [0.3, -1.2, 2.0, 0.7, 0.5, -0.4, 1.1, -2.2]


def test_gate_counts():
    g4 = build_circuit(PQCParameters(np.zeros(8)))
    assert len(g4) == 15
    assert [g.kind for g in g4].count("CNOT") == 3
    g2 = build_circuit(PQCParameters(np.zeros(4), n_qubits=2))
    assert len(g2) == 7


def test_gate_order():
    gates = build_circuit(PQCParameters(THETA))
    assert [g.kind for g in gates[:4]] == ["H"] * 4
    assert gates[4].kind == "RY" and gates[4].angle == THETA[0]
    assert gates[5].kind == "RZ" and gates[5].angle == THETA[4]
    assert [(g.control, g.target) for g in gates[-3:]] == [(0, 1), (1, 2), (2, 3)]


def test_wrong_parameter_count():
    with pytest.raises(InvalidParametersError):
        PQCParameters(np.zeros(7))


def test_zero_angles_give_zero():
    assert evaluate(PQCParameters(np.zeros(8))) == pytest.approx(0.0, abs=1e-12)


def test_frozen_reference_value():
    e = evaluate(PQCParameters(THETA))
    assert e == pytest.approx(-0.6004360643769375, abs=1e-12)
    # Z on all four qubits maps back through the CNOT chain onto Z1 Z3
    assert e == pytest.approx(math.sin(THETA[1]) * math.sin(THETA[3]), abs=1e-12)


def test_oracle_agreement_random_angles():
    rng = np.random.default_rng(0)
    for _ in range(20):
        theta = rng.uniform(-np.pi, np.pi, 8)
        assert evaluate(PQCParameters(theta)) == pytest.approx(oracles.parity_oracle(theta, 4), abs=1e-12)


def test_sampled_backend_is_seeded():
    p = PQCParameters(THETA)
    b = SampledBackend(shots=1024, seed=3)
    assert evaluate(p, b, 11) == evaluate(p, b, 11)
    assert abs(evaluate(p, b, 11) - evaluate(p)) < 0.15


def test_call_seed_depends_on_step():
    assert call_seed(0, 5) == call_seed(0, 5)
    assert call_seed(0, 5) != call_seed(0, 6)
    assert call_seed(1, 5) != call_seed(0, 5)


def test_remote_backend_raises():
    with pytest.raises(BackendUnavailableError):
        evaluate(PQCParameters(THETA), RemoteBackend())


@pytest.mark.parametrize("e,expected", [(-1.0, 0.0), (0.0, 0.5), (1.0, 1.0)])
def test_feature_endpoints(e, expected):
    f = quantum_feature(e)
    assert f.vector.shape == (128,)
    np.testing.assert_allclose(f.vector, expected)


def test_feature_custom_range():
    f = quantum_feature(0.5, RescaleRange(-2.0, 2.0), h2=3)
    np.testing.assert_allclose(f.vector, [1.0, 1.0, 1.0])


def test_feature_rejects_bad_input():
    with pytest.raises(InvalidExpectationError):
        quantum_feature(1.5)
    with pytest.raises(InvalidArgumentError):
        RescaleRange(1.0, 1.0)


@settings(max_examples=100)
@given(st.floats(-1, 1), st.floats(-1, 1))
def test_feature_monotone(a, b):
    va, vb = quantum_feature(a).vector[0], quantum_feature(b).vector[0]
    if a <= b:
        assert va <= vb
    assert 0.0 <= va <= 1.0


def count_calls(procedure, steps, interval=50):
    prov = QuantumFeatureProvider(procedure, refresh_interval=interval)
    for t in range(steps):
        prov.feature(t, PQCParameters(np.full(8, 0.01 * t)))
    return prov.backend_calls


def test_cache_counts():
    assert count_calls("cached", 100) == 1
    assert count_calls("iterative", 100) == 100
    assert count_calls("hybrid", 100, interval=10) == 10
    assert count_calls("hybrid", 100, interval=math.inf) == 1
    assert count_calls("hybrid", 100, interval=1) == 100
    assert count_calls("none", 100) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.integers(1, 60))
def test_hybrid_call_count_formula(steps, interval):
    cache, calls = QuantumCache(refresh_interval=interval), 0
    p = PQCParameters(np.zeros(8))
    for t in range(steps):
        _, cache, called = cached_feature(cache, p, t)
        calls += called
    assert calls == math.ceil(steps / interval)


def test_cached_feature_holds_value_between_refreshes():
    cache = QuantumCache(refresh_interval=3)
    values = []
    for t in range(6):
        feat, cache, called = cached_feature(cache, PQCParameters(np.full(8, 0.2 * t)), t)
        values.append((feat.scalar, called))
    assert [c for _, c in values] == [True, False, False, True, False, False]
    assert values[0][0] == values[1][0] == values[2][0]
    assert values[3][0] != values[0][0]


def test_lazy_params_only_computed_on_refresh():
    hits = []

    def params():
        hits.append(1)
        return PQCParameters(np.zeros(8))

    cache = QuantumCache(refresh_interval=4)
    for t in range(8):
        _, cache, _ = cached_feature(cache, params, t)
    assert len(hits) == 2


def test_stale_on_backend_failure():
    p = PQCParameters(THETA)
    cache = QuantumCache(refresh_interval=2)
    feat, cache, _ = cached_feature(cache, p, 0)
    _, cache, _ = cached_feature(cache, p, 1)
    stale, cache, called = cached_feature(cache, p, 2, backend=RemoteBackend())
    assert stale.stale and not called
    assert stale.scalar == feat.scalar
    with pytest.raises(BackendUnavailableError):
        cached_feature(QuantumCache(), p, 0, backend=RemoteBackend())


def test_procedures_agree_with_frozen_angles():
    p = PQCParameters(THETA)
    seen = set()
    for proc in ("iterative", "cached", "hybrid"):
        prov = QuantumFeatureProvider(proc, refresh_interval=7)
        for t in range(30):
            seen.add(prov.feature(t, p).scalar)
    assert len(seen) == 1


def test_provider_state_round_trip():
    a = QuantumFeatureProvider("hybrid", refresh_interval=5)
    for t in range(7):
        a.feature(t, PQCParameters(np.full(8, 0.1 * t)))
    b = QuantumFeatureProvider("hybrid", refresh_interval=5)
    b.load_state_dict(a.state_dict())
    assert b.peek().scalar == a.peek().scalar
    for t in range(7, 20):
        p = PQCParameters(np.full(8, 0.1 * t))
        assert a.feature(t, p).scalar == b.feature(t, p).scalar
    assert a.backend_calls == b.backend_calls


def test_unknown_procedure():
    with pytest.raises(InvalidArgumentError):
        QuantumFeatureProvider("sometimes")
