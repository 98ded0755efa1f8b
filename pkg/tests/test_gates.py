import math

import numpy as np
import pytest

from helpers import random_isometry_16x4
from qedsim.embedding import embed
from qedsim.engine import Circuit, simulate_fock
from qedsim.errors import BadDimension, NotIsometry, NotUnitary
from qedsim.gates import (
    BUILTIN_GATES,
    CreateGate,
    default_creation,
    generate_suppressed,
    lift_creation,
    lift_to_qutrit,
    make_creation,
    make_single,
    make_suppressed,
    make_two,
    trace_deficit,
)
from qedsim.state import OMEGA, ONE, ZERO

COUPLING = 0.302822


def test_make_single_accepts_hadamard():
    gate = make_single(BUILTIN_GATES["H"], 0)
    assert gate.mode == 0


def test_identity_gate_changes_nothing():
    gate = make_single(np.eye(2), 0)
    circuit = Circuit(1, [gate], [((ZERO,), 1.0)])
    out = simulate_fock(circuit)
    assert out.amplitude((ZERO,)) == pytest.approx(1.0)


def test_make_single_rejects_shear():
    with pytest.raises(NotUnitary):
        make_single(np.array([[1, 1], [0, 1]], dtype=complex), 0)


def test_make_creation_copy_basis():
    v = np.zeros((16, 4), dtype=complex)
    for t in range(2):
        for u in range(2):
            v[8 * t + 4 * u + 2 * t + u, 2 * t + u] = 1.0
    isom = make_creation(v)
    assert np.max(np.abs(isom.v.conj().T @ isom.v - np.eye(4))) == 0


def test_make_creation_identity_columns():
    make_creation(np.eye(16, dtype=complex)[:, :4])


def test_make_creation_rejects_equal_columns():
    v = np.eye(16, dtype=complex)[:, :4]
    v[:, 1] = v[:, 0]
    with pytest.raises(NotIsometry):
        make_creation(v)


def test_default_creation_broadcast_column():
    v = default_creation().v
    col = v[:, 3]  # input |11>
    expected = np.zeros(16)
    expected[15] = 1.0  # output |1111>
    assert np.array_equal(col, expected)


def test_default_creation_on_bell_input():
    # (1/sqrt2)(|00> + |11>) -> (1/sqrt2)(|0000> + |1111>)
    v = default_creation().v
    vec_in = np.zeros(4, dtype=complex)
    vec_in[0] = vec_in[3] = 1 / math.sqrt(2)
    out = v @ vec_in
    expected = np.zeros(16, dtype=complex)
    expected[0] = expected[15] = 1 / math.sqrt(2)
    assert np.allclose(out, expected)


def test_default_creation_is_exact_isometry():
    v = default_creation().v
    assert np.array_equal(v.conj().T @ v, np.eye(4))


def test_trace_deficit_identity():
    assert trace_deficit(np.eye(5)) == 0.0


def test_trace_deficit_diag_plus_minus():
    assert trace_deficit(np.diag([1.0, -1.0])) == pytest.approx(2.0)


def test_trace_deficit_global_phase():
    theta = math.pi / 2
    u = np.exp(1j * theta) * np.eye(2)
    assert trace_deficit(u) == pytest.approx(2 * math.sqrt(2))
    # closed form d * |1 - e^{i theta}|
    assert trace_deficit(u) == pytest.approx(2 * abs(1 - np.exp(1j * theta)))


def test_generate_suppressed_meets_half_budget():
    gate = generate_suppressed(1, coupling=0.9, vertices=1, seed=0)
    assert trace_deficit(gate.u) <= 0.5 + 1e-12
    assert trace_deficit(gate.u) == pytest.approx(0.5, abs=1e-12)


def test_generate_suppressed_coupling_branch():
    gate = generate_suppressed(2, coupling=COUPLING, vertices=6, seed=1)
    target = COUPLING**6
    assert target < 0.25  # the coupling branch binds
    assert trace_deficit(gate.u) == pytest.approx(target, abs=1e-12)


def test_generate_suppressed_deterministic():
    a = generate_suppressed(3, vertices=2, seed=9)
    b = generate_suppressed(3, vertices=2, seed=9)
    assert a.u.tobytes() == b.u.tobytes()


def test_generate_suppressed_bad_dimension():
    with pytest.raises(BadDimension):
        generate_suppressed(7, seed=0)
    with pytest.raises(BadDimension):
        generate_suppressed(0, seed=0)


def test_suppressed_budget_enforced():
    with pytest.raises(NotUnitary):
        make_suppressed(BUILTIN_GATES["X"], [0], budget_n=1)


def test_lift_single_hadamard_block():
    w = lift_to_qutrit(make_single(BUILTIN_GATES["H"], 0))
    h = BUILTIN_GATES["H"]
    assert np.array_equal(w[:2, :2], h)
    assert w[2, 2] == 1.0
    assert np.all(w[2, :2] == 0) and np.all(w[:2, 2] == 0)


def test_lifted_creation_maps_fresh_pair():
    gate = CreateGate(v=default_creation(), sources=(0, 1), targets=(2, 3))
    w = lift_to_qutrit(gate)
    # |1 1 omega omega> sits at index 27+9+6+2 = 44; image should be |1111> = 40
    col = w[:, 27 * 1 + 9 * 1 + 3 * 2 + 2]
    expected = np.zeros(81, dtype=complex)
    expected[27 + 9 + 3 + 1] = 1.0
    assert np.allclose(col, expected)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lifted_creation_unitary(seed):
    if seed == 0:
        v = default_creation()
    else:
        v = make_creation(random_isometry_16x4(np.random.default_rng(seed)))
    w = lift_creation(v)
    assert np.max(np.abs(w.conj().T @ w - np.eye(81))) <= 1e-10


def _enumerate_supported_states(mode_count, pattern):
    """Basis kets matching an occupancy pattern (True = occupied)."""
    configs = [()]
    for occupied in pattern:
        values = (ZERO, ONE) if occupied else (OMEGA,)
        configs = [c + (v,) for c in configs for v in values]
    return configs


@pytest.mark.parametrize(
    "gate,pattern",
    [
        (make_single(BUILTIN_GATES["H"], 1), (True, True, False)),
        (make_two(BUILTIN_GATES["CNOT"], (0, 2)), (True, False, True)),
        (generate_suppressed(2, vertices=2, seed=4, modes=[2, 0]), (True, True, True)),
        (
            CreateGate(v=default_creation(), sources=(0, 1), targets=(2, 3)),
            (True, True, False, False),
        ),
    ],
)
def test_fock_application_commutes_with_lift(gate, pattern):
    """Applying a gate sparsely then embedding equals embedding then applying
    the lifted unitary, for every basis ket in the gate's valid domain."""
    from helpers import full_operator

    m = len(pattern)
    op = full_operator(gate, m)
    for config in _enumerate_supported_states(m, pattern):
        circuit = Circuit(m, [gate], [(config, 1.0)])
        sparse = embed(simulate_fock(circuit)).entries
        init = embed(circuit.initial_state()).entries
        assert np.max(np.abs(sparse - op @ init)) <= 1e-10


@pytest.mark.parametrize("name", sorted(BUILTIN_GATES))
def test_builtin_unitarity_tight(name):
    u = BUILTIN_GATES[name]
    assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= 1e-15
