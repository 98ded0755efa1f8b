"""Shared test machinery: random circuits and an independent dense oracle."""

import numpy as np

from qedsim.embedding import embed
from qedsim.engine import Circuit
from qedsim.gates import (
    BUILTIN_GATES,
    CreateGate,
    default_creation,
    generate_suppressed,
    lift_to_qutrit,
    make_creation,
    make_single,
    make_two,
)
from qedsim.state import OMEGA, ZERO


def haar_unitary(dim, rng):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_isometry_16x4(rng):
    a = rng.standard_normal((16, 4)) + 1j * rng.standard_normal((16, 4))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_circuit(seed, max_modes=5, max_gates=6):
    """Seeded circuit mixing built-ins, Haar two-qubit unitaries, creation
    gates (default and random isometries), and suppressed gates (n <= 3)."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, max_modes + 1))
    occupied_init = int(rng.integers(1, m + 1))
    config = tuple([ZERO] * occupied_init + [OMEGA] * (m - occupied_init))
    occupied = set(range(occupied_init))
    touched = set()
    gates = []
    for _ in range(int(rng.integers(1, max_gates + 1))):
        fresh = [x for x in range(occupied_init, m) if x not in touched]
        kinds = ["builtin", "haar2", "suppressed"]
        if len(occupied) >= 2 and len(fresh) >= 2:
            kinds.append("create")
        kind = kinds[rng.integers(len(kinds))]
        if kind == "builtin":
            name = ["H", "X", "Z", "S", "T", "CNOT", "CZ"][rng.integers(7)]
            u = BUILTIN_GATES[name]
            if u.shape == (2, 2):
                gate = make_single(u, int(rng.integers(m)), label=name)
            else:
                i, j = rng.choice(m, size=2, replace=False)
                gate = make_two(u, (int(i), int(j)), label=name)
        elif kind == "haar2":
            i, j = rng.choice(m, size=2, replace=False)
            gate = make_two(haar_unitary(4, rng), (int(i), int(j)))
        elif kind == "suppressed":
            n = int(rng.integers(1, min(3, m) + 1))
            modes = [int(x) for x in rng.choice(m, size=n, replace=False)]
            gate = generate_suppressed(
                n, vertices=int(rng.integers(1, 5)), seed=int(rng.integers(1 << 30)),
                modes=modes,
            )
        else:
            sources = [int(x) for x in rng.choice(sorted(occupied), size=2, replace=False)]
            targets = [int(x) for x in rng.choice(fresh, size=2, replace=False)]
            if rng.random() < 0.5:
                v = default_creation()
            else:
                v = make_creation(random_isometry_16x4(rng))
            gate = CreateGate(v=v, sources=tuple(sources), targets=tuple(targets))
            occupied.update(targets)
        touched.update(gate.modes)
        gates.append(gate)
    return Circuit(m, gates, [(config, 1.0 + 0j)])


def full_operator(gate, mode_count):
    """Expand a gate's lifted matrix to the full 3^M space by explicit
    index arithmetic (independent of the backends' application paths)."""
    w = lift_to_qutrit(gate)
    modes = list(gate.modes)
    n = len(modes)
    dim = 3**mode_count
    op = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        digits = []
        rest = col
        for _ in range(mode_count):
            digits.append(rest % 3)
            rest //= 3
        digits.reverse()
        sub_in = 0
        for mode in modes:
            sub_in = 3 * sub_in + digits[mode]
        for sub_out in range(3**n):
            coeff = w[sub_out, sub_in]
            if coeff == 0:
                continue
            out_digits = list(digits)
            rest = sub_out
            for mode in reversed(modes):
                out_digits[mode] = rest % 3
                rest //= 3
            row = 0
            for d in out_digits:
                row = 3 * row + d
            op[row, col] += coeff
    return op


def dense_reference(circuit):
    """Matrix-product evaluation: multiply full lifted operators and apply
    them to the embedded initial vector."""
    vec = embed(circuit.initial_state()).entries.copy()
    for gate in circuit.gates:
        vec = full_operator(gate, circuit.mode_count) @ vec
    return vec
