"""Circuit validation and the two simulation backends.

The Fock backend walks a sparse map of configurations and applies gates
term by term; amplitudes on branches where a target mode is empty pass
through unchanged, so gates stay linear across particle-number sectors.
The qutrit backend embeds everything into a dense 3^M vector and applies
the lifted block unitaries, which is what makes the two backends
amplitude-identical by construction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import gates as g
from .errors import (
    CreationCollision,
    CreationOnVacuum,
    DimensionGuard,
    StaticValidation,
)
from .state import (
    OMEGA,
    ONE,
    ZERO,
    Configuration,
    SparseState,
    ket_string,
    make_state,
    occupied_count,
    prune,
)

MAX_DENSE_MODES = 14

InitialTerms = List[Tuple[Configuration, complex]]


def default_initial(mode_count: int) -> InitialTerms:
    """All modes occupied in |0⟩."""
    return [(tuple([ZERO] * mode_count), 1.0 + 0j)]


@dataclass
class Circuit:
    mode_count: int
    gates: List[object] = field(default_factory=list)
    initial: Optional[InitialTerms] = None

    def initial_terms(self) -> InitialTerms:
        return self.initial if self.initial is not None else default_initial(self.mode_count)

    def initial_state(self) -> SparseState:
        return make_state(self.mode_count, self.initial_terms())

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.mode_count == other.mode_count
            and self.gates == other.gates
            and sorted(self.initial_terms(), key=lambda t: t[0])
            == sorted(other.initial_terms(), key=lambda t: t[0])
        )


@dataclass
class RunResult:
    final_state: SparseState
    samples: Dict[Configuration, int]
    seed: int
    backend: str
    shots: int
    wall_time: float


def validate_circuit(circuit: Circuit) -> None:
    """Static checks: mode bounds, distinct indices, creation freshness.

    Creation freshness is conservative: a target mode must be omega in
    every initial configuration and must not appear in any earlier gate.
    """
    m = circuit.mode_count
    if m < 1:
        raise StaticValidation("circuit must declare at least one mode")
    for config, _amp in circuit.initial_terms():
        if len(config) != m:
            raise StaticValidation(
                f"initial ket {ket_string(tuple(config))!r} has wrong length"
            )
    touched: set = set()
    for pos, gate in enumerate(circuit.gates):
        modes = gate.modes
        if len(set(modes)) != len(modes):
            raise StaticValidation(f"gate {pos}: repeated mode index in {modes}")
        for mode in modes:
            if not (0 <= mode < m):
                raise StaticValidation(f"gate {pos}: mode {mode} out of range (modes={m})")
        if isinstance(gate, g.CreateGate):
            for mode in gate.targets:
                if mode in touched:
                    raise StaticValidation(
                        f"gate {pos}: creation target {mode} was already used by an earlier gate"
                    )
                for config, _amp in circuit.initial_terms():
                    if config[mode] != OMEGA:
                        raise StaticValidation(
                            f"gate {pos}: creation target {mode} is occupied in the initial state"
                        )
        touched.update(modes)


def _apply_block_fock(state: SparseState, u: np.ndarray, modes: Sequence[int]) -> SparseState:
    """Apply a qubit-block unitary on the given modes; omega branches pass through."""
    n = len(modes)
    new_terms: dict = {}
    for config, amp in state.terms.items():
        trits = [config[m] for m in modes]
        if any(t == OMEGA for t in trits):
            new_terms[config] = new_terms.get(config, 0j) + amp
            continue
        col = 0
        for t in trits:
            col = 2 * col + t
        base = list(config)
        for row in range(2**n):
            coeff = u[row, col]
            if coeff == 0:
                continue
            for j, m in enumerate(modes):
                base[m] = (row >> (n - 1 - j)) & 1
            out = tuple(base)
            new_terms[out] = new_terms.get(out, 0j) + coeff * amp
    return prune(SparseState(state.mode_count, new_terms, state.prune_threshold))


def _apply_create_fock(state: SparseState, gate: g.CreateGate) -> SparseState:
    i, j = gate.sources
    k, l = gate.targets
    v = gate.v.v
    new_terms: dict = {}
    for config, amp in state.terms.items():
        if config[i] == OMEGA or config[j] == OMEGA:
            raise CreationOnVacuum(
                f"creation source mode is empty in branch {ket_string(config)!r}"
            )
        if config[k] != OMEGA or config[l] != OMEGA:
            raise CreationCollision(
                f"creation target mode is occupied in branch {ket_string(config)!r}"
            )
        col = 2 * config[i] + config[j]
        base = list(config)
        for row in range(16):
            coeff = v[row, col]
            if coeff == 0:
                continue
            base[i] = (row >> 3) & 1
            base[j] = (row >> 2) & 1
            base[k] = (row >> 1) & 1
            base[l] = row & 1
            out = tuple(base)
            new_terms[out] = new_terms.get(out, 0j) + coeff * amp
    return prune(SparseState(state.mode_count, new_terms, state.prune_threshold))


def simulate_fock(circuit: Circuit, strict: bool = False) -> SparseState:
    """Run the circuit on the sparse variable-occupancy backend.

    With ``strict=True``, a non-create gate whose entire support is omega
    at its target modes raises instead of acting as identity (debug aid).
    """
    validate_circuit(circuit)
    state = circuit.initial_state()
    for gate in circuit.gates:
        if isinstance(gate, g.CreateGate):
            state = _apply_create_fock(state, gate)
            continue
        if isinstance(gate, g.SingleGate):
            u, modes = gate.u, gate.modes
        elif isinstance(gate, g.TwoGate):
            u, modes = gate.u, gate.modes
        elif isinstance(gate, g.SuppressedGate):
            u, modes = gate.u, gate.modes
        else:
            raise TypeError(f"unknown gate {gate!r}")
        if strict and all(
            any(config[m] == OMEGA for m in modes) for config in state.terms
        ):
            raise StaticValidation(
                f"strict mode: gate on modes {modes} acts on an all-omega support"
            )
        state = _apply_block_fock(state, u, modes)
    if abs(state.norm() - 1.0) > 1e-9:
        raise RuntimeError("norm drifted beyond 1e-9 during simulation")
    return state


def _apply_dense(vec: np.ndarray, w: np.ndarray, modes: Sequence[int], m: int) -> np.ndarray:
    n = len(modes)
    tensor = vec.reshape([3] * m)
    tensor = np.moveaxis(tensor, modes, range(n))
    shaped = tensor.reshape(3**n, -1)
    shaped = w @ shaped
    tensor = shaped.reshape([3] * m)
    tensor = np.moveaxis(tensor, range(n), modes)
    return tensor.reshape(-1)


def simulate_qutrit(circuit: Circuit) -> np.ndarray:
    """Run the circuit on the dense fixed-width qutrit backend (3^M vector)."""
    validate_circuit(circuit)
    m = circuit.mode_count
    if m > MAX_DENSE_MODES:
        raise DimensionGuard(
            f"dense qutrit backend limited to {MAX_DENSE_MODES} modes, got {m}"
        )
    from .embedding import embed  # local import to avoid a cycle

    vec = embed(circuit.initial_state()).entries.copy()
    for gate in circuit.gates:
        w = g.lift_to_qutrit(gate)
        vec = _apply_dense(vec, w, list(gate.modes), m)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-9:
        raise RuntimeError("norm drifted beyond 1e-9 during simulation")
    return vec


def sample(state: SparseState, shots: int, seed: int = 0) -> Dict[Configuration, int]:
    """Draw i.i.d. computational-basis outcomes; deterministic under seed."""
    if shots < 0:
        raise ValueError("shots must be >= 0")
    if shots == 0:
        return {}
    configs = [c for c, _ in state.sorted_terms()]
    probs = np.array([abs(a) ** 2 for _, a in state.sorted_terms()])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(configs), size=shots, p=probs)
    counts = np.bincount(draws, minlength=len(configs))
    return {configs[i]: int(counts[i]) for i in range(len(configs)) if counts[i] > 0}


def particle_growth_bound(circuit: Circuit) -> int:
    """Static upper bound on occupied modes in any branch: initially
    occupied modes plus two per create gate."""
    validate_circuit(circuit)
    occupied = max(occupied_count(tuple(c)) for c, _ in circuit.initial_terms())
    creates = sum(1 for gate in circuit.gates if isinstance(gate, g.CreateGate))
    return occupied + 2 * creates


def run(
    circuit: Circuit,
    backend: str = "fock",
    shots: int = 0,
    seed: int = 0,
) -> RunResult:
    """Simulate on the chosen backend and sample the final state."""
    from .embedding import extract

    start = time.perf_counter()
    if backend == "fock":
        final = simulate_fock(circuit)
    elif backend == "qutrit":
        vec = simulate_qutrit(circuit)
        from .embedding import QutritVector

        final = extract(QutritVector(circuit.mode_count, vec))
    else:
        raise ValueError(f"unknown backend {backend!r}")
    samples = sample(final, shots, seed)
    wall = time.perf_counter() - start
    return RunResult(
        final_state=final,
        samples=samples,
        seed=seed,
        backend=backend,
        shots=shots,
        wall_time=wall,
    )
