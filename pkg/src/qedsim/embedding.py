"""Translation between sparse Fock states and dense qutrit vectors.

Each mode becomes one qutrit with digit encoding 0 → 0, 1 → 1, omega → 2,
big-endian: the basis index of a configuration is sum(trit_i * 3^(M-1-i)).
The map is an isometry, so the two simulation backends can be compared
entrywise.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionGuard, EmptyState
from .state import DEFAULT_PRUNE_THRESHOLD, Configuration, SparseState, make_state

MAX_DENSE_MODES = 14


@dataclass
class QutritVector:
    mode_count: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex).reshape(-1)
        if self.entries.shape[0] != 3**self.mode_count:
            raise ValueError("entry count must be 3^mode_count")


def config_index(config: Configuration) -> int:
    idx = 0
    for t in config:
        idx = 3 * idx + t
    return idx


def index_config(idx: int, mode_count: int) -> Configuration:
    trits = []
    for _ in range(mode_count):
        trits.append(idx % 3)
        idx //= 3
    return tuple(reversed(trits))


def embed(state: SparseState) -> QutritVector:
    """Sparse state → dense qutrit vector with identical amplitudes."""
    if state.mode_count > MAX_DENSE_MODES:
        raise DimensionGuard(
            f"dense embedding limited to {MAX_DENSE_MODES} modes, got {state.mode_count}"
        )
    entries = np.zeros(3**state.mode_count, dtype=complex)
    for config, amp in state.terms.items():
        entries[config_index(config)] = amp
    return QutritVector(state.mode_count, entries)


def extract(vec: QutritVector, threshold: float = DEFAULT_PRUNE_THRESHOLD) -> SparseState:
    """Inverse of :func:`embed`, up to pruning at ``threshold``."""
    terms = []
    for idx in np.nonzero(np.abs(vec.entries) >= threshold)[0]:
        terms.append((index_config(int(idx), vec.mode_count), complex(vec.entries[idx])))
    if not terms:
        raise EmptyState("no entry above the extraction threshold")
    return make_state(vec.mode_count, terms, prune_threshold=threshold)


@dataclass
class EquivalenceReport:
    max_abs_diff: float
    phase_aligned_diff: float
    passed: bool
    tol: float
    circuit_hash: str
    mode_count: int

    def to_dict(self) -> dict:
        return {
            "max_abs_diff": self.max_abs_diff,
            "phase_aligned_diff": self.phase_aligned_diff,
            "pass": self.passed,
            "tol": self.tol,
            "circuit_hash": self.circuit_hash,
            "mode_count": self.mode_count,
        }


def check_equivalence(circuit, tol: float = 1e-10) -> EquivalenceReport:
    """Run both backends and report the entrywise amplitude discrepancy.

    The primary figure is the raw difference (both backends use the same
    matrices, so agreement should be exact up to roundoff); the
    phase-aligned difference is a diagnostic only.
    """
    from .dsl import format_circuit
    from .engine import simulate_fock, simulate_qutrit

    fock_vec = embed(simulate_fock(circuit)).entries
    qutrit_vec = simulate_qutrit(circuit)
    diff = float(np.max(np.abs(fock_vec - qutrit_vec)))

    pivot = int(np.argmax(np.abs(qutrit_vec)))
    phase = 1.0 + 0j
    if abs(fock_vec[pivot]) > 0:
        phase = qutrit_vec[pivot] / fock_vec[pivot]
        phase = phase / abs(phase)
    aligned = float(np.max(np.abs(fock_vec * phase - qutrit_vec)))

    digest = hashlib.sha256(format_circuit(circuit).encode()).hexdigest()[:16]
    return EquivalenceReport(
        max_abs_diff=diff,
        phase_aligned_diff=aligned,
        passed=diff <= tol,
        tol=tol,
        circuit_hash=digest,
        mode_count=circuit.mode_count,
    )
