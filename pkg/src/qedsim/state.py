"""Configurations and sparse variable-particle-number states.

A mode carries one of three classical labels: 0 (horizontally polarized
photon), 1 (vertically polarized photon), or omega (no particle present).
A configuration assigns a label to every mode of the circuit; a sparse
state maps configurations to complex amplitudes, so branches with
different particle numbers coexist in one wavefunction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Tuple

from .errors import EmptyState, LengthMismatch

ZERO = 0
ONE = 1
OMEGA = 2

TRIT_CHARS = "01W"

# One basis ket: a tuple of trits, one per mode.
Configuration = Tuple[int, ...]

DEFAULT_PRUNE_THRESHOLD = 1e-12


def config_from_ket(ket: str) -> Configuration:
    """Parse a ket string like ``"01W"`` (``Ω`` accepted as an alias of ``W``)."""
    trits = []
    for ch in ket:
        if ch == "0":
            trits.append(ZERO)
        elif ch == "1":
            trits.append(ONE)
        elif ch in ("W", "Ω"):
            trits.append(OMEGA)
        else:
            raise ValueError(f"invalid ket character {ch!r}")
    return tuple(trits)


def ket_string(config: Configuration) -> str:
    return "".join(TRIT_CHARS[t] for t in config)


def occupied_count(config: Configuration) -> int:
    """Number of modes holding a particle (non-omega trits)."""
    return sum(1 for t in config if t != OMEGA)


@dataclass(frozen=True)
class SparseState:
    """Normalized sparse wavefunction over fixed-length configurations.

    Immutable after construction; every operation returns a new state.
    Invariants (checked by the constructor path in :func:`make_state`):
    all keys have length ``mode_count``, no stored amplitude is smaller
    in magnitude than ``prune_threshold``, and the global norm is 1.
    """

    mode_count: int
    terms: dict = field(default_factory=dict)
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.terms.values()))

    def amplitude(self, config: Configuration) -> complex:
        return self.terms.get(tuple(config), 0j)

    def sorted_terms(self):
        """Terms in canonical configuration order (0 < 1 < omega, lexicographic)."""
        return sorted(self.terms.items())

    def __iter__(self):
        return iter(self.sorted_terms())


def make_state(
    mode_count: int,
    initial: Iterable[Tuple[Configuration, complex]],
    prune_threshold: float = DEFAULT_PRUNE_THRESHOLD,
) -> SparseState:
    """Build a normalized, pruned state from (configuration, amplitude) pairs.

    Duplicate configurations accumulate. Raises LengthMismatch if any key
    has the wrong length and EmptyState if nothing survives pruning.
    """
    terms: dict = {}
    for config, amp in initial:
        config = tuple(config)
        if len(config) != mode_count:
            raise LengthMismatch(
                f"configuration {ket_string(config)!r} has length {len(config)}, "
                f"expected {mode_count}"
            )
        if any(t not in (ZERO, ONE, OMEGA) for t in config):
            raise ValueError(f"invalid trit in configuration {config!r}")
        terms[config] = terms.get(config, 0j) + complex(amp)
    return _normalize(mode_count, terms, prune_threshold)


def _normalize(mode_count: int, terms: dict, prune_threshold: float) -> SparseState:
    kept = {c: a for c, a in terms.items() if abs(a) >= prune_threshold}
    norm = math.sqrt(sum(abs(a) ** 2 for a in kept.values()))
    if not kept or norm < prune_threshold:
        raise EmptyState("all amplitudes below prune threshold")
    kept = {c: a / norm for c, a in kept.items()}
    for a in kept.values():
        if not (cmath.isfinite(a)):
            raise ValueError("non-finite amplitude after normalization")
    return SparseState(mode_count=mode_count, terms=kept, prune_threshold=prune_threshold)


def prune(state: SparseState) -> SparseState:
    """Drop terms below the state's threshold and renormalize. Idempotent."""
    return _normalize(state.mode_count, state.terms, state.prune_threshold)


def inner_product(a: SparseState, b: SparseState) -> complex:
    """⟨a|b⟩ over the shared configuration basis; conjugate-linear in ``a``."""
    if a.mode_count != b.mode_count:
        raise LengthMismatch(
            f"mode counts differ: {a.mode_count} vs {b.mode_count}"
        )
    small, large = (a.terms, b.terms) if len(a.terms) <= len(b.terms) else (b.terms, a.terms)
    total = 0j
    for config in small:
        if config in large:
            total += a.terms[config].conjugate() * b.terms[config]
    return total
