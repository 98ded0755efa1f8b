"""Gate set of the particle-creation circuit model.

Four gate kinds exist: single-qubit unitaries, two-qubit unitaries, the
2-in/4-out particle-creation isometry, and exponentially suppressed
n-qubit unitaries constrained by a trace budget. Every kind lifts to a
block unitary on qutrit space: ordinary gates act on the {0,1} block of
their target modes and as identity on any basis state carrying omega
there; creation gates act as the isometry on the |t u Ω Ω⟩ subspace and
are completed to a full 81x81 unitary by Gram-Schmidt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import BadDimension, BisectionFailure, NotIsometry, NotUnitary
from .state import OMEGA

UNITARITY_TOL = 1e-10

# Default coupling constant of electromagnetism, sqrt(4*pi*alpha) with
# alpha ~ 1/137.036 (natural units).
DEFAULT_COUPLING = 0.302822

_SQ2 = 1.0 / math.sqrt(2.0)

BUILTIN_GATES = {
    "I": np.eye(2, dtype=complex),
    "identity": np.eye(2, dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, (1 + 1j) * _SQ2]], dtype=complex),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def is_isometry(v: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2:
        return False
    return bool(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) <= tol)


@dataclass(frozen=True)
class CreationIsometry:
    """16x4 isometry: columns indexed by 2-qubit inputs |tu⟩, rows by
    4-qubit outputs |pqrs⟩ (big-endian bit order)."""

    v: np.ndarray

    def __eq__(self, other):
        return isinstance(other, CreationIsometry) and np.array_equal(self.v, other.v)

    def __hash__(self):
        return hash(self.v.tobytes())


@dataclass(frozen=True)
class SingleGate:
    u: np.ndarray
    mode: int
    label: Optional[str] = field(default=None, compare=False)

    @property
    def modes(self) -> Tuple[int, ...]:
        return (self.mode,)

    def __eq__(self, other):
        return (
            isinstance(other, SingleGate)
            and self.mode == other.mode
            and np.array_equal(self.u, other.u)
        )


@dataclass(frozen=True)
class TwoGate:
    u: np.ndarray
    modes: Tuple[int, int]
    label: Optional[str] = field(default=None, compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, TwoGate)
            and self.modes == other.modes
            and np.array_equal(self.u, other.u)
        )


@dataclass(frozen=True)
class CreateGate:
    v: CreationIsometry
    sources: Tuple[int, int]
    targets: Tuple[int, int]
    label: Optional[str] = field(default=None, compare=False)

    @property
    def modes(self) -> Tuple[int, ...]:
        return self.sources + self.targets

    def __eq__(self, other):
        return (
            isinstance(other, CreateGate)
            and self.sources == other.sources
            and self.targets == other.targets
            and self.v == other.v
        )


@dataclass(frozen=True)
class SuppressedGate:
    u: np.ndarray
    modes: Tuple[int, ...]
    budget_n: int
    label: Optional[str] = field(default=None, compare=False)

    def __eq__(self, other):
        return (
            isinstance(other, SuppressedGate)
            and self.modes == other.modes
            and self.budget_n == other.budget_n
            and np.array_equal(self.u, other.u)
        )


GateSpec = object  # SingleGate | TwoGate | CreateGate | SuppressedGate


def make_single(u: np.ndarray, mode: int = 0, label: Optional[str] = None) -> SingleGate:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2) or not is_unitary(u):
        raise NotUnitary("single-qubit gate must be a 2x2 unitary")
    return SingleGate(u=u, mode=mode, label=label)


def make_two(u: np.ndarray, modes: Tuple[int, int] = (0, 1), label: Optional[str] = None) -> TwoGate:
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4) or not is_unitary(u):
        raise NotUnitary("two-qubit gate must be a 4x4 unitary")
    if modes[0] == modes[1]:
        raise ValueError("two-qubit gate modes must be distinct")
    return TwoGate(u=u, modes=(modes[0], modes[1]), label=label)


def make_creation(v: np.ndarray) -> CreationIsometry:
    v = np.asarray(v, dtype=complex)
    if v.shape != (16, 4) or not is_isometry(v):
        raise NotIsometry("creation gate must be a 16x4 isometry")
    return CreationIsometry(v=v)


def default_creation() -> CreationIsometry:
    """Basis-broadcast isometry |tu⟩ → |tu⟩⊗|tu⟩ (|11⟩ → |1111⟩ etc.)."""
    v = np.zeros((16, 4), dtype=complex)
    for t in range(2):
        for u in range(2):
            col = 2 * t + u
            row = 8 * t + 4 * u + 2 * t + u
            v[row, col] = 1.0
    return CreationIsometry(v=v)


def make_suppressed(
    u: np.ndarray,
    modes: Sequence[int],
    budget_n: int,
    label: Optional[str] = None,
) -> SuppressedGate:
    u = np.asarray(u, dtype=complex)
    n = len(modes)
    if u.shape != (2**n, 2**n) or not is_unitary(u):
        raise NotUnitary(f"suppressed gate on {n} modes must be a {2**n}x{2**n} unitary")
    if len(set(modes)) != n:
        raise ValueError("suppressed gate modes must be distinct")
    deficit = trace_deficit(u)
    if deficit > 2.0 ** (-budget_n) + 1e-12:
        raise NotUnitary(
            f"trace deficit {deficit:.3e} exceeds budget 2^-{budget_n}"
        )
    return SuppressedGate(u=u, modes=tuple(modes), budget_n=budget_n, label=label)


def trace_deficit(u: np.ndarray) -> float:
    """|Tr(I - U)|: scalar distance of a unitary from the identity."""
    u = np.asarray(u, dtype=complex)
    return float(abs(u.shape[0] - np.trace(u)))


def _deficit_at(eigvals: np.ndarray, eps: float) -> float:
    # Tr(I - exp(-i eps H)) in the eigenbasis of H.
    return float(abs(np.sum(1.0 - np.exp(-1j * eps * eigvals))))


def generate_suppressed(
    n: int,
    coupling: float = DEFAULT_COUPLING,
    vertices: int = 1,
    seed: int = 0,
    modes: Optional[Sequence[int]] = None,
) -> SuppressedGate:
    """Seeded n-qubit unitary whose trace deficit hits min(2^-n, coupling^vertices).

    Builds U = exp(-i*eps*H) from a seeded random Hermitian H of unit
    spectral norm and tunes eps by bisection until the deficit matches the
    budget target. Deterministic for fixed arguments; a degenerate H
    (non-monotone objective) triggers one retry from seed+1.
    """
    if not (1 <= n <= 6):
        raise BadDimension(f"suppressed gate qubit count must be in 1..6, got {n}")
    if not (0.0 < coupling < 1.0):
        raise ValueError("coupling must lie in (0, 1)")
    if vertices < 1:
        raise ValueError("vertex count must be >= 1")
    target = min(2.0 ** (-n), coupling**vertices)

    last_error = None
    for attempt_seed in (seed, seed + 1):
        try:
            u = _suppressed_unitary(n, target, attempt_seed)
            break
        except BisectionFailure as exc:  # degenerate draw: retry once
            last_error = exc
    else:
        raise last_error
    return SuppressedGate(
        u=u, modes=tuple(modes) if modes is not None else tuple(range(n)), budget_n=n
    )


def _suppressed_unitary(n: int, target: float, seed: int) -> np.ndarray:
    dim = 2**n
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (a + a.conj().T) / 2.0
    spectral = np.linalg.norm(h, ord=2)
    if spectral == 0.0:
        raise BisectionFailure("zero Hermitian draw")
    h = h / spectral
    eigvals, eigvecs = np.linalg.eigh(h)

    # Bracket by doubling; the objective must be nondecreasing on the way up.
    lo, hi = 0.0, 1.0 / 1024.0
    f_lo = 0.0
    while _deficit_at(eigvals, hi) < target:
        f_hi = _deficit_at(eigvals, hi)
        if f_hi + 1e-15 < f_lo:
            raise BisectionFailure("trace-deficit objective not monotone on bracket")
        lo, f_lo = hi, f_hi
        hi *= 2.0
        if hi > math.pi:
            raise BisectionFailure("could not bracket the deficit target")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _deficit_at(eigvals, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-18:
            break
    eps = hi
    if abs(_deficit_at(eigvals, eps) - target) > 1e-12:
        raise BisectionFailure("bisection did not converge to the deficit target")
    phases = np.exp(-1j * eps * eigvals)
    return (eigvecs * phases) @ eigvecs.conj().T


def _qubit_block_indices(n_modes: int) -> np.ndarray:
    """Qutrit basis indices (big-endian, digits 0<1<omega) whose digits are all
    0 or 1, in canonical order; index i corresponds to the i-th n-qubit ket."""
    idx = []
    for k in range(2**n_modes):
        bits = [(k >> (n_modes - 1 - j)) & 1 for j in range(n_modes)]
        idx.append(sum(b * 3 ** (n_modes - 1 - j) for j, b in enumerate(bits)))
    return np.array(idx, dtype=int)


def _lift_block(u: np.ndarray, n_modes: int) -> np.ndarray:
    dim = 3**n_modes
    w = np.eye(dim, dtype=complex)
    block = _qubit_block_indices(n_modes)
    w[np.ix_(block, block)] = u
    return w


def lift_creation(v: CreationIsometry) -> np.ndarray:
    """81x81 unitary over four qutrit modes (source, source, target, target).

    Acts as the isometry on the span of |t u Ω Ω⟩ and is completed on the
    orthogonal complement by Gram-Schmidt over the canonical basis order.
    """
    dim = 81
    # Domain basis index of |t u 2 2⟩ and the image column it maps to.
    domain = {}
    for t in range(2):
        for u in range(2):
            col = np.zeros(dim, dtype=complex)
            for row in range(16):
                p, q, r, s = (row >> 3) & 1, (row >> 2) & 1, (row >> 1) & 1, row & 1
                col[27 * p + 9 * q + 3 * r + s] = v.v[row, 2 * t + u]
            domain[27 * t + 9 * u + 8] = col

    ortho = list(domain.values())
    completion = []
    for k in range(dim):
        if len(completion) == dim - len(domain):
            break
        cand = np.zeros(dim, dtype=complex)
        cand[k] = 1.0
        for b in ortho:
            cand = cand - (b.conj() @ cand) * b
        nrm = np.linalg.norm(cand)
        if nrm > 1e-8:
            cand = cand / nrm
            ortho.append(cand)
            completion.append(cand)
    w = np.empty((dim, dim), dtype=complex)
    it = iter(completion)
    for j in range(dim):
        w[:, j] = domain[j] if j in domain else next(it)
    return w


def lift_to_qutrit(gate) -> np.ndarray:
    """Dense qutrit unitary for a gate, over its target modes in order."""
    if isinstance(gate, SingleGate):
        return _lift_block(gate.u, 1)
    if isinstance(gate, TwoGate):
        return _lift_block(gate.u, 2)
    if isinstance(gate, SuppressedGate):
        return _lift_block(gate.u, len(gate.modes))
    if isinstance(gate, CreateGate):
        return lift_creation(gate.v)
    raise TypeError(f"not a gate: {gate!r}")
