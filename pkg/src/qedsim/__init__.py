"""qedsim: simulator for quantum circuits whose gates can create qubits.

Two backends — a sparse variable-occupancy state walker and a dense
fixed-width qutrit simulator — plus an equivalence checker, a generator
for trace-budgeted suppressed multi-qubit gates, a line-oriented circuit
DSL, an HTTP service, and a CLI.
"""

from .embedding import QutritVector, check_equivalence, embed, extract
from .engine import Circuit, RunResult, particle_growth_bound, run, sample, simulate_fock, simulate_qutrit
from .dsl import format_circuit, parse_circuit, write_result
from .gates import (
    CreateGate,
    CreationIsometry,
    SingleGate,
    SuppressedGate,
    TwoGate,
    default_creation,
    generate_suppressed,
    lift_to_qutrit,
    make_creation,
    make_single,
    make_suppressed,
    make_two,
    trace_deficit,
)
from .state import SparseState, config_from_ket, inner_product, ket_string, make_state, prune

__version__ = "0.1.0"
