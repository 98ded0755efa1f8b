"""Line-oriented circuit DSL, plus result and matrix serialization.

A circuit file looks like:

    # Fig-style creation circuit
    modes 4
    init 00WW
    apply H 0
    create default from 0 1 into 2 3

Keywords are case-sensitive; '#' starts a comment; 'W' is the ASCII
spelling of the empty-mode symbol (the Unicode form is accepted on
input). Every diagnostic carries a 1-based line and column.
"""

from __future__ import annotations

import json
import re
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import gates as g
from .engine import Circuit, RunResult, validate_circuit
from .errors import (
    NotIsometry,
    NotUnitary,
    ParseError,
    StaticValidation,
)
from .state import Configuration, config_from_ket, ket_string

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INT_RE = re.compile(r"^\d+$")
_FLOAT = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^({_FLOAT})(?:([+-]{_FLOAT})i)?$")
_KET_RE = re.compile(r"^[01WΩ]+$")


def _tokens(line: str) -> List[Tuple[str, int]]:
    """(token, 1-based column) pairs, comments stripped."""
    if "#" in line:
        line = line[: line.index("#")]
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _parse_complex(text: str) -> Optional[complex]:
    m = _COMPLEX_RE.match(text)
    if not m:
        return None
    re_part = float(m.group(1))
    im_part = float(m.group(2)) if m.group(2) else 0.0
    return complex(re_part, im_part)


def _matrix_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ValueError("matrix must be a non-empty array of rows")
    rows = []
    width = None
    for row in data:
        if not isinstance(row, list) or not row:
            raise ValueError("matrix row must be a non-empty array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValueError("ragged matrix rows")
        entries = []
        for cell in row:
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) for x in cell)
            ):
                raise ValueError("matrix entry must be an [re, im] pair")
            entries.append(complex(cell[0], cell[1]))
        rows.append(entries)
    return np.array(rows, dtype=complex)


def matrix_to_json(u: np.ndarray) -> list:
    """Row-major nested array of [re, im] pairs."""
    u = np.asarray(u, dtype=complex)
    return [[[float(c.real), float(c.imag)] for c in row] for row in u]


def matrix_from_json(data) -> np.ndarray:
    return _matrix_from_json(data)


class _LineParser:
    def __init__(self):
        self.mode_count: Optional[int] = None
        self.initial = None
        self.gates: List[object] = []
        self.defgates: Dict[str, np.ndarray] = {}
        self.seen_gate_line = False

    def _err(self, kind, lineno, col, msg):
        raise ParseError(kind, lineno, col, msg)

    def _expect_int(self, tok, col, lineno, what):
        if not _INT_RE.match(tok):
            self._err("syntax", lineno, col, f"expected {what}, got {tok!r}")
        return int(tok)

    def _mode_index(self, tok, col, lineno):
        value = self._expect_int(tok, col, lineno, "a mode index")
        if value >= self.mode_count:
            self._err(
                "validation",
                lineno,
                col,
                f"mode {value} out of range (modes={self.mode_count})",
            )
        return value

    def feed(self, lineno: int, raw: str):
        toks = _tokens(raw)
        if not toks:
            return
        word, col = toks[0]
        if self.mode_count is None:
            if word != "modes":
                self._err("syntax", lineno, col, "expected 'modes' header")
            if len(toks) != 2:
                self._err("syntax", lineno, col, "usage: modes INT")
            count = self._expect_int(toks[1][0], toks[1][1], lineno, "a mode count")
            if count < 1:
                self._err("validation", lineno, toks[1][1], "mode count must be >= 1")
            self.mode_count = count
            return
        if word == "modes":
            self._err("validation", lineno, col, "duplicate 'modes' header")
        elif word == "init":
            self._parse_init(lineno, raw, toks)
        elif word == "defgate":
            self._parse_defgate(lineno, raw, toks)
        elif word == "apply":
            self._parse_apply(lineno, toks)
        elif word == "create":
            self._parse_create(lineno, toks)
        elif word == "suppressed":
            self._parse_suppressed(lineno, toks)
        else:
            self._err("syntax", lineno, col, f"unknown statement {word!r}")

    def _check_ket(self, ket, col, lineno) -> Configuration:
        if not _KET_RE.match(ket):
            self._err("syntax", lineno, col, f"invalid ket string {ket!r}")
        config = config_from_ket(ket)
        if len(config) != self.mode_count:
            self._err(
                "validation",
                lineno,
                col,
                f"ket length {len(config)} does not match modes {self.mode_count}",
            )
        return config

    def _parse_init(self, lineno, raw, toks):
        if self.seen_gate_line:
            self._err("validation", lineno, toks[0][1], "init must precede gates")
        if self.initial is not None:
            self._err("validation", lineno, toks[0][1], "duplicate init")
        body = toks[1:]
        if not body:
            self._err("syntax", lineno, toks[0][1], "init needs a ket or terms")
        if len(body) == 1 and "*" not in body[0][0]:
            config = self._check_ket(body[0][0], body[0][1], lineno)
            self.initial = [(config, 1.0 + 0j)]
            return
        # term ("+" term)*, each term COMPLEX "*" KET
        terms = []
        expect_term = True
        for tok, col in body:
            if expect_term:
                if "*" not in tok:
                    self._err("syntax", lineno, col, f"expected COMPLEX*KET, got {tok!r}")
                amp_text, _, ket = tok.partition("*")
                amp = _parse_complex(amp_text)
                if amp is None:
                    self._err("syntax", lineno, col, f"bad complex literal {amp_text!r}")
                config = self._check_ket(ket, col + len(amp_text) + 1, lineno)
                terms.append((config, amp))
                expect_term = False
            else:
                if tok != "+":
                    self._err("syntax", lineno, col, f"expected '+', got {tok!r}")
                expect_term = True
        if expect_term:
            self._err("syntax", lineno, len(raw.rstrip()) + 1, "trailing '+' in init")
        self.initial = terms

    def _parse_defgate(self, lineno, raw, toks):
        if len(toks) < 4 or toks[2][0] != "matrix":
            self._err("syntax", lineno, toks[0][1], "usage: defgate NAME matrix JSON")
        name, name_col = toks[1]
        if not _NAME_RE.match(name):
            self._err("syntax", lineno, name_col, f"invalid gate name {name!r}")
        if name in self.defgates or name in g.BUILTIN_GATES:
            self._err("validation", lineno, name_col, f"gate {name!r} already defined")
        json_col = toks[3][1]
        json_text = raw[json_col - 1 :]
        if "#" in json_text:
            json_text = json_text[: json_text.index("#")]
        try:
            matrix = _matrix_from_json(json.loads(json_text))
        except (json.JSONDecodeError, ValueError) as exc:
            self._err("syntax", lineno, json_col, f"bad matrix JSON: {exc}")
        shape = matrix.shape
        if shape not in [(2, 2), (4, 4), (8, 8), (16, 16), (32, 32), (64, 64), (16, 4)]:
            self._err(
                "validation",
                lineno,
                json_col,
                f"unsupported matrix shape {shape[0]}x{shape[1]}",
            )
        self.defgates[name] = matrix

    def _lookup(self, name, col, lineno) -> np.ndarray:
        if name in self.defgates:
            return self.defgates[name]
        if name in g.BUILTIN_GATES:
            return g.BUILTIN_GATES[name]
        self._err("unknown-gate", lineno, col, f"unknown gate {name!r}")

    def _append(self, gate, lineno):
        self.gates.append(gate)
        try:
            validate_circuit(Circuit(self.mode_count, list(self.gates), self.initial))
        except StaticValidation as exc:
            self.gates.pop()
            self._err("validation", lineno, 1, str(exc))
        self.seen_gate_line = True

    def _parse_apply(self, lineno, toks):
        if len(toks) < 3:
            self._err("syntax", lineno, toks[0][1], "usage: apply NAME MODE...")
        name, name_col = toks[1]
        matrix = self._lookup(name, name_col, lineno)
        modes = [self._mode_index(t, c, lineno) for t, c in toks[2:]]
        if len(set(modes)) != len(modes):
            self._err("validation", lineno, toks[2][1], "repeated mode index")
        try:
            if len(modes) == 1:
                if matrix.shape != (2, 2):
                    raise NotUnitary(f"gate {name!r} is not 2x2")
                gate = g.make_single(matrix, modes[0], label=name)
            elif len(modes) == 2:
                if matrix.shape != (4, 4):
                    raise NotUnitary(f"gate {name!r} is not 4x4")
                gate = g.make_two(matrix, (modes[0], modes[1]), label=name)
            else:
                raise NotUnitary(
                    "apply takes 1 or 2 modes; use 'suppressed' for wider gates"
                )
        except NotUnitary as exc:
            self._err("validation", lineno, name_col, str(exc))
        self._append(gate, lineno)

    def _parse_create(self, lineno, toks):
        words = [t for t, _ in toks]
        if len(toks) != 8 or words[2] != "from" or words[5] != "into":
            self._err(
                "syntax",
                lineno,
                toks[0][1],
                "usage: create (default|NAME) from INT INT into INT INT",
            )
        name, name_col = toks[1]
        if name == "default":
            isom = g.default_creation()
        else:
            matrix = self._lookup(name, name_col, lineno)
            try:
                isom = g.make_creation(matrix)
            except NotIsometry as exc:
                self._err("validation", lineno, name_col, str(exc))
        sources = (
            self._mode_index(*toks[3][:2], lineno),
            self._mode_index(*toks[4][:2], lineno),
        )
        targets = (
            self._mode_index(*toks[6][:2], lineno),
            self._mode_index(*toks[7][:2], lineno),
        )
        if len({*sources, *targets}) != 4:
            self._err("validation", lineno, toks[3][1], "creation modes must be distinct")
        self._append(
            g.CreateGate(v=isom, sources=sources, targets=targets, label=name), lineno
        )

    def _parse_suppressed(self, lineno, toks):
        words = [t for t, _ in toks]
        if len(toks) < 6 or words[2] != "on" or words[-2] != "budget":
            self._err(
                "syntax",
                lineno,
                toks[0][1],
                "usage: suppressed NAME on MODE... budget INT",
            )
        name, name_col = toks[1]
        matrix = self._lookup(name, name_col, lineno)
        modes = [self._mode_index(t, c, lineno) for t, c in toks[3:-2]]
        budget = self._expect_int(toks[-1][0], toks[-1][1], lineno, "a budget")
        try:
            gate = g.make_suppressed(matrix, modes, budget, label=name)
        except (NotUnitary, ValueError) as exc:
            self._err("validation", lineno, name_col, str(exc))
        self._append(gate, lineno)

    def finish(self, lineno: int) -> Circuit:
        if self.mode_count is None:
            raise ParseError("syntax", lineno, 1, "missing 'modes' header")
        circuit = Circuit(self.mode_count, self.gates, self.initial)
        validate_circuit(circuit)
        return circuit


def parse_circuit(text: str) -> Circuit:
    parser = _LineParser()
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parser.feed(lineno, raw)
    return parser.finish(max(lineno, 1))


def _format_float(x: float) -> str:
    return repr(float(x))


def _format_complex(z: complex) -> str:
    if z.imag == 0:
        return _format_float(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_format_float(z.real)}{sign}{_format_float(abs(z.imag))}i"


def _format_matrix(u: np.ndarray) -> str:
    return json.dumps(matrix_to_json(u), separators=(", ", ": "))


def format_circuit(circuit: Circuit) -> str:
    """Canonical text form; ``parse_circuit(format_circuit(c)) == c``."""
    lines = [f"modes {circuit.mode_count}"]
    if circuit.initial is not None:
        terms = sorted(
            ((tuple(c), complex(a)) for c, a in circuit.initial), key=lambda t: t[0]
        )
        if len(terms) == 1 and terms[0][1] == 1:
            lines.append(f"init {ket_string(terms[0][0])}")
        else:
            body = " + ".join(
                f"{_format_complex(a)}*{ket_string(c)}" for c, a in terms
            )
            lines.append(f"init {body}")

    default_v = g.default_creation()
    decls: List[str] = []
    uses: List[str] = []
    named: Dict[str, np.ndarray] = {}
    fresh = 0

    def name_for(matrix: np.ndarray, label: Optional[str]) -> str:
        nonlocal fresh
        if label and label in g.BUILTIN_GATES and np.array_equal(
            g.BUILTIN_GATES[label], matrix
        ):
            return label
        if label and _NAME_RE.match(label) and label not in g.BUILTIN_GATES:
            name = label
        else:
            name = f"G{fresh}"
            fresh += 1
        while name in named and not np.array_equal(named[name], matrix):
            name = f"G{fresh}"
            fresh += 1
        if name not in named:
            named[name] = matrix
            decls.append(f"defgate {name} matrix {_format_matrix(matrix)}")
        return name

    for gate in circuit.gates:
        if isinstance(gate, g.SingleGate):
            uses.append(f"apply {name_for(gate.u, gate.label)} {gate.mode}")
        elif isinstance(gate, g.TwoGate):
            name = name_for(gate.u, gate.label)
            uses.append(f"apply {name} {gate.modes[0]} {gate.modes[1]}")
        elif isinstance(gate, g.CreateGate):
            if gate.v == default_v:
                name = "default"
            else:
                name = name_for(gate.v.v, gate.label)
            i, j = gate.sources
            k, l = gate.targets
            uses.append(f"create {name} from {i} {j} into {k} {l}")
        elif isinstance(gate, g.SuppressedGate):
            name = name_for(gate.u, gate.label)
            mode_list = " ".join(str(m) for m in gate.modes)
            uses.append(f"suppressed {name} on {mode_list} budget {gate.budget_n}")
        else:
            raise TypeError(f"unknown gate {gate!r}")
    lines.extend(decls)
    lines.extend(uses)
    return "\n".join(lines) + "\n"


def write_result(result: RunResult, fmt: str = "json") -> str:
    """Serialize a run: JSON carries amplitudes and the histogram, CSV
    carries outcome rows in canonical configuration order."""
    state = result.final_state
    if fmt == "json":
        doc = {
            "backend": result.backend,
            "seed": result.seed,
            "shots": result.shots,
            "histogram": {
                ket_string(c): n for c, n in sorted(result.samples.items())
            },
            "amplitudes": {
                ket_string(c): [a.real, a.imag] for c, a in state.sorted_terms()
            },
            "wall_time_ms": result.wall_time * 1000.0,
        }
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        outcomes = sorted(set(state.terms) | set(result.samples))
        rows = ["outcome,count,probability"]
        for config in outcomes:
            count = result.samples.get(config, 0)
            prob = abs(state.amplitude(config)) ** 2
            rows.append(f"{ket_string(config)},{count},{_format_float(prob)}")
        return "\n".join(rows) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
