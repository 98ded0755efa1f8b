import json
import math

import numpy as np
import pytest

from qedsim.dsl import (
    format_circuit,
    matrix_from_json,
    matrix_to_json,
    parse_circuit,
    write_result,
)
from qedsim.engine import Circuit, RunResult, run
from qedsim.errors import ParseError
from qedsim.gates import BUILTIN_GATES, SingleGate
from qedsim.state import config_from_ket, make_state

SQ2 = 1.0 / math.sqrt(2.0)


def test_smallest_program():
    c = parse_circuit("modes 1\ninit 0\napply H 0\n")
    assert c.mode_count == 1
    assert len(c.gates) == 1
    gate = c.gates[0]
    assert isinstance(gate, SingleGate)
    assert gate.mode == 0
    assert np.array_equal(gate.u, BUILTIN_GATES["H"])


def test_fig3_file(valid_corpus):
    src = next(p for p in valid_corpus if p.name == "fig3.qed").read_text()
    c = parse_circuit(src)
    assert c.mode_count == 4
    assert len(c.gates) == 2
    assert c.initial == [(config_from_ket("00WW"), 1.0 + 0j)]


def test_mode_out_of_range_diagnostic():
    with pytest.raises(ParseError) as exc_info:
        parse_circuit("modes 2\napply H 5\n")
    err = exc_info.value
    assert err.kind == "validation"
    assert (err.line, err.col) == (2, 9)
    assert "mode 5" in err.message


def test_unknown_gate_diagnostic():
    with pytest.raises(ParseError) as exc_info:
        parse_circuit("modes 1\napply NOPE 0\n")
    assert exc_info.value.kind == "unknown-gate"


def test_unicode_omega_accepted():
    a = parse_circuit("modes 2\ninit 0Ω\n")
    b = parse_circuit("modes 2\ninit 0W\n")
    assert a == b


def test_complex_init_terms():
    c = parse_circuit("modes 1\ninit 0.5+0.5i*0 + 0.5-0.5i*1\n")
    terms = dict((tuple(k), v) for k, v in c.initial)
    assert terms[(0,)] == 0.5 + 0.5j
    assert terms[(1,)] == 0.5 - 0.5j


def test_roundtrip_corpus(valid_corpus):
    assert len(valid_corpus) >= 25
    for path in valid_corpus:
        circuit = parse_circuit(path.read_text(encoding="utf-8"))
        again = parse_circuit(format_circuit(circuit))
        assert again == circuit, path.name
        # formatting is a fixed point after one pass
        assert format_circuit(again) == format_circuit(circuit), path.name


def test_error_corpus_positions(error_corpus):
    manifest = json.loads((error_corpus / "expected.json").read_text())
    assert len(manifest) >= 10
    for name, expected in manifest.items():
        text = (error_corpus / name).read_text(encoding="utf-8")
        with pytest.raises(ParseError) as exc_info:
            parse_circuit(text)
        err = exc_info.value
        assert err.kind == expected["kind"], name
        assert (err.line, err.col) == (expected["line"], expected["col"]), name


def test_canonical_float_formatting():
    c = Circuit(1, [], [(config_from_ket("0"), 0.5)])
    assert "0.5" in format_circuit(c) or "init 0" in format_circuit(c)
    c2 = Circuit(
        1, [], [(config_from_ket("0"), 0.5 + 0j), (config_from_ket("1"), 0.5 + 0j)]
    )
    text = format_circuit(c2)
    assert "0.50000" not in text
    assert "init 0.5*0 + 0.5*1" in text


def test_matrix_json_roundtrip():
    u = BUILTIN_GATES["T"]
    data = matrix_to_json(u)
    assert np.array_equal(matrix_from_json(json.loads(json.dumps(data))), u)


def test_defgate_reemitted_row_major(valid_corpus):
    src = next(p for p in valid_corpus if p.name == "defgate_single.qed").read_text()
    circuit = parse_circuit(src)
    text = format_circuit(circuit)
    assert "defgate RX03 matrix [[[" in text


def test_write_result_csv_deterministic_state():
    circuit = parse_circuit("modes 2\ninit 11\n")
    result = run(circuit, shots=10, seed=0)
    doc = write_result(result, fmt="csv")
    assert doc == "outcome,count,probability\n11,10,1.0\n"


def test_write_result_zero_shots():
    circuit = parse_circuit("modes 1\ninit 0\napply H 0\n")
    result = run(circuit, shots=0, seed=0)
    doc = json.loads(write_result(result, fmt="json"))
    assert doc["histogram"] == {}
    assert set(doc["amplitudes"]) == {"0", "1"}


def test_write_result_minus_state_amplitudes():
    circuit = parse_circuit("modes 1\ninit 0\napply H 0\napply Z 0\n")
    result = run(circuit, shots=0, seed=0)
    doc = json.loads(write_result(result, fmt="json"))
    assert doc["amplitudes"]["0"] == [0.7071067811865476, 0.0]
    assert doc["amplitudes"]["1"] == [-0.7071067811865476, 0.0]
