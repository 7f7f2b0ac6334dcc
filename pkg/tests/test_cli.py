from __future__ import annotations

import importlib
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overorders.cli import PolySyntaxError, format_poly, parse_poly, run
from overorders.cli import export
from overorders.engine import overorders

from support import CUBIC, Q8_JSON, eq_order, fk, fk_order

# the package re-exports the function ``main``, which shadows the submodule
cli_main = importlib.import_module("overorders.cli.main")


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


# -- parser -------------------------------------------------------------------


def test_parse_examples():
    assert parse_poly("x^4 - 5^3*(x^3+x^2+x+1)") == fk(3)
    assert parse_poly("x") == [0, 1]
    assert parse_poly(" -x^2 + 3 ") == [3, 0, -1]
    assert parse_poly("(x+1)^3") == [1, 3, 3, 1]
    assert parse_poly("2*(x - 1)*(x + 1)") == [-2, 0, 2]
    assert parse_poly("x^3-1000*x^2-1000*x-1000") == CUBIC


@pytest.mark.parametrize("text,offset", [("x^^2", 2), ("x +", 3), ("(x", 2), ("y", 0), ("x^-1", 2)])
def test_parse_errors(text, offset):
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly(text)
    assert exc.value.offset == offset


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-(10**6), 10**6), min_size=1, max_size=7))
def test_format_round_trip(coeffs):
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    assert parse_poly(format_poly(coeffs)) == coeffs


# -- commands -------------------------------------------------------------------


def test_count_only_cubic():
    code, out = call("overorders", "--poly", "x^3-1000*x^2-1000*x-1000", "--count-only")
    assert code == 0 and out.strip() == "16"


def test_count_only_q8():
    code, out = call("overorders", "--table", str(Q8_JSON), "--count-only")
    assert code == 0 and out.strip() == "113"


def test_maximal_order_quintic():
    code, out = call("maximal-order", "--poly", "x^5-x+1")
    assert code == 0
    assert "disc 2869" in out and "index 1" in out


def test_list_output_and_check():
    code, out = call("overorders", "--poly", "x^4 - 5^2*(x^3+x^2+x+1)", "--check")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "3" and len(lines) == 4


def test_prime_and_prime_ideal():
    code, out = call("overorders", "--poly", "x^4 - 5^3*(x^3+x^2+x+1)", "--prime", "13", "--count-only")
    assert (code, out.strip()) == (0, "2")
    code, out = call("overorders", "--poly", "x^4 - 5^3*(x^3+x^2+x+1)", "--prime", "13", "--prime-ideal", "0", "--count-only")
    assert (code, out.strip()) == (0, "2")


def test_minimal_info_suborders_survey():
    code, out = call("minimal", "--poly", "x^2-5")
    assert code == 0 and out.splitlines()[0] == "1"
    code, out = call("info", "--poly", "x^2-5")
    assert code == 0 and "disc 20" in out and "p=2 prime 0: f=1 gorenstein=yes bass=yes" in out
    code, out = call("suborders", "--poly", "x^2+1", "--index", "2")
    assert code == 0 and out.splitlines()[0] == "1"
    code, out = call("suborders", "--poly", "x^5-x+1", "--conductor", "17:0")
    assert code == 0 and out.splitlines()[0] == "0"
    code, out = call("conductor-survey", "--poly", "x^5-x+1", "--bound", "18")
    assert code == 0
    assert "<17, a + 8>: not a conductor" in out
    assert "every degree-one prime is a conductor: no" in out


def test_max_materialize_counted_form():
    code, out = call("overorders", "--poly", "x^3-1000*x^2-1000*x-1000", "--max-materialize", "5")
    assert code == 0
    assert out.splitlines()[0] == "16" and "counted form" in out


def test_factors_decomposition_flags():
    code, a = call("overorders", "--factors", "x-1,x+1", "--count-only")
    code2, b = call("overorders", "--factors", "x-1,x+1", "--count-only", "--no-decompose")
    assert code == code2 == 0 and a == b == "2\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["overorders", "--poly", "x^^2"],
        ["overorders", "--poly", "2*x^2+1"],
        ["overorders", "--poly", "x^2"],
        ["overorders", "--poly", "x^2-5", "--prime", "4"],
        ["overorders", "--poly", "x^2-5", "--prime", "2", "--prime-ideal", "3"],
        ["overorders", "--poly", "x^2-5", "--prime-ideal", "0"],
        ["overorders", "--table", "/nonexistent.json"],
        ["overorders"],
        ["suborders", "--poly", "x^2+1", "--index", "0"],
        ["suborders", "--poly", "x^2+1", "--conductor", "nonsense"],
        ["overorders", "--poly", "x^2-5", "--threads", "0"],
    ],
)
def test_input_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli_main.main(argv)
    assert exc.value.code == 1


def test_internal_failure_exit_2(monkeypatch):
    def broken(*a, **k):
        raise AssertionError("planted invariant breach")

    monkeypatch.setattr(cli_main, "overorders", broken)
    code, _ = call("overorders", "--poly", "x^2-5")
    assert code == 2


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "overorders", "overorders", "--poly", "x^2-5", "--count-only"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout.strip() == "2"


# -- export ---------------------------------------------------------------------


def test_dot_single_node():
    L = eq_order([1, 0, 1])  # Z[i] is maximal
    dot = export.to_dot(overorders(L))
    assert dot.count("label=") == 1 and "->" not in dot


def test_dot_f2_chain(tmp_path):
    path = tmp_path / "f2.dot"
    code, _ = call("overorders", "--poly", "x^4 - 25*(x^3+x^2+x+1)", "--dot", str(path))
    assert code == 0
    dot = path.read_text()
    assert dot.startswith("digraph") and dot.count("->") == 2
    poset = overorders(fk_order(2))
    # a chain: every node has at most one parent and one child
    assert sorted(c for c, _ in poset.edges) == sorted(set(c for c, _ in poset.edges))
    assert sorted(p for _, p in poset.edges) == sorted(set(p for _, p in poset.edges))


def test_json_round_trip():
    poset = overorders(eq_order(CUBIC))
    text = export.to_json(poset)
    data = json.loads(text)
    assert set(data) >= {"base", "nodes", "edges"}
    node = data["nodes"][0]
    assert isinstance(node["index"], str) and isinstance(node["disc"], str)
    assert set(node["gorenstein_at"]) == {"2", "5"}
    base, nodes, edges = export.from_json(text)
    assert [o.key for o in nodes] == poset.keys()
    assert [tuple(e) for e in edges] == [tuple(e) for e in poset.edges]
    assert base.key == poset.base.key


def test_json_cli_output():
    code, out = call("overorders", "--table", str(Q8_JSON), "--json")
    assert code == 0
    data = json.loads(out)
    assert len(data["nodes"]) == 113
    assert max(int(n["index"]) for n in data["nodes"]) == 2**9
    assert "gorenstein_at" not in data["nodes"][0]


def test_export_counted_rejected():
    poset = overorders(eq_order(CUBIC), count_only=True)
    with pytest.raises(export.ExportError):
        export.to_dot(poset)
    with pytest.raises(export.ExportError):
        export.to_json(poset)
