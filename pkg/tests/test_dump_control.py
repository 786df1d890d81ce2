import json
from fractions import Fraction

import pytest

from projects.controls.dump_control import (
    format_curve_csv, format_float, format_json, format_kernel_csv, format_matrix_dump,
    format_measure_csv, format_rational, format_rows_csv, format_table_dump, json_number,
    save_output,
)
from projects.modules.chain import down_up_kernel, plancherel_measure
from projects.modules.operators import growth_matrix
from projects.modules.spectral import ROUTE_EIGEN, ROUTE_RECURRENCE, separation_curve
from projects.modules.tree_core import enumerate_trees


def test_rational_format():
    assert format_rational(Fraction(1, 18)) == "1/18"
    assert format_rational(3) == "3/1"
    assert Fraction(format_rational(Fraction(1, 18))) == Fraction(1, 18)


def test_float_format_keeps_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(0.0245726412877)) == 0.0245726412877


def test_json_number():
    assert json_number(Fraction(1, 2)) == {"num": "1", "den": "2"}
    assert json_number(0) == {"num": "0", "den": "1"}
    assert json_number(0.25) == 0.25


def test_table_dump():
    text = format_table_dump(4, enumerate_trees(4).encodings())
    assert text.splitlines()[0] == "n=4 count=4"
    assert text.splitlines()[1:] == list(enumerate_trees(4).encodings())


def test_matrix_dump():
    matrix = growth_matrix(3)
    text = format_matrix_dump(matrix.shape, matrix.entries)
    lines = text.splitlines()
    assert lines[0] == "rows=2 cols=4 nnz=5"
    assert lines[1:] == ["0 0 1", "0 1 1", "0 2 1", "1 2 2", "1 3 1"]


def test_kernel_csv():
    kernel = down_up_kernel(4)
    text = format_kernel_csv(kernel.from_table.encodings(), kernel.to_table.encodings(), kernel.entries)
    lines = text.splitlines()
    assert lines[0] == ",(((()))),((()())),((())()),(()()())"
    assert lines[4] == "(()()()),0/1,0/1,1/2,1/2"


def test_measure_csv():
    measure = plancherel_measure(4)
    text = format_measure_csv(measure.table.encodings(), measure.probs)
    assert text.splitlines() == ["(((()))),1/18", "((()())),1/9", "((())()),1/2", "(()()()),1/3"]


def test_rows_csv_formats_numbers():
    text = format_rows_csv(["a", "b", "c"], [[Fraction(2, 4), 0.5, 7]])
    assert text == "a,b,c\n1/2,0.5,7\n"


def test_curve_csv_interleaves_routes():
    curves = [separation_curve(4, 2, ROUTE_EIGEN), separation_curve(4, 2, ROUTE_RECURRENCE)]
    assert format_curve_csv(curves).splitlines() == [
        "n,r,s_star,route",
        "4,1,1/1,eigen-formula",
        "4,1,1/1,A-recurrence",
        "4,2,1/2,eigen-formula",
        "4,2,1/2,A-recurrence",
    ]


def test_json_envelope():
    payload = json.loads(format_json("measure", "0.1.0", {"n": 4}, [{"pi": json_number(Fraction(1, 3))}]))
    assert payload["meta"] == {"command": "measure", "version": "0.1.0", "config": {"n": 4}}
    assert payload["data"] == [{"pi": {"num": "1", "den": "3"}}]


def test_save_output(tmp_path):
    assert save_output("x\n", None) is None
    target = tmp_path / "out.csv"
    assert save_output("a,b\n", str(target)) == str(target)
    assert target.read_text(encoding="utf-8") == "a,b\n"


def test_save_output_failure(tmp_path):
    with pytest.raises(OSError):
        save_output("x", str(tmp_path / "missing" / "out.csv"))
