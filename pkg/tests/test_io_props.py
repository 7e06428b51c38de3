#!/usr/bin/env python

# Copyright 2016 Daniel Nunes
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import sys, os, pytest
import numpy as np
from jsonpickle import decode
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.io import ReportSection, export_catalog, export_report, format_cell, import_, parse_problem, render_report
from src.props import (_PropertyBase, PropertyCombo, PropertyConstant, PropertyExpression, PropertyGuard,
                       check_tokens)
from src.solver import Dirichlet, NeumannRobin
from src.catalog import all_cases, get_case
from src.exceptions import BaseInstanceException, FileAccessError, OutOfRange, ProblemFileError

DATA = os.path.join(os.path.dirname(__file__), "data")

LINEAR = "p = 1\nq = 1\nf = 2\nbc.kind = dirichlet\nbc.alpha = 0\nbc.beta = 0\n"


def _data(name):
    return os.path.join(DATA, name)


def test_import():
    spec = import_(_data("lane_emden.prob"))
    assert spec.name == "lane_emden"
    assert isinstance(spec.bc, NeumannRobin)
    assert spec.bc.gamma == pytest.approx(np.sqrt(0.75))
    x = np.array([0.25, 0.5])
    y = np.array([0.9, 1.1])
    assert np.allclose(spec.f(x, y), -y ** 5)
    # derived symbolically
    assert np.allclose(spec.f_y(x, y), -5.0 * y ** 4)
    assert np.allclose(spec.eval_p_prime(x), 2.0 * x)
    assert spec.domain_guard is None

    spec = import_(_data("linear_dirichlet.prob"))
    assert isinstance(spec.bc, Dirichlet)
    assert np.allclose(np.broadcast_to(spec.eval_p_prime(x), x.shape), 0.0)

    with pytest.raises(ProblemFileError):
        import_(_data("missing.prob"))


def test_problem_file_errors():
    with pytest.raises(ProblemFileError) as excinfo:
        import_(_data("invalid_key.prob"))
    assert excinfo.value.line == 7
    assert excinfo.value.field == "damping"

    cases = (
        (LINEAR + "oops\n", 7, None, "expected"),
        (LINEAR + "p = 2\n", 7, "p", "duplicate"),
        (LINEAR.replace("q = 1", "q ="), 2, "q", "empty"),
        (LINEAR.replace("f = 2\n", ""), None, "f", "missing"),
        (LINEAR.replace("f = 2", "f = __import__"), 3, "f", "unknown name"),
        (LINEAR.replace("f = 2", "f = x.real"), 3, "f", "unexpected character"),
        (LINEAR.replace("p = 1", "p = y"), 1, "p", "not allowed"),
        (LINEAR.replace("dirichlet", "neumann"), 4, "bc.kind", "not one of"),
        (LINEAR.replace("bc.beta = 0", "bc.beta = x"), 6, "bc.beta", "not allowed"),
        (LINEAR + "bc.gamma = 1\n", 7, "bc.gamma", "only applies"),
        (LINEAR.replace("dirichlet", "robin"), None, "bc.gamma", "missing"),
        (LINEAR.replace("dirichlet", "robin") + "bc.gamma = 1\n", 5, "bc.alpha", "alpha != 0"),
        (LINEAR.replace("f = 2", "f = (y"), 3, "f", "malformed"),
    )
    for text, line, field, reason in cases:
        with pytest.raises(ProblemFileError) as excinfo:
            parse_problem(text)
        assert excinfo.value.line == line, text
        assert excinfo.value.field == field, text
        assert reason in excinfo.value.message, text


def test_check_tokens():
    assert check_tokens(" 2*x^2 + exp(-y) ", ("x", "y")) == "2*x^2 + exp(-y)"
    assert check_tokens("1.5e-3 + .5", ()) == "1.5e-3 + .5"
    for text in ("", "   ", "__import__('os')", "x.real", "lambda", "x; y", "x ** y [0]"):
        with pytest.raises(ValueError):
            check_tokens(text, ("x", "y"))
    with pytest.raises(ValueError) as excinfo:
        check_tokens("y", ("x",))
    assert "not allowed" in str(excinfo.value)


def test_properties():
    with pytest.raises(BaseInstanceException):
        _PropertyBase("base", ())

    constant = PropertyConstant("bc.alpha")
    assert not constant.is_set
    constant.set_value("ln(2)", 5)
    assert constant.is_set
    assert constant.number == pytest.approx(np.log(2.0))
    assert constant.line == 5
    constant = PropertyConstant("bc.gamma")
    constant.set_value("sqrt(3/4)")
    assert constant.number == pytest.approx(np.sqrt(0.75))
    for text in ("ln(0)", "sqrt(-1)", "1/0"):
        with pytest.raises(ProblemFileError):
            PropertyConstant("c").set_value(text)

    combo = PropertyCombo("bc.kind", ("dirichlet", "robin"))
    combo.set_value(" Robin ")
    assert combo.value == "robin"
    with pytest.raises(ProblemFileError) as excinfo:
        PropertyCombo("bc.kind", ("dirichlet", "robin")).set_value("periodic", 3)
    assert excinfo.value.line == 3

    expression = PropertyExpression("f", ("x", "y"))
    expression.set_value("x*exp(y)")
    assert expression.function()(2.0, 0.0) == pytest.approx(2.0)
    assert expression.function(expression.derivative("x"))(2.0, 0.0) == pytest.approx(1.0)

    guard = PropertyGuard("guard")
    guard.set_value("Nonnegative")
    assert np.array_equal(guard.function()(np.array([-1.0, 2.0])), [0.0, 2.0])
    guard = PropertyGuard("guard")
    guard.set_value("nonzero")
    assert np.isnan(guard.function()(np.array([0.0]))[0])
    guard = PropertyGuard("guard")
    guard.set_value("y^2")
    assert guard.function()(3.0) == pytest.approx(9.0)
    with pytest.raises(ProblemFileError):
        PropertyGuard("guard").set_value("x")


def test_exponent_bound():
    constant = PropertyConstant("c")
    constant.set_value("2^10")
    assert constant.number == 1024.0
    expression = PropertyExpression("f", ("x", "y"))
    expression.set_value("y^5 + x^-0.5")
    assert expression.function()(4.0, 1.0) == pytest.approx(1.5)

    for text in ("9^9^9^9", "x^(9^9^9)", "2^(64*64)", "y + 10^1e300"):
        with pytest.raises(ProblemFileError) as excinfo:
            PropertyExpression("f", ("x", "y")).set_value(text, 3)
        assert "exceeds" in excinfo.value.message
        assert excinfo.value.line == 3


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell("text") == "text"
    assert format_cell(True) == "true"
    assert format_cell(7) == "7"
    assert format_cell(0.1) == "0.1"
    assert format_cell(1.0 / 3.0, 4) == "0.3333"
    assert format_cell(1.5e-12) == "1.5e-12"
    assert format_cell([0.5, 0.25]) == "0.5;0.25"
    assert format_cell(np.float64(2.5)) == "2.5"


def test_render_report(tmpdir):
    sections = [ReportSection("First", ["x", "y"], [[0.5, 1.0], [0.75, None]], ["a note"]),
                ReportSection("Second", ["n"], [[1], [2]])]
    assert render_report(sections) == "x,y\n0.5,1\n0.75,\n\nn\n1\n2\n"

    markdown = render_report(sections, "markdown")
    assert markdown.startswith("### First\n\n| x | y |\n|---|---|\n| 0.5 | 1 |\n| 0.75 | - |\n\na note\n")
    assert "### Second" in markdown

    with pytest.raises(OutOfRange):
        render_report(sections, "html")

    path = str(tmpdir.join("report.csv"))
    text = export_report(sections, "csv", path)
    with open(path, "rb") as report_file:
        assert report_file.read() == text.encode("utf-8")
    assert b"\r\n" not in text.encode("utf-8")
    with pytest.raises(FileAccessError):
        export_report(sections, "csv", str(tmpdir))


def test_export_catalog(tmpdir):
    path = str(tmpdir.join("catalog.json"))
    text = export_catalog(all_cases(), "json", path)
    listing = decode(text)
    assert [case["id"] for case in listing] == list(range(1, 9))
    assert listing[3]["bc"] == {"kind": "robin", "alpha": 1.0, "beta": 0.0, "gamma": pytest.approx(np.sqrt(0.75))}
    assert listing[1]["rows"][0]["reference"]["J=2"] == 0.84976
    assert listing[5]["has_exact"] is False
    with open(path, "r", encoding="utf-8") as catalog_file:
        assert catalog_file.read() == text

    csv_text = export_catalog([get_case(6)], "csv")
    assert csv_text.splitlines()[0] == "x,y_h,exact,e_a,ADMG,TCM,FDM"
    assert csv_text.splitlines()[1] == "0.1,0.26866,,,0.26862,0.26907,0.26875"
