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
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.catalog import CASE_IDS, EXACT_CASE_IDS, PROBE_POINTS, all_cases, exact_eval, get_case
from src.solver import Dirichlet, NeumannRobin, SolverConfig, solve
from src.bench import convergence_rows
from src.exceptions import NoExactSolution, UnknownCase

Y_RANGES = {
    1: (0.0, 0.7),
    2: (0.05, 1.0),
    3: (-1.61, -1.38),
    4: (0.86, 1.0),
    5: (0.0, 0.32),
    6: (0.1, 0.3),
    7: (0.8, 1.0),
    8: (0.9, 1.0),
}


def test_get_case():
    case = get_case(4)
    assert case.case_id == 4
    assert get_case("4").case_id == 4
    assert get_case(" 7 ").case_id == 7
    assert isinstance(case.spec.bc, NeumannRobin)
    assert isinstance(get_case(1).spec.bc, Dirichlet)
    assert [case.case_id for case in all_cases()] == list(CASE_IDS)

    for case_id in (0, 9, "abc", None, 2.5):
        with pytest.raises(UnknownCase):
            get_case(case_id)


def test_table_rows():
    for case in all_cases():
        assert tuple(row.x for row in case.table_rows) == PROBE_POINTS
        assert case.has_exact == (case.case_id in EXACT_CASE_IDS)
        for row in case.table_rows:
            assert set(row.reference) == set(case.reference_columns)
            assert (row.exact is not None) == case.has_exact

    assert list(get_case(2).paper_y_h(2).values()) == [0.84976, 0.61829, 0.42672, 0.25187, 0.08351]
    assert get_case(2).paper_y_h(5) == {}
    assert get_case(1).paper_y_h()[0.5] == 0.47020


def test_exact_eval():
    assert exact_eval(get_case(1), 0.0) == pytest.approx(np.log(2.0))
    assert exact_eval(get_case(1), 1.0) == pytest.approx(0.0, abs=1e-15)
    assert exact_eval(get_case(3), 1.0) == pytest.approx(np.log(0.2))
    assert exact_eval(get_case(4), 1.0) == pytest.approx(np.sqrt(0.75))
    assert exact_eval(get_case(5), 1.0) == pytest.approx(0.0, abs=1e-15)
    assert exact_eval(get_case(4), np.array([0.0, 1.0])).shape == (2,)

    for case_id in (2, 6, 7, 8):
        with pytest.raises(NoExactSolution):
            exact_eval(get_case(case_id), 0.5)


def test_derivatives_are_consistent():
    x = np.linspace(0.05, 1.0, 7)
    step = 1e-6
    for case_id in CASE_IDS:
        spec = get_case(case_id).spec
        low, high = Y_RANGES[case_id]
        for y in np.linspace(low, high, 9):
            column = np.full(x.shape, y)
            numeric = (spec.f(x, column + step) - spec.f(x, column - step)) / (2.0 * step)
            analytic = np.broadcast_to(spec.f_y(x, column), x.shape)
            assert np.allclose(analytic, numeric, rtol=1e-6, atol=1e-8)

        assert np.allclose(spec.eval_p_prime(x), (spec.p(x + step) - spec.p(x - step)) / (2.0 * step), rtol=1e-6)


def _flux_derivative(spec, y, x, h):
    return (spec.p(x + 0.5 * h) * (y(x + h) - y(x)) - spec.p(x - 0.5 * h) * (y(x) - y(x - h))) / (h * h)


def test_exact_solutions_solve_the_problems():
    h = 2e-4
    x = np.linspace(0.05, 0.95, 19)
    for case_id in EXACT_CASE_IDS:
        case = get_case(case_id)
        spec = case.spec
        y = case.exact
        # one Richardson step removes the h^2 term of the symmetric difference
        flux = (4.0 * _flux_derivative(spec, y, x, 0.5 * h) - _flux_derivative(spec, y, x, h)) / 3.0
        assert np.allclose(flux, spec.q(x) * spec.f(x, y(x)), rtol=0.0, atol=1e-6), case

        if isinstance(spec.bc, Dirichlet):
            assert float(y(np.array(0.0))) == pytest.approx(spec.bc.alpha)
            assert float(y(np.array(1.0))) == pytest.approx(spec.bc.beta, abs=1e-15)
        else:
            slope_0 = float(y(np.array(h)) - y(np.array(0.0))) / h
            slope_1 = float(y(np.array(1.0)) - y(np.array(1.0 - h))) / h
            assert slope_0 == pytest.approx(0.0, abs=1e-3)
            robin = spec.bc.alpha * float(y(np.array(1.0))) + spec.bc.beta * slope_1
            assert robin == pytest.approx(spec.bc.gamma, abs=1e-3)


def test_published_tables():
    for case in all_cases():
        solution = solve(case.spec, SolverConfig(J=case.paper_J, max_iters=case.paper_iters))
        x = np.array(PROBE_POINTS)
        y_h = solution.evaluate(x)
        published = np.array([row.y_h for row in case.table_rows])
        assert np.max(np.abs(y_h - published)) <= 5e-4, case

        if case.has_exact:
            # the analytic solution, not the printed exact column
            e_a = np.abs(y_h - exact_eval(case, x))
            assert np.max(e_a) <= 5e-4, case
            printed = np.array([row.e_a for row in case.table_rows])
            assert np.all(e_a <= 2.0 * printed), case

    case = get_case(2)
    solution = solve(case.spec, SolverConfig(J=2, max_iters=case.paper_iters))
    published = np.array(list(case.paper_y_h(2).values()))
    assert np.max(np.abs(solution.evaluate(np.array(PROBE_POINTS)) - published)) <= 1e-3


def test_second_order_rate():
    for case_id in EXACT_CASE_IDS:
        case = get_case(case_id)
        rows = convergence_rows(case.spec, case.exact, range(2, 7), max_iters=20)
        errors = [row[2] for row in rows]
        assert all(earlier > later for earlier, later in zip(errors, errors[1:]))
        for row in rows[:-1]:
            assert row[3] >= 1.7
        assert rows[-1][3] is None
        assert [row[1] for row in rows] == [8, 16, 32, 64, 128]
        if case_id == 4:
            assert errors[-1] <= errors[0] / 8.0
