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
from src.haar import (HaarBasis, breakpoints, c1_value, collocation_grid, haar_eval, haar_eval_normalized,
                      index_decompose, p1_eval, p2_eval)
from src.exceptions import OutOfRange

CELLS = 4096


def test_index_decompose():
    assert index_decompose(2)[1:] == (0, 0, 1)
    assert index_decompose(5)[1:] == (2, 0, 4)
    assert index_decompose(8)[1:] == (2, 3, 4)
    assert breakpoints(3) == (0.0, 0.25, 0.5, 2)

    for i in range(2, 200):
        idx = index_decompose(i)
        assert idx.m == 2 ** idx.j
        assert 0 <= idx.k <= idx.m - 1
        assert i == idx.m + idx.k + 1

    with pytest.raises(OutOfRange):
        index_decompose(1)
    with pytest.raises(ValueError):
        index_decompose(2.5)


def test_haar_eval():
    assert haar_eval(1, 0.73) == 1.0
    assert haar_eval(2, 0.25) == 1.0
    assert haar_eval(2, 0.75) == -1.0
    assert haar_eval(3, 0.3) == -1.0
    assert haar_eval(3, 0.8) == 0.0
    assert haar_eval(2, 0.5) == -1.0

    values = haar_eval(4, np.array([0.5, 0.6, 0.8, 0.9]))
    assert np.array_equal(values, [1.0, 1.0, -1.0, -1.0])

    with pytest.raises(OutOfRange):
        haar_eval(2, 1.0)
    with pytest.raises(OutOfRange):
        haar_eval(2, -0.1)
    with pytest.raises(OutOfRange):
        haar_eval(0, 0.5)


def test_primitives():
    assert p1_eval(2, 0.5) == 0.5
    assert p1_eval(2, 1.0) == 0.0
    assert p1_eval(1, 0.4) == 0.4
    assert p2_eval(2, 1.0) == 0.25
    assert p2_eval(1, 1.0) == 0.5
    assert p2_eval(5, 0.9) == pytest.approx(1.0 / 64.0, abs=1e-15)

    assert c1_value(1) == 0.5
    assert c1_value(2) == 0.25
    assert c1_value(5) == 0.015625

    # p2 reaches C at the right endpoint, which makes both reconstructions satisfy their boundary conditions
    for i in range(1, 65):
        assert p2_eval(i, 1.0) == pytest.approx(c1_value(i), abs=1e-15)

    with pytest.raises(OutOfRange):
        p1_eval(2, 1.5)


def test_c1_matches_quadrature():
    mid = (np.arange(CELLS) + 0.5) / CELLS
    for i in range(1, 65):
        # p1 is piecewise linear with kinks on the dyadic grid, midpoint quadrature is exact
        assert np.sum(p1_eval(i, mid)) / CELLS == pytest.approx(c1_value(i), abs=1e-14)


def test_collocation_grid():
    assert np.allclose(collocation_grid(0), [0.25, 0.75])
    assert np.allclose(collocation_grid(1), [0.125, 0.375, 0.625, 0.875])
    grid = collocation_grid(3)
    assert len(grid) == 16
    assert grid[0] == 0.03125
    assert grid[-1] == 0.96875
    assert np.all(np.diff(grid) > 0)

    with pytest.raises(OutOfRange):
        collocation_grid(-1)


def test_orthogonality_and_mean():
    basis = HaarBasis(5)
    mid = (np.arange(CELLS) + 0.5) / CELLS
    h = basis.h_matrix(mid)
    gram = h.T.dot(h) / CELLS

    expected = np.zeros((basis.size, basis.size))
    expected[0, 0] = 1.0
    for i in range(2, basis.size + 1):
        expected[i - 1, i - 1] = 2.0 ** -index_decompose(i).j
    assert np.allclose(gram, expected, atol=1e-12)

    means = h.sum(axis=0) / CELLS
    assert means[0] == pytest.approx(1.0)
    assert np.allclose(means[1:], 0.0, atol=1e-14)


def test_primitives_against_quadrature():
    rng = np.random.RandomState(1234)
    indices = rng.randint(1, 65, size=10000)
    points = rng.uniform(0.0, 1.0, size=10000)
    mid = (np.arange(CELLS) + 0.5) / CELLS

    for i in np.unique(indices):
        x = points[indices == i]
        # prefix sums over whole cells, h is constant and p1 linear on each of them
        h_sums = np.concatenate(([0.0], np.cumsum(haar_eval(i, mid)))) / CELLS
        p1_sums = np.concatenate(([0.0], np.cumsum(p1_eval(i, mid)))) / CELLS
        n = np.floor(x * CELLS).astype(int)
        left = n / float(CELLS)

        p1_oracle = h_sums[n] + (x - left) * haar_eval(i, mid[n])
        p2_oracle = p1_sums[n] + (x - left) * p1_eval(i, 0.5 * (left + x))

        assert np.allclose(p1_eval(i, x), p1_oracle, atol=1e-10)
        assert np.allclose(p2_eval(i, x), p2_oracle, atol=1e-10)


def test_normalized_construction():
    x = np.linspace(0.0, 1.0, 1001, endpoint=False)
    for i in range(1, 65):
        j = 0 if i == 1 else index_decompose(i).j
        assert np.allclose(haar_eval_normalized(i, x), 2.0 ** (j / 2.0) * haar_eval(i, x))


def test_basis():
    basis = HaarBasis(2)
    assert (basis.J, basis.M, basis.size) == (2, 4, 8)
    assert basis.h_grid.shape == (8, 8)
    assert np.array_equal(basis.h_grid[:, 1], haar_eval(2, basis.grid))
    assert np.array_equal(basis.p2_grid[:, 4], p2_eval(5, basis.grid))
    assert np.array_equal(basis.c1, [c1_value(i) for i in range(1, 9)])
    assert basis.p1_matrix(0.5).shape == (1, 8)
