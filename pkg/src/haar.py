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

"""
The unnormalized Haar family on [0, 1), its first and second integrals and the midpoint collocation grid.

Wavelet ``i = 1`` is the scaling function. For ``i >= 2`` the index splits as ``i = m + k + 1`` with ``m = 2**j``;
the wavelet is +1 on ``[k/m, (k+0.5)/m)`` and -1 on ``[(k+0.5)/m, (k+1)/m)``.
"""

import logging
from collections import namedtuple
import numpy as np
from .exceptions import OutOfRange

logger = logging.getLogger("haarql.haar")

HaarIndex = namedtuple("HaarIndex", ["i", "j", "k", "m"])


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _result(values, scalar):
    return float(values) if scalar else values


def _check_index(i, size=None):
    if int(i) != i or i < 1:
        raise OutOfRange("wavelet index i", i, "[1, 2M]")
    if size is not None and i > size:
        raise OutOfRange("wavelet index i", i, "[1, {}]".format(size))


def index_decompose(i):
    """
    Splits a wavelet index into dilation and translation.

    :param i: The wavelet index, at least 2.
    :return: A HaarIndex with ``m`` the largest power of two not above ``i - 1``.
    """
    if int(i) != i or i < 2:
        raise OutOfRange("wavelet index i", i, "[2, inf)")
    i = int(i)
    j = (i - 1).bit_length() - 1
    m = 1 << j
    return HaarIndex(i, j, i - m - 1, m)


def breakpoints(i):
    """
    Returns ``(xi1, xi2, xi3, m)`` for wavelet ``i >= 2``.
    """
    idx = index_decompose(i)
    m = float(idx.m)
    return idx.k / m, (idx.k + 0.5) / m, (idx.k + 1) / m, idx.m


def haar_eval(i, x):
    """
    Evaluates h_i at x. Accepts scalars or arrays.

    :param i: The wavelet index.
    :param x: Abscissa(s) in [0, 1). The right endpoint is rejected since h is only defined on [0, 1).
    :return: +1, -1 or 0 (always 1 for the scaling function).
    """
    _check_index(i)
    arr, scalar = _as_array(x)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise OutOfRange("x", x, "[0, 1)")
    if i == 1:
        return _result(np.ones_like(arr), scalar)
    xi1, xi2, xi3, _ = breakpoints(i)
    values = np.where((arr >= xi1) & (arr < xi2), 1.0, 0.0) - np.where((arr >= xi2) & (arr < xi3), 1.0, 0.0)
    return _result(values, scalar)


def mother_wavelet(t):
    """
    H(t): +1 on [0, 1/2), -1 on [1/2, 1), 0 elsewhere.
    """
    arr, scalar = _as_array(t)
    values = np.where((arr >= 0.0) & (arr < 0.5), 1.0, 0.0) - np.where((arr >= 0.5) & (arr < 1.0), 1.0, 0.0)
    return _result(values, scalar)


def haar_eval_normalized(i, x):
    """
    The L2-normalized construction ``2**(j/2) * H(2**j x - k)``.

    It differs from ``haar_eval`` only by the factor ``2**(j/2)``. The scaling function is taken with j = 0.
    """
    _check_index(i)
    arr, scalar = _as_array(x)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise OutOfRange("x", x, "[0, 1)")
    if i == 1:
        return _result(np.ones_like(arr), scalar)
    idx = index_decompose(i)
    values = 2.0 ** (idx.j / 2.0) * mother_wavelet(2.0 ** idx.j * arr - idx.k)
    return _result(np.asarray(values, dtype=float), scalar)


def p1_eval(i, x):
    """
    First integral of h_i from 0 to x, continuous on [0, 1].

    For i >= 2 this is a tent with peak 1/(2m) at xi2, zero from xi3 onwards.
    """
    _check_index(i)
    arr, scalar = _as_array(x)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRange("x", x, "[0, 1]")
    if i == 1:
        return _result(arr.copy(), scalar)
    xi1, xi2, xi3, _ = breakpoints(i)
    values = np.where((arr >= xi1) & (arr < xi2), arr - xi1,
                      np.where((arr >= xi2) & (arr < xi3), xi3 - arr, 0.0))
    return _result(values, scalar)


def p2_eval(i, x):
    """
    Second integral of h_i from 0 to x, continuously differentiable on [0, 1].

    For i >= 2 it is constant 1/(4m^2) from xi3 onwards, so ``p2_eval(i, 1) == c1_value(i)``.
    """
    _check_index(i)
    arr, scalar = _as_array(x)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRange("x", x, "[0, 1]")
    if i == 1:
        return _result(0.5 * arr * arr, scalar)
    xi1, xi2, xi3, m = breakpoints(i)
    plateau = 1.0 / (4.0 * m * m)
    values = np.where(arr < xi1, 0.0,
                      np.where(arr < xi2, 0.5 * (arr - xi1) ** 2,
                               np.where(arr < xi3, plateau - 0.5 * (xi3 - arr) ** 2, plateau)))
    return _result(values, scalar)


def c1_value(i):
    """
    C_{i,1}, the integral of p_{i,1} over [0, 1], in closed form.
    """
    _check_index(i)
    if i == 1:
        return 0.5
    m = index_decompose(i).m
    return 1.0 / (4.0 * m * m)


def collocation_grid(J):
    """
    The uniform midpoint grid ``x_j = (j - 0.5) / 2M`` for j = 1..2M, with 2M = 2**(J+1).

    :param J: The maximum level of resolution.
    :return: A numpy array with 2M points, none of them on the endpoints.
    """
    if int(J) != J or J < 0:
        raise OutOfRange("resolution level J", J, "[0, inf)")
    size = 2 ** (int(J) + 1)
    return (np.arange(1, size + 1) - 0.5) / size


class HaarBasis(object):
    """
    The truncated family h_1..h_2M for a resolution level J.

    The basis matrices at the collocation grid are computed once at construction; instances are never mutated
    afterwards and can be shared between workers.

    :param J: The maximum level of resolution.
    """
    def __init__(self, J):
        self.grid = collocation_grid(J)
        self.J = int(J)
        self.M = 2 ** self.J
        self.size = 2 * self.M
        self.c1 = np.array([c1_value(i) for i in range(1, self.size + 1)])

        self.h_grid = self.h_matrix(self.grid)
        self.p1_grid = self.p1_matrix(self.grid)
        self.p2_grid = self.p2_matrix(self.grid)
        logger.debug("Built Haar basis J=%d with %d functions.", self.J, self.size)

    def __repr__(self):
        return "HaarBasis(J={})".format(self.J)

    def _columns(self, func, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        return np.column_stack([func(i, arr) for i in range(1, self.size + 1)])

    def h_matrix(self, x):
        """
        :param x: Abscissae in [0, 1).
        :return: An array of shape (len(x), 2M) with entry [j, i-1] = h_i(x_j).
        """
        return self._columns(haar_eval, x)

    def p1_matrix(self, x):
        return self._columns(p1_eval, x)

    def p2_matrix(self, x):
        return self._columns(p2_eval, x)
