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

import logging
import numpy as np
from .exceptions import NonFiniteInput, OutOfRange, SingularMatrix

logger = logging.getLogger("haarql.linalg")

DEFAULT_PIVOT_FLOOR = 1e-13
DEFAULT_TOL_SOLVE = 1e-10


class DenseSystem(object):
    """
    A square dense system ``A a = rhs``. The arrays are copied on construction.

    :param matrix: The (n, n) coefficient matrix.
    :param rhs: The length n right hand side.
    """
    def __init__(self, matrix, rhs):
        self.matrix = np.array(matrix, dtype=float)
        self.rhs = np.array(rhs, dtype=float)

        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise OutOfRange("matrix shape", self.matrix.shape, "square (n, n)")
        if self.rhs.shape != (self.matrix.shape[0],):
            raise OutOfRange("rhs shape", self.rhs.shape, "({},)".format(self.matrix.shape[0]))

    @property
    def size(self):
        return self.matrix.shape[0]

    def residual(self, solution):
        """
        :return: The infinity norm of ``A x - b``.
        """
        return float(np.max(np.abs(self.matrix.dot(solution) - self.rhs), initial=0.0))


def gauss_solve(system, pivot_floor_factor=DEFAULT_PIVOT_FLOOR, tol_solve=DEFAULT_TOL_SOLVE):
    """
    Solves a DenseSystem by Gauss elimination with partial (row) pivoting and back substitution.

    Raises ``NonFiniteInput`` for NaN/inf entries and ``SingularMatrix`` when the largest candidate pivot of a
    column is not above ``pivot_floor_factor * ||A||_inf``.

    :param system: The DenseSystem to solve. It is left untouched.
    :param pivot_floor_factor: Relative pivot floor.
    :param tol_solve: Relative residual bound checked after the solve, a warning is logged when exceeded.
    :return: The solution vector.
    """
    if not np.all(np.isfinite(system.matrix)):
        raise NonFiniteInput("coefficient matrix")
    if not np.all(np.isfinite(system.rhs)):
        raise NonFiniteInput("right hand side")

    a = system.matrix.copy()
    b = system.rhs.copy()
    n = system.size
    norm_a = float(np.max(np.sum(np.abs(a), axis=1), initial=0.0))
    floor = pivot_floor_factor * norm_a

    for k in range(n):
        column = np.abs(a[k:, k])
        mu = k + int(np.argmax(column))
        if column[mu - k] <= floor:
            raise SingularMatrix(k, column[mu - k], floor)
        if mu != k:
            a[[k, mu], k:] = a[[mu, k], k:]
            b[[k, mu]] = b[[mu, k]]

        # forward elimination
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        b[k + 1:] -= factors * b[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:].dot(x[k + 1:])) / a[k, k]

    residual = system.residual(x)
    bound = tol_solve * (norm_a * float(np.max(np.abs(x), initial=0.0)) + float(np.max(np.abs(system.rhs),
                                                                                         initial=0.0)))
    if residual > bound:
        logger.warning("Solve residual %.3e exceeds the bound %.3e for a %dx%d system.", residual, bound, n, n)
    return x
