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
Quasilinearization of ``(p y')' = q f(x, y)`` combined with Haar wavelet collocation.

Each sweep linearizes f about the previous iterate,

    p y''_{n+1} + p' y'_{n+1} + r y_{n+1} = g,   r = -q f_y(x, y_n),   g = q (f(x, y_n) - y_n f_y(x, y_n)),

writes y''_{n+1} as a Haar series, integrates it twice in closed form so the boundary conditions hold for any
coefficient vector, and solves the 2M x 2M collocation system at the midpoint grid.
"""

import logging
import math
import numpy as np
from .exceptions import (BaseInstanceException, DomainViolation, HaarQLError, InvalidBC, InvalidProblem,
                         NonFiniteEvaluation, OutOfRange, SolverIterationError)
from .haar import HaarBasis
from .linalg import DEFAULT_PIVOT_FLOOR, DEFAULT_TOL_SOLVE, DenseSystem, gauss_solve

logger = logging.getLogger("haarql.solver")


class _BoundaryCondition(object):
    """
    Base class for the boundary condition families. Shouldn't be used directly.

    Subclasses describe how y, y' and y'' are rebuilt from the Haar coefficients: for derivative order ``d``
    the value at x is ``base + D @ a`` where ``(base, D)`` is returned by ``design``.
    """
    kind = ""

    def __init__(self):
        if type(self) is _BoundaryCondition:
            raise BaseInstanceException(self)

    def baseline(self, x):
        """
        The reconstruction with all coefficients zero. Used as the default initial guess.
        """
        base, _ = self.design(0, np.atleast_1d(x), np.zeros((np.size(x), 1)), np.zeros(1))
        return base

    def design(self, order, x, matrix, c1):
        raise NotImplementedError

    def residuals(self, y0, dy0, y1, dy1):
        """
        :return: The absolute violations of both boundary conditions given the endpoint values.
        """
        raise NotImplementedError


class Dirichlet(_BoundaryCondition):
    """
    ``y(0) = alpha``, ``y(1) = beta``.
    """
    kind = "dirichlet"

    def __init__(self, alpha, beta):
        super().__init__()
        self.alpha = float(alpha)
        self.beta = float(beta)
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise InvalidBC("Dirichlet data must be finite, got alpha={}, beta={}.".format(alpha, beta))

    def __repr__(self):
        return "Dirichlet(alpha={!r}, beta={!r})".format(self.alpha, self.beta)

    def design(self, order, x, matrix, c1):
        slope = self.beta - self.alpha
        if order == 0:
            return self.alpha + slope * x, matrix - np.outer(x, c1)
        elif order == 1:
            return np.full(x.shape, slope), matrix - c1[None, :]
        return np.zeros(x.shape), matrix

    def residuals(self, y0, dy0, y1, dy1):
        return abs(y0 - self.alpha), abs(y1 - self.beta)


class NeumannRobin(_BoundaryCondition):
    """
    ``y'(0) = 0``, ``alpha y(1) + beta y'(1) = gamma``. Alpha must be nonzero.
    """
    kind = "robin"

    def __init__(self, alpha, beta, gamma):
        super().__init__()
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.gamma = float(gamma)
        if not all(math.isfinite(v) for v in (self.alpha, self.beta, self.gamma)):
            raise InvalidBC("Robin data must be finite, got alpha={}, beta={}, gamma={}.".format(alpha, beta, gamma))
        if self.alpha == 0.0:
            raise InvalidBC("Robin condition needs alpha != 0, the reconstruction divides by it.")

    def __repr__(self):
        return "NeumannRobin(alpha={!r}, beta={!r}, gamma={!r})".format(self.alpha, self.beta, self.gamma)

    def design(self, order, x, matrix, c1):
        if order == 0:
            design = matrix - c1[None, :]
            design[:, 0] -= self.beta / self.alpha
            return np.full(x.shape, self.gamma / self.alpha), design
        return np.zeros(x.shape), matrix

    def residuals(self, y0, dy0, y1, dy1):
        return abs(dy0), abs(self.alpha * y1 + self.beta * dy1 - self.gamma)


def _evaluate(name, func, x, *args):
    values = np.asarray(func(x, *args), dtype=float)
    values = np.array(np.broadcast_to(values, np.shape(x)), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        raise NonFiniteEvaluation(name, np.atleast_1d(x)[np.argmax(np.atleast_1d(bad))])
    return values


class ProblemSpec(object):
    """
    A doubly singular problem ``(p(x) y')' = q(x) f(x, y)`` on (0, 1) with its boundary conditions.

    All functions take and return numpy arrays (broadcasting constants is fine).

    :param p: p(x), positive on (0, 1].
    :param q: q(x), positive on (0, 1].
    :param f: f(x, y).
    :param f_y: The partial derivative of f in y.
    :param bc: A Dirichlet or NeumannRobin instance.
    :param p_prime: p'(x). When omitted a central difference is used, which loses digits near x = 0.
    :param domain_guard: Optional map y -> admissible y applied before f and f_y are evaluated. NaN entries
        in its output reject the iterate.
    :param name: A display name.
    """
    def __init__(self, p, q, f, f_y, bc, p_prime=None, domain_guard=None, name="problem"):
        if not isinstance(bc, _BoundaryCondition):
            raise InvalidBC("Expected a Dirichlet or NeumannRobin condition, got {!r}.".format(bc))
        self.p = p
        self.q = q
        self.f = f
        self.f_y = f_y
        self.bc = bc
        self.p_prime = p_prime
        self.domain_guard = domain_guard
        self.name = name

    def __repr__(self):
        return "ProblemSpec({!r}, bc={!r})".format(self.name, self.bc)

    def eval_p_prime(self, x):
        if self.p_prime is not None:
            return _evaluate("p_prime", self.p_prime, x)
        logger.warning("No p' given for %s, using central differences (reduced accuracy near x = 0).", self.name)
        step = np.asarray(x, dtype=float) * 1e-7 + 1e-12
        return _evaluate("p_prime", lambda t: (self.p(t + step) - self.p(t - step)) / (2.0 * step), x)

    def coefficients(self, x):
        """
        Evaluates p, p' and q at the given points and checks that p and q are positive there.

        :return: A tuple of arrays (p, p', q).
        """
        p = _evaluate("p", self.p, x)
        q = _evaluate("q", self.q, x)
        for name, values in (("p", p), ("q", q)):
            bad = values <= 0.0
            if np.any(bad):
                first = int(np.argmax(bad))
                raise InvalidProblem(name, np.atleast_1d(x)[first], values[first])
        return p, self.eval_p_prime(x), q

    def guard(self, x, y):
        """
        Maps the iterate into the admissible domain of f.
        """
        if self.domain_guard is None:
            return y
        guarded = np.asarray(self.domain_guard(np.asarray(y, dtype=float)), dtype=float)
        guarded = np.array(np.broadcast_to(guarded, np.shape(y)), dtype=float)
        bad = np.isnan(guarded)
        if np.any(bad):
            first = int(np.argmax(bad))
            raise DomainViolation(np.atleast_1d(x)[first], np.atleast_1d(y)[first])
        return guarded


class SolverConfig(object):
    """
    Per-solve settings.

    :param J: The maximum level of resolution, the system has 2M = 2**(J+1) unknowns.
    :param max_iters: The maximum number of quasilinearization sweeps.
    :param tol_outer: Stop once the sup-norm of successive grid iterates is at most this.
    :param initial_guess: Optional y_0(x). Defaults to the zero-coefficient reconstruction of the BC family.
    :param pivot_floor_factor: Passed to the Gauss elimination.
    :param tol_solve: Passed to the Gauss elimination.
    """
    def __init__(self, J=3, max_iters=12, tol_outer=1e-10, initial_guess=None,
                 pivot_floor_factor=DEFAULT_PIVOT_FLOOR, tol_solve=DEFAULT_TOL_SOLVE):
        if int(J) != J or J < 0:
            raise OutOfRange("J", J, "[0, inf)")
        if int(max_iters) != max_iters or max_iters < 1:
            raise OutOfRange("max_iters", max_iters, "[1, inf)")
        if not tol_outer > 0:
            raise OutOfRange("tol_outer", tol_outer, "(0, inf)")
        self.J = int(J)
        self.max_iters = int(max_iters)
        self.tol_outer = float(tol_outer)
        self.initial_guess = initial_guess
        self.pivot_floor_factor = pivot_floor_factor
        self.tol_solve = tol_solve

    def __repr__(self):
        return "SolverConfig(J={}, max_iters={}, tol_outer={!r})".format(self.J, self.max_iters, self.tol_outer)


class QlinState(object):
    """
    One outer-iteration snapshot.

    ``y_grid``, ``yp_grid`` and ``ypp_grid`` are the reconstruction formulas applied to ``coeffs`` at the
    collocation grid; ``r_grid`` and ``g_grid`` are the linearization used to produce them.
    """
    def __init__(self, iteration, coeffs, y_grid, yp_grid, ypp_grid, delta_norm, r_grid, g_grid):
        self.iteration = iteration
        self.coeffs = coeffs
        self.y_grid = y_grid
        self.yp_grid = yp_grid
        self.ypp_grid = ypp_grid
        self.delta_norm = delta_norm
        self.r_grid = r_grid
        self.g_grid = g_grid


class Solution(object):
    """
    The converged (or last) Haar coefficients together with what is needed to evaluate y anywhere in [0, 1].
    """
    def __init__(self, coeffs, bc, basis, history, converged, iters_used, states=None):
        self.coeffs = coeffs
        self.bc = bc
        self.basis = basis
        self.history = list(history)
        self.converged = converged
        self.iters_used = iters_used
        self.states = list(states or [])

    def __repr__(self):
        return "Solution(J={}, iters_used={}, converged={})".format(self.basis.J, self.iters_used, self.converged)

    def evaluate(self, x, order=0):
        return reconstruct(self.coeffs, self.basis, self.bc, x, order)

    def __call__(self, x):
        return self.evaluate(x)

    def bc_residuals(self):
        """
        :return: The absolute violations of both boundary conditions.
        """
        y0, y1 = self.evaluate(np.array([0.0, 1.0]))
        dy0, dy1 = self.evaluate(np.array([0.0, 1.0]), order=1)
        return self.bc.residuals(y0, dy0, y1, dy1)


def linearize(spec, y_n, x):
    """
    Computes the linearized coefficients at the given abscissae.

    :param spec: The ProblemSpec.
    :param y_n: The previous iterate at x.
    :param x: Points in (0, 1).
    :return: A tuple ``(r, g)`` with ``r = -q f_y(x, y_n)`` and ``g = q (f(x, y_n) - y_n f_y(x, y_n))``.
    """
    x = np.asarray(x, dtype=float)
    y_n = np.asarray(y_n, dtype=float)
    if not np.all(np.isfinite(y_n)):
        bad = ~np.isfinite(np.atleast_1d(y_n))
        raise NonFiniteEvaluation("y_n", np.atleast_1d(x)[np.argmax(bad)])
    y = spec.guard(x, y_n)
    q = _evaluate("q", spec.q, x)
    f = _evaluate("f", spec.f, x, y)
    f_y = _evaluate("f_y", spec.f_y, x, y)
    r = -q * f_y
    g = q * (f - y * f_y)
    if r.ndim == 0:
        return float(r), float(g)
    return r, g


def _collocation_system(basis, bc, p, dp, r, g):
    x = basis.grid
    base2, d2 = bc.design(2, x, basis.h_grid, basis.c1)
    base1, d1 = bc.design(1, x, basis.p1_grid, basis.c1)
    base0, d0 = bc.design(0, x, basis.p2_grid, basis.c1)
    matrix = p[:, None] * d2 + dp[:, None] * d1 + r[:, None] * d0
    rhs = g - p * base2 - dp * base1 - r * base0
    return DenseSystem(matrix, rhs)


def _assemble(spec, basis, y_n, family):
    if not isinstance(spec.bc, family):
        raise InvalidBC("Expected a {} condition, got {!r}.".format(family.kind, spec.bc))
    p, dp, _ = spec.coefficients(basis.grid)
    r, g = linearize(spec, y_n, basis.grid)
    return _collocation_system(basis, spec.bc, p, dp, r, g)


def assemble_dirichlet(spec, basis, y_n):
    """
    Builds the collocation system of one sweep for Dirichlet conditions.

    Row j holds ``p h_i + p' (p_{i,1} - C_{i,1}) + r (p_{i,2} - C_{i,1} x_j)`` in column i and the right hand side
    ``g - p' (beta - alpha) - r (alpha + (beta - alpha) x_j)``.

    :param y_n: The previous iterate at the collocation grid.
    :return: A DenseSystem.
    """
    return _assemble(spec, basis, y_n, Dirichlet)


def assemble_robin(spec, basis, y_n):
    """
    Builds the collocation system of one sweep for Neumann-Robin conditions.

    Row j holds ``p h_i + p' p_{i,1} + r (p_{i,2} - C_{i,1})`` in column i, with ``-r beta/alpha`` added to the a_1
    column, and the right hand side ``g - r gamma/alpha``.
    """
    return _assemble(spec, basis, y_n, NeumannRobin)


def reconstruct(coeffs, basis, bc, x, order=0):
    """
    Evaluates y, y' or y'' of the Haar solution in closed form.

    :param coeffs: The 2M Haar coefficients of y''.
    :param basis: The HaarBasis the coefficients belong to.
    :param bc: The boundary condition the reconstruction formulas are built for.
    :param x: Scalar or array in [0, 1] ([0, 1) for order 2).
    :param order: 0, 1 or 2.
    :return: A float for scalar x, otherwise an array.
    """
    if order not in (0, 1, 2):
        raise OutOfRange("order", order, "{0, 1, 2}")
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.size,):
        raise OutOfRange("coefficient count", coeffs.shape, "({},)".format(basis.size))
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise OutOfRange("x", x, "[0, 1]")
    matrix = (basis.p2_matrix, basis.p1_matrix, basis.h_matrix)[order](arr)
    base, design = bc.design(order, arr, matrix, basis.c1)
    values = base + design.dot(coeffs)
    return float(values[0]) if scalar else values


def _grid_values(coeffs, basis, bc):
    x = basis.grid
    values = []
    for order, matrix in enumerate((basis.p2_grid, basis.p1_grid, basis.h_grid)):
        base, design = bc.design(order, x, matrix, basis.c1)
        values.append(base + design.dot(coeffs))
    return values


def solve(spec, config):
    """
    Runs the quasilinearization sweeps: linearize, assemble, Gauss solve, reconstruct.

    The iteration stops when the sup-norm of successive grid iterates is at most ``config.tol_outer`` or after
    ``config.max_iters`` sweeps. Not converging is reported through ``Solution.converged``, not raised.

    :param spec: The ProblemSpec.
    :param config: The SolverConfig.
    :return: A Solution.
    """
    basis = HaarBasis(config.J)
    x = basis.grid
    p, dp, _ = spec.coefficients(x)

    if config.initial_guess is not None:
        y_n = _evaluate("initial_guess", config.initial_guess, x)
    else:
        y_n = spec.bc.baseline(x)

    if spec.domain_guard is not None and np.any(spec.guard(x, y_n) != y_n):
        logger.warning("Domain guard is active on the initial guess of %s.", spec.name)

    history = []
    states = []
    coeffs = np.zeros(basis.size)
    converged = False
    for iteration in range(1, config.max_iters + 1):
        try:
            r, g = linearize(spec, y_n, x)
            system = _collocation_system(basis, spec.bc, p, dp, r, g)
            coeffs = gauss_solve(system, config.pivot_floor_factor, config.tol_solve)
        except HaarQLError as e:
            raise SolverIterationError(iteration, e)

        y_next, yp_next, ypp_next = _grid_values(coeffs, basis, spec.bc)
        delta = float(np.max(np.abs(y_next - y_n)))
        history.append(delta)
        states.append(QlinState(iteration, coeffs, y_next, yp_next, ypp_next, delta, r, g))
        logger.debug("%s iteration %d: |dy| = %.3e", spec.name, iteration, delta)
        y_n = y_next

        if delta <= config.tol_outer:
            converged = True
            break

    if converged:
        logger.info("%s converged after %d sweeps at J=%d.", spec.name, len(history), config.J)
    else:
        logger.info("%s stopped after %d sweeps at J=%d with |dy| = %.3e.", spec.name, len(history), config.J,
                    history[-1])
    return Solution(coeffs, spec.bc, basis, history, converged, len(history), states)


def convergence_history(solution):
    """
    :return: The list of ``(n, ||y_n - y_{n-1}||_inf)`` pairs of a solve.
    """
    return [(n, delta) for n, delta in enumerate(solution.history, 1)]


def quadratic_ratios(history, floor=1e-12):
    """
    Ratios ``delta_{n+1} / delta_n**2`` of a delta history, used to check the quadratic outer rate.

    Only pairs where both deltas exceed 100 times ``floor`` are kept; once the numerator reaches roundoff the ratio
    no longer measures the rate.

    :param history: Successive-difference norms, a list of floats or ``convergence_history`` pairs.
    :param floor: The roundoff level of the grid iterates.
    :return: A list of ``(n, ratio)`` with n the index of delta_n.
    """
    deltas = [item[1] if isinstance(item, tuple) else item for item in history]
    threshold = 100.0 * floor
    ratios = []
    for n in range(len(deltas) - 1):
        if deltas[n] > threshold and deltas[n + 1] > threshold:
            ratios.append((n + 1, deltas[n + 1] / deltas[n] ** 2))
    return ratios


def collocation_residual(spec, solution, linearized=False):
    """
    The residual of the differential equation at the collocation grid.

    :param linearized: When True use the last sweep's r and g (the solved system), otherwise the nonlinear
        equation ``p y'' + p' y' - q f(x, y)`` with the final iterate.
    :return: An array with one residual per grid point.
    """
    basis = solution.basis
    x = basis.grid
    p, dp, q = spec.coefficients(x)
    y, yp, ypp = _grid_values(solution.coeffs, basis, solution.bc)
    if linearized:
        state = solution.states[-1]
        return p * ypp + dp * yp + state.r_grid * y - state.g_grid
    return p * ypp + dp * yp - q * _evaluate("f", spec.f, x, spec.guard(x, y))
