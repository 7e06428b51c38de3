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
Integral form of the problem, used to cross-check solver output.

With ``b(x) = int_0^x dt / p(t)`` and the tail ``T(t) = b(1) - b(t)``, the kernels are

    Dirichlet: G(x, t) = b(min(x, t)) T(max(x, t)) / b(1),   v(x) = alpha + (beta - alpha) b(x) / b(1)
    Robin:     G(x, t) = T(max(x, t)) + beta / (alpha p(1)),   v(x) = gamma / alpha

and a solution satisfies ``y(x) = v(x) - int_0^1 G(x, t) q(t) f(t, y(t)) dt``.
"""

import logging
import math
import numpy as np
from .exceptions import OutOfRange, QuadratureNonFinite, UnavailableKernel
from .solver import Dirichlet, NeumannRobin

logger = logging.getLogger("haarql.greens")

B_TOLERANCE = 1e-9
_MAX_PANELS = 2 ** 20
_TABLE_T_MIN = 1e-14
_TABLE_POINTS = 2 ** 15


def graded_midpoint_rule(a, b, n, toward="a"):
    """
    Midpoint nodes and weights of n panels on [a, b], graded quadratically toward one endpoint.

    The rule is the composite midpoint rule in s for ``t = a + (b - a) s**2`` (or mirrored), so the graded
    endpoint is never evaluated and integrable singularities like ``t**-0.5`` are integrated exactly.

    :param toward: "a" or "b", the endpoint the panels cluster at. Anything else gives uniform panels.
    :return: A tuple ``(nodes, weights)``.
    """
    s = (np.arange(n) + 0.5) / n
    width = b - a
    if toward == "a":
        return a + width * s * s, 2.0 * width * s / n
    elif toward == "b":
        return b - width * s * s, 2.0 * width * s / n
    return a + width * s, np.full(n, width / n)


def _values(func, t):
    t = np.asarray(t, dtype=float)
    return np.array(np.broadcast_to(np.asarray(func(t), dtype=float), t.shape), dtype=float)


def _integrate(func, nodes, weights, what):
    values = np.asarray(func(nodes), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        raise QuadratureNonFinite(what, nodes[np.argmax(bad)])
    return float(np.dot(weights, values))


def endpoint_exponent(p, eps=1e-8):
    """
    Estimates a in ``p(t) ~ t**a`` near t = 0. ``1/p`` is integrable at 0 only for a < 1.
    """
    values = _values(p, np.array([eps, 2.0 * eps]))
    return math.log(values[1] / values[0]) / math.log(2.0)


def b_eval(spec, x, analytic_b=None, tol=B_TOLERANCE):
    """
    b(x), the integral of 1/p over (0, x].

    :param spec: The ProblemSpec.
    :param x: Scalar or array in (0, 1].
    :param analytic_b: Closed form b, used instead of quadrature when given.
    :param tol: The tolerance of successive graded-midpoint refinements.
    :return: A float for scalar x, otherwise an array.
    """
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise OutOfRange("x", x, "(0, 1]")
    if analytic_b is not None:
        values = np.asarray(analytic_b(arr), dtype=float)
        return float(values[0]) if scalar else values

    if endpoint_exponent(spec.p) >= 1.0 - 1e-6:
        raise UnavailableKernel("Dirichlet", "1/p is not integrable at 0, b(x) diverges.")

    def reciprocal(t):
        return 1.0 / _values(spec.p, t)

    values = np.empty(arr.shape)
    for idx, upper in enumerate(arr):
        n = 64
        previous = _integrate(reciprocal, *graded_midpoint_rule(0.0, upper, n), what="1/p")
        while True:
            n *= 2
            current = _integrate(reciprocal, *graded_midpoint_rule(0.0, upper, n), what="1/p")
            if abs(current - previous) <= tol * max(1.0, abs(current)):
                break
            if n >= _MAX_PANELS:
                raise UnavailableKernel("Dirichlet", "the quadrature of b({}) does not settle.".format(upper))
            previous = current
        values[idx] = current
    return float(values[0]) if scalar else values


class _TailTable(object):
    """
    Tabulated ``T(t) = int_t^1 ds / p(s)`` on a logarithmic grid, for problems without a closed form tail.
    """
    def __init__(self, p):
        self.log_s = np.linspace(math.log(_TABLE_T_MIN), 0.0, _TABLE_POINTS)
        s = np.exp(self.log_s)
        integrand = s / _values(p, s)
        bad = ~np.isfinite(integrand)
        if np.any(bad):
            raise QuadratureNonFinite("1/p", s[np.argmax(bad)])
        steps = np.diff(self.log_s) * 0.5 * (integrand[1:] + integrand[:-1])
        self.values = np.concatenate((np.cumsum(steps[::-1])[::-1], [0.0]))

    def __call__(self, t):
        return np.interp(np.log(np.asarray(t, dtype=float)), self.log_s, self.values)


class KernelSpec(object):
    """
    What the Green's kernels need from a problem.

    :param bc: The boundary condition, selects the kernel family.
    :param tail: T(t) = b(1) - b(t) on (0, 1].
    :param b: b(x), None when 1/p is not integrable at 0 (Dirichlet kernel unavailable).
    :param b1: b(1), None together with b.
    :param b1_prime: 1/p(1).
    :param b_is_analytic: True when b and the tail are closed forms.
    """
    def __init__(self, bc, tail, b, b1, b1_prime, b_is_analytic):
        self.bc = bc
        self.tail = tail
        self.b = b
        self.b1 = b1
        self.b1_prime = b1_prime
        self.b_is_analytic = b_is_analytic

    @property
    def family(self):
        return "Dirichlet" if isinstance(self.bc, Dirichlet) else "Robin"

    def check_available(self):
        if isinstance(self.bc, Dirichlet) and self.b is None:
            raise UnavailableKernel("Dirichlet", "1/p is not integrable at 0, b(1) is infinite.")


def kernel_spec(spec, analytic_b=None, analytic_tail=None, b_diverges=False):
    """
    Builds the KernelSpec of a problem.

    :param spec: The ProblemSpec.
    :param analytic_b: Closed form b(x), when known.
    :param analytic_tail: Closed form T(t) = b(1) - b(t), when known.
    :param b_diverges: Marks b as divergent without probing p (catalogue problems know this).
    :return: A KernelSpec. Raises UnavailableKernel for a Dirichlet problem whose b diverges.
    """
    b1_prime = 1.0 / float(_values(spec.p, np.array([1.0]))[0])
    analytic = analytic_tail is not None and (analytic_b is not None or b_diverges)
    tail = analytic_tail if analytic_tail is not None else _TailTable(spec.p)

    if b_diverges or (analytic_b is None and endpoint_exponent(spec.p) >= 1.0 - 1e-6):
        b = b1 = None
    elif analytic_b is not None:
        b = analytic_b
        b1 = float(_values(analytic_b, np.array([1.0]))[0])
    else:
        b1 = b_eval(spec, 1.0)

        def b(x):
            return b1 - tail(x)

    ks = KernelSpec(spec.bc, tail, b, b1, b1_prime, analytic)
    ks.check_available()
    return ks


def greens_kernel(ks, x, t):
    """
    G(x, t) for the kernel family selected by ``ks.bc``. Vectorised over x and t (broadcasting).

    :param ks: The KernelSpec.
    :param x: Points in (0, 1].
    :param t: Points in (0, 1].
    :return: The kernel values, nonnegative under the usual sign conditions.
    """
    ks.check_available()
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(x <= 0.0) or np.any(x > 1.0) or np.any(t <= 0.0) or np.any(t > 1.0):
        raise OutOfRange("(x, t)", "({}, {})".format(x, t), "(0, 1] x (0, 1]")
    low = np.minimum(x, t)
    high = np.maximum(x, t)
    if isinstance(ks.bc, Dirichlet):
        values = _values(ks.b, low) * _values(ks.tail, high) / ks.b1
    else:
        values = _values(ks.tail, high) + ks.bc.beta * ks.b1_prime / ks.bc.alpha
    return float(values) if values.ndim == 0 else values


def v_eval(ks, x):
    """
    The part of the integral form fixed by the boundary data.
    """
    ks.check_available()
    x = np.asarray(x, dtype=float)
    if isinstance(ks.bc, NeumannRobin):
        values = np.full(x.shape, ks.bc.gamma / ks.bc.alpha)
    else:
        values = ks.bc.alpha + (ks.bc.beta - ks.bc.alpha) * _values(ks.b, x) / ks.b1
    return float(values) if values.ndim == 0 else values


def probe_grid(count=33):
    """
    ``count`` equally spaced interior points, k / (count + 1).
    """
    return np.arange(1, count + 1) / float(count + 1)


def _solution_function(solution):
    if hasattr(solution, "evaluate"):
        return solution.evaluate
    return solution


def integral_residual_profile(solution, spec, ks, n_quad=1024, probes=None):
    """
    Pointwise residual ``y(x) - v(x) + int_0^1 G(x, t) q(t) f(t, y(t)) dt`` at the probe points.

    The integral is split at t = x where G has a kink: n_quad panels graded toward 0 on (0, x] and n_quad
    uniform panels on [x, 1].

    :param solution: A Solution or any vectorised callable y(x).
    :param spec: The ProblemSpec providing q and f.
    :param ks: The KernelSpec.
    :param n_quad: Panels per subinterval.
    :param probes: Points in (0, 1); defaults to 33 equally spaced interior points.
    :return: An array with one residual per probe.
    """
    ks.check_available()
    y = _solution_function(solution)
    probes = probe_grid() if probes is None else np.asarray(probes, dtype=float)

    def source(t):
        return _values(spec.q, t) * _values(lambda s: spec.f(s, spec.guard(s, y(s))), t)

    residuals = np.empty(probes.shape)
    for idx, x in enumerate(probes):
        integral = 0.0
        for nodes, weights in (graded_midpoint_rule(0.0, x, n_quad, toward="a"),
                               graded_midpoint_rule(x, 1.0, n_quad, toward=None)):
            integral += _integrate(lambda t: greens_kernel(ks, x, t) * source(t), nodes, weights, "G q f")
        residuals[idx] = float(y(x)) - v_eval(ks, x) + integral
    return residuals


def integral_residual(solution, spec, ks, n_quad=1024, probes=None):
    """
    The sup over the probe points of ``integral_residual_profile``.
    """
    return float(np.max(np.abs(integral_residual_profile(solution, spec, ks, n_quad, probes))))


def refinement_study(solution, spec, ks, n_quad=1024, doublings=2, probes=None):
    """
    Residuals under repeated doubling of n_quad.

    :return: A list of ``(n_quad, residual, change)`` rows where change is the sup-norm difference of the
        residual profile to the previous row (None on the first row).
    """
    rows = []
    previous = None
    n = n_quad
    for _ in range(doublings + 1):
        profile = integral_residual_profile(solution, spec, ks, n, probes)
        change = None if previous is None else float(np.max(np.abs(profile - previous)))
        rows.append((n, float(np.max(np.abs(profile))), change))
        logger.debug("Oracle residual with n_quad=%d: %.3e", n, rows[-1][1])
        previous = profile
        n *= 2
    return rows
