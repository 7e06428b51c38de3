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

import sys
from traceback import print_tb
from io import StringIO
from . import __version__

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_ORACLE = 3


def excepthook(exc_type, exc_value, tracebackobj):
    """
    Global function to catch unhandled exceptions.

    :param exc_type: exception type
    :param exc_value: exception value
    :param tracebackobj: traceback object
    """

    notice = (
        "An unhandled exception occurred. Please report the problem together with"
        " the command line and the problem file that triggered it.")
    version_info = __version__
    tbinfofile = StringIO()
    print_tb(tracebackobj, None, tbinfofile)
    tbinfofile.seek(0)
    tbinfo = tbinfofile.read()
    errmsg = 'Error information:\n\nVersion: {}\n{}: {}\n'.format(version_info, str(exc_type), str(exc_value))
    sections = [notice, errmsg, tbinfo]
    sys.stderr.write('\n'.join(sections))


def format_error(error):
    """
    Renders a library error as the structured message printed by the command line.

    :param error: The HaarQLError instance.
    :return: The message text.
    """
    lines = ["error: {}".format(error.title), "  {}".format(error.message)]
    if error.detailed:
        lines.append("  {}".format(error.detailed))
    return "\n".join(lines) + "\n"


class HaarQLError(Exception):
    """
    Base class for all exceptions.
    """
    exit_status = EXIT_SOLVER

    def __init__(self, message="Something happened..."):
        self.title = "Generic Error"
        self.message = message
        self.detailed = ""
        Exception.__init__(self, self.message)


class OutOfRange(HaarQLError, ValueError):
    """
    Exception raised when a basis index, abscissa or derivative order is outside its admissible range.
    """
    exit_status = EXIT_USAGE

    def __init__(self, what, value, allowed):
        self.title = "Range Error"
        self.message = "{} = {} is outside {}.".format(what, value, allowed)
        self.detailed = ""
        self.value = value
        Exception.__init__(self, self.message)


class SingularMatrix(HaarQLError):
    """
    Exception raised when Gauss elimination finds a pivot column whose largest entry is below the pivot floor.
    """
    def __init__(self, column, magnitude, floor):
        self.title = "Singular System"
        self.message = "Pivot column {} has max magnitude {:.3e} <= floor {:.3e}.".format(column, magnitude, floor)
        self.detailed = ""
        self.column = column
        Exception.__init__(self, self.message)


class NonFiniteInput(HaarQLError):
    """
    Exception raised when a linear system contains NaN or infinite entries.
    """
    def __init__(self, where):
        self.title = "Non-finite Input"
        self.message = "The {} contains non-finite entries.".format(where)
        self.detailed = ""
        Exception.__init__(self, self.message)


class NonFiniteEvaluation(HaarQLError):
    """
    Exception raised when a user supplied function returns NaN or inf at a collocation point.
    """
    def __init__(self, name, x):
        self.title = "Non-finite Evaluation"
        self.message = "{} is not finite at x = {!r}.".format(name, float(x))
        self.detailed = ""
        self.name = name
        self.x = float(x)
        Exception.__init__(self, self.message)


class DomainViolation(HaarQLError):
    """
    Exception raised when the domain guard rejects an iterate value.
    """
    def __init__(self, x, value):
        self.title = "Domain Violation"
        self.message = "Iterate value y = {!r} at x = {!r} is outside the admissible domain of f.".format(
            float(value), float(x))
        self.detailed = ""
        self.x = float(x)
        Exception.__init__(self, self.message)


class InvalidBC(HaarQLError):
    """
    Exception raised for malformed boundary conditions.
    """
    exit_status = EXIT_USAGE

    def __init__(self, reason):
        self.title = "Boundary Condition Error"
        self.message = reason
        self.detailed = ""
        Exception.__init__(self, self.message)


class InvalidProblem(HaarQLError):
    """
    Exception raised when p or q is not positive at a collocation point.
    """
    def __init__(self, name, x, value):
        self.title = "Invalid Problem"
        self.message = "{}({!r}) = {!r} must be positive on (0, 1].".format(name, float(x), float(value))
        self.detailed = ""
        Exception.__init__(self, self.message)


class SolverIterationError(HaarQLError):
    """
    Exception raised when a sweep of the outer iteration fails. Keeps the original error around.
    """
    def __init__(self, iteration, cause):
        self.title = cause.title if isinstance(cause, HaarQLError) else "Solver Error"
        self.message = "Sweep {} failed: {}".format(iteration, cause)
        self.detailed = ""
        self.iteration = iteration
        self.cause = cause
        Exception.__init__(self, self.message)


class QuadratureNonFinite(HaarQLError):
    """
    Exception raised when a quadrature node produces a non-finite integrand value.
    """
    def __init__(self, what, t):
        self.title = "Quadrature Error"
        self.message = "{} is not finite at quadrature node t = {!r}.".format(what, float(t))
        self.detailed = ""
        Exception.__init__(self, self.message)


class UnavailableKernel(HaarQLError):
    """
    Exception raised when the Green's kernel of the requested family does not exist for the given p.
    """
    exit_status = EXIT_ORACLE

    def __init__(self, family, reason):
        self.title = "Kernel Unavailable"
        self.message = "The {} kernel is unavailable: {}".format(family, reason)
        self.detailed = "The Dirichlet kernel needs 1/p integrable on (0, 1]."
        Exception.__init__(self, self.message)


class UnknownCase(HaarQLError):
    """
    Exception raised when a benchmark case id is not in the catalogue.
    """
    exit_status = EXIT_USAGE

    def __init__(self, case_id):
        self.title = "Catalogue Error"
        self.message = "There is no benchmark case {!r}; valid ids are 1 to 8.".format(case_id)
        self.detailed = ""
        Exception.__init__(self, self.message)


class NoExactSolution(HaarQLError):
    """
    Exception raised when asking for the closed form of a case that has none.
    """
    def __init__(self, case_id):
        self.title = "Catalogue Error"
        self.message = "Case {} has no closed form solution.".format(case_id)
        self.detailed = ""
        Exception.__init__(self, self.message)


class ProblemFileError(HaarQLError):
    """
    Exception raised when the parser was unable to properly parse a problem file.

    It points at the line and field where the error occurred when known.
    """
    exit_status = EXIT_USAGE

    def __init__(self, reason, line=None, field=None):
        self.title = "Parser Error"
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append("line {}".format(line))
        if field is not None:
            location.append("field '{}'".format(field))
        if location:
            self.message = "The problem file couldn't be read, there was an error around {}: {}".format(
                ", ".join(location), reason)
        else:
            self.message = "The problem file couldn't be read: {}".format(reason)
        self.detailed = ""
        Exception.__init__(self, self.message)


class FileAccessError(HaarQLError):
    """
    Exception raised when a settings or report file can't be read or written.
    """
    exit_status = EXIT_USAGE

    def __init__(self, action, path, reason):
        self.title = "File Error"
        self.path = path
        self.message = "Couldn't {} {}: {}".format(action, path, reason)
        self.detailed = ""
        Exception.__init__(self, self.message)


class BaseInstanceException(Exception):
    """
    Exception raised when trying to instance base classes (not meant to be used).
    """
    def __init__(self, base_instance):
        self.title = "Instance Error"
        self.message = "{} is not meant to be instanced. A subclass should be used instead.".format(type(base_instance))
        self.detailed = ""
        Exception.__init__(self, self.message)
