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
Typed fields of a problem file.

Expressions use a deliberately small grammar: numbers, the variables x and y, ``+ - * / ^`` with parentheses and the
functions exp, ln and sqrt. Text is checked token by token before it reaches sympy.
"""

import math
import re
import numpy as np
import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from tokenize import TokenError
from .exceptions import BaseInstanceException, ProblemFileError

SYMBOLS = {"x": sympy.Symbol("x", real=True), "y": sympy.Symbol("y", real=True)}
FUNCTIONS = {"exp": sympy.exp, "ln": sympy.log, "sqrt": sympy.sqrt}

_TOKEN = re.compile(r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<name>[A-Za-z_]\w*)|"
                    r"(?P<op>[-+*/^()]))")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)

GUARD_NONZERO_FLOOR = 1e-6
MAX_EXPONENT = 64


def _guard_nonnegative(y):
    return np.maximum(y, 0.0)


def _guard_nonzero(y):
    return np.where(np.abs(y) < GUARD_NONZERO_FLOOR, np.nan, y)


GUARD_KEYWORDS = {"nonnegative": _guard_nonnegative, "nonzero": _guard_nonzero}


def check_tokens(text, variables):
    """
    Rejects anything outside the expression grammar.

    :param text: The expression text.
    :param variables: The variable names allowed in this expression.
    :return: The text, stripped.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty expression")
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            raise ValueError("unexpected character {!r} at column {}".format(text[position], position + 1))
        name = match.group("name")
        if name is not None and name not in FUNCTIONS and name not in variables:
            if name in SYMBOLS:
                raise ValueError("variable '{}' is not allowed here".format(name))
            raise ValueError("unknown name '{}'".format(name))
        position = match.end()
    return text


def _check_exponents(expr):
    for node in sympy.postorder_traversal(expr):
        if not isinstance(node, sympy.Pow) or node.free_symbols:
            continue
        try:
            size = abs(float(node.exp))
        except (TypeError, ValueError):
            continue
        if size > MAX_EXPONENT:
            raise ValueError("constant exponent {:g} exceeds {}".format(size, MAX_EXPONENT))


def parse_expression(text, variables):
    """
    Parses grammar-checked text into a sympy expression.

    :raises ValueError: With a readable reason on any failure.
    """
    text = check_tokens(text, variables)
    local_dict = dict(FUNCTIONS)
    local_dict.update((name, SYMBOLS[name]) for name in variables)
    try:
        # constant powers are evaluated exactly, so they are bounded before sympy gets to evaluate them
        _check_exponents(parse_expr(text, local_dict=local_dict, transformations=_TRANSFORMATIONS, evaluate=False))
        return sympy.sympify(parse_expr(text, local_dict=local_dict, transformations=_TRANSFORMATIONS))
    except (SyntaxError, TokenError, TypeError, sympy.SympifyError) as e:
        raise ValueError("malformed expression ({})".format(e.__class__.__name__))


class _PropertyBase(object):
    """
    Base class for the properties. Shouldn't be used directly.
    """
    def __init__(self, name, values, required=True):
        """
        :param name: The key of the field in the problem file.
        :param values: The acceptable values tuple (variable names for expressions).
        :param required: If the field must be present in the file.
        """
        if type(self) is _PropertyBase:
            raise BaseInstanceException(self)

        self.name = name
        self.required = required

        self.value = None
        self.values = values
        self.line = None

    @property
    def is_set(self):
        return self.value is not None

    def set_value(self, value, line=None):
        """
        Method used to set the property's value. Sub-classes should validate the value before setting it.

        :param value: The value to be validated and set.
        :param line: The problem file line the value came from, used for diagnostics.
        """
        self.line = line
        self.value = value

    def error(self, reason):
        return ProblemFileError(reason, self.line, self.name)


class PropertyExpression(_PropertyBase):
    """
    A property that holds an expression in some of the variables x and y.
    """
    def __init__(self, name, variables, required=True):
        super().__init__(name, tuple(variables), required)
        self.expr = None

    def set_value(self, value, line=None):
        super().set_value(value, line)
        try:
            self.expr = parse_expression(value, self.values)
        except ValueError as e:
            raise self.error(str(e))

    def derivative(self, variable):
        """
        :return: The sympy derivative of the held expression.
        """
        return sympy.diff(self.expr, SYMBOLS[variable])

    def function(self, expr=None):
        """
        A numpy function of the property's variables, in the order they were declared.

        :param expr: Lambdifies this expression instead of the held one (e.g. a derivative).
        """
        expr = self.expr if expr is None else expr
        return sympy.lambdify([SYMBOLS[name] for name in self.values], expr, modules="numpy")


class PropertyConstant(PropertyExpression):
    """
    A property that holds a constant expression such as ``ln(2)`` or ``sqrt(3/4)``.
    """
    def __init__(self, name, required=True):
        super().__init__(name, (), required)
        self.number = None

    def set_value(self, value, line=None):
        super().set_value(value, line)
        try:
            self.number = float(self.expr)
        except (TypeError, ValueError):
            raise self.error("'{}' is not a real constant".format(value))
        if not math.isfinite(self.number):
            raise self.error("'{}' is not finite".format(value))


class PropertyCombo(_PropertyBase):
    """
    A property that holds a combo list - only one value from this list should be selected.
    """
    def __init__(self, name, values, required=True):
        super().__init__(name, values, required)

    def set_value(self, value, line=None):
        value = value.strip().lower()
        if value not in self.values:
            self.line = line
            raise self.error("'{}' is not one of {}".format(value, ", ".join(self.values)))
        super().set_value(value, line)


class PropertyGuard(PropertyExpression):
    """
    A domain guard: one of the GUARD_KEYWORDS or an expression in y returning the admissible value (NaN rejects).
    """
    def __init__(self, name, required=False):
        super().__init__(name, ("y",), required)
        self.keyword = None

    def set_value(self, value, line=None):
        keyword = value.strip().lower()
        if keyword in GUARD_KEYWORDS:
            self.keyword = keyword
            _PropertyBase.set_value(self, keyword, line)
        else:
            super().set_value(value, line)

    def function(self, expr=None):
        if self.keyword is not None:
            return GUARD_KEYWORDS[self.keyword]
        return super().function(expr)
