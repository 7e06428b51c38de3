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

import csv
import logging
from collections import OrderedDict
from io import StringIO
from os.path import basename, splitext
from jsonpickle import encode
from .exceptions import FileAccessError, InvalidBC, OutOfRange, ProblemFileError
from .props import PropertyCombo, PropertyConstant, PropertyExpression, PropertyGuard
from .solver import Dirichlet, NeumannRobin, ProblemSpec

logger = logging.getLogger("haarql.io")

FORMATS = ("csv", "markdown")


def _new_fields():
    return OrderedDict((
        ("p", PropertyExpression("p", ("x",))),
        ("p_prime", PropertyExpression("p_prime", ("x",), required=False)),
        ("q", PropertyExpression("q", ("x",))),
        ("f", PropertyExpression("f", ("x", "y"))),
        ("f_y", PropertyExpression("f_y", ("x", "y"), required=False)),
        ("bc.kind", PropertyCombo("bc.kind", ("dirichlet", "robin"))),
        ("bc.alpha", PropertyConstant("bc.alpha")),
        ("bc.beta", PropertyConstant("bc.beta")),
        ("bc.gamma", PropertyConstant("bc.gamma", required=False)),
        ("guard", PropertyGuard("guard")),
    ))


def _boundary_condition(fields):
    kind = fields["bc.kind"]
    gamma = fields["bc.gamma"]
    try:
        if kind.value == "dirichlet":
            if gamma.is_set:
                raise gamma.error("bc.gamma only applies to robin conditions")
            return Dirichlet(fields["bc.alpha"].number, fields["bc.beta"].number)
        if not gamma.is_set:
            raise ProblemFileError("missing required key", None, "bc.gamma")
        return NeumannRobin(fields["bc.alpha"].number, fields["bc.beta"].number, gamma.number)
    except InvalidBC as e:
        raise fields["bc.alpha"].error(e.message)


def parse_problem(text, name="problem"):
    """
    Parses the text of a problem file into a ProblemSpec.

    One ``key = value`` per line, ``#`` starts a comment. When p_prime or f_y are missing they are differentiated
    symbolically from p and f.

    Raises ``ProblemFileError`` pointing at the offending line and field.

    :param text: The file contents.
    :param name: The display name of the problem.
    :return: The ProblemSpec.
    """
    fields = _new_fields()
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProblemFileError("expected 'key = value'", number)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in fields:
            raise ProblemFileError("unknown key", number, key)
        prop = fields[key]
        if prop.is_set:
            raise ProblemFileError("duplicate key, first set on line {}".format(prop.line), number, key)
        if not value:
            raise ProblemFileError("empty value", number, key)
        prop.set_value(value, number)

    for key, prop in fields.items():
        if prop.required and not prop.is_set:
            raise ProblemFileError("missing required key", None, key)

    bc = _boundary_condition(fields)

    p = fields["p"]
    p_prime = fields["p_prime"]
    if p_prime.is_set:
        p_prime_function = p_prime.function()
    else:
        derivative = p.derivative("x")
        logger.info("Derived p' = %s for %s.", derivative, name)
        p_prime_function = p.function(derivative)

    f = fields["f"]
    f_y = fields["f_y"]
    if f_y.is_set:
        f_y_function = f_y.function()
    else:
        derivative = f.derivative("y")
        logger.info("Derived f_y = %s for %s.", derivative, name)
        f_y_function = f.function(derivative)

    guard = fields["guard"]
    return ProblemSpec(p.function(), fields["q"].function(), f.function(), f_y_function, bc,
                       p_prime=p_prime_function, domain_guard=guard.function() if guard.is_set else None,
                       name=name)


def import_(problem_path):
    """
    Function used to import a problem file from *problem_path*.

    Raises ``ProblemFileError`` if the file could not be read or parsed.

    :param problem_path: The path of the problem file.
    :return: The ProblemSpec, named after the file.
    """
    try:
        with open(problem_path, "r", encoding="utf-8") as problem_file:
            text = problem_file.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ProblemFileError("cannot read {} ({})".format(problem_path, e.__class__.__name__))
    return parse_problem(text, splitext(basename(problem_path))[0])


class ReportSection(object):
    """
    One table of a report.

    :param title: Shown as a heading in markdown output.
    :param columns: The header row.
    :param rows: Sequences of cells: numbers, None (blank), strings or lists of numbers (joined with ';').
    :param notes: Lines printed under the table in markdown output.
    """
    def __init__(self, title, columns, rows, notes=()):
        self.title = title
        self.columns = list(columns)
        self.rows = [list(row) for row in rows]
        self.notes = list(notes)


def format_cell(value, digits=10):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return ";".join(format_cell(item, digits) for item in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return "{:.{}g}".format(float(value), digits)


def _csv_text(sections, digits):
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for index, section in enumerate(sections):
        if index:
            buffer.write("\n")
        writer.writerow(section.columns)
        for row in section.rows:
            writer.writerow([format_cell(cell, digits) for cell in row])
    return buffer.getvalue()


def _markdown_text(sections, digits):
    blocks = []
    for section in sections:
        lines = []
        if section.title:
            lines.extend(["### {}".format(section.title), ""])
        lines.append("| " + " | ".join(section.columns) + " |")
        lines.append("|" + "|".join("---" for _ in section.columns) + "|")
        for row in section.rows:
            lines.append("| " + " | ".join(format_cell(cell, digits) or "-" for cell in row) + " |")
        if section.notes:
            lines.append("")
            lines.extend(section.notes)
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def render_report(sections, format_="csv", digits=10):
    """
    Renders report sections. Sections are separated by a blank line; csv output keeps only header and rows.

    :param sections: A list of ReportSection.
    :param format_: "csv" or "markdown".
    :param digits: Significant digits of floats.
    :return: The report text with LF line endings.
    """
    if format_ == "csv":
        return _csv_text(sections, digits)
    elif format_ == "markdown":
        return _markdown_text(sections, digits)
    raise OutOfRange("format", format_, "{csv, markdown}")


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as output_file:
            output_file.write(text)
    except OSError as e:
        raise FileAccessError("write", path, e.strerror or e.__class__.__name__)


def export_report(sections, format_="csv", path=None, digits=10):
    """
    Renders the sections and writes them to *path* as UTF-8 when given.

    :return: The rendered text.
    """
    text = render_report(sections, format_, digits)
    if path is not None:
        _write_text(path, text)
        logger.info("Report written to %s.", path)
    return text


def _bc_listing(bc):
    listing = OrderedDict((("kind", bc.kind), ("alpha", bc.alpha), ("beta", bc.beta)))
    if isinstance(bc, NeumannRobin):
        listing["gamma"] = bc.gamma
    return listing


def catalog_listing(cases):
    """
    The machine-readable listing of catalogue cases: plain dicts and lists only.
    """
    listing = []
    for case in cases:
        rows = []
        for row in case.table_rows:
            rows.append(OrderedDict((("x", row.x), ("y_h", row.y_h), ("exact", row.exact), ("e_a", row.e_a),
                                     ("reference", OrderedDict(row.reference)))))
        listing.append(OrderedDict((
            ("id", case.case_id),
            ("name", case.name),
            ("paper_J", case.paper_J),
            ("paper_iters", case.paper_iters),
            ("bc", _bc_listing(case.spec.bc)),
            ("has_exact", case.has_exact),
            ("provenance", case.provenance_note),
            ("rows", rows),
        )))
    return listing


def catalog_sections(cases):
    """
    The stored reference tables in the report layout: x, y_h, exact, e_a, then the competing-method columns.
    """
    sections = []
    for case in cases:
        columns = ["x", "y_h", "exact", "e_a"] + list(case.reference_columns)
        rows = []
        for row in case.table_rows:
            rows.append([row.x, row.y_h, row.exact, row.e_a] + [row.reference.get(c) for c in case.reference_columns])
        sections.append(ReportSection("Case {}: {}".format(case.case_id, case.name), columns, rows,
                                      [case.provenance_note]))
    return sections


def export_catalog(cases, format_="csv", path=None):
    """
    Writes the catalogue reference data as csv, markdown or json (jsonpickle, plain JSON without type tags).

    :return: The rendered text.
    """
    if format_ == "json":
        text = encode(catalog_listing(cases), unpicklable=False, indent=4) + "\n"
        if path is not None:
            _write_text(path, text)
        return text
    return export_report(catalog_sections(cases), format_, path)
