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
The commands behind the command line: table reproduction, convergence studies, the integral-form oracle and
solving user problem files. Every command returns a list of ReportSection; rendering is left to the caller.
"""

import logging
from queue import Queue
from threading import Thread
import numpy as np
from .catalog import CASE_IDS, PROBE_POINTS, all_cases, exact_eval, get_case
from .exceptions import OutOfRange
from .greens import kernel_spec, probe_grid, refinement_study
from .io import FORMATS, ReportSection, export_catalog, export_report, import_
from .linalg import DEFAULT_PIVOT_FLOOR, DEFAULT_TOL_SOLVE
from .solver import SolverConfig, solve

logger = logging.getLogger("haarql.bench")

COMMANDS = ("solve", "bench", "converge", "oracle", "catalog")
BENCH_COLUMNS = ["x", "y_h", "exact", "e_a", "paper_y_h", "paper_e_a", "paper_diff"]
CONVERGE_COLUMNS = ["J", "2M", "max_error", "ratio", "iters", "delta_history"]
ORACLE_COLUMNS = ["n_quad", "residual", "change"]
SOLVE_COLUMNS = ["x", "y", "dy"]
HISTORY_COLUMNS = ["iteration", "delta"]


def parse_probes(text):
    """
    Parses a comma separated list of abscissae in [0, 1].

    :return: A tuple of floats.
    """
    try:
        probes = tuple(float(item) for item in text.split(",") if item.strip())
    except ValueError:
        raise OutOfRange("probe list", repr(text), "comma separated reals")
    if not probes:
        raise OutOfRange("probe list", repr(text), "at least one point")
    for x in probes:
        if not 0.0 <= x <= 1.0:
            raise OutOfRange("probe point", x, "[0, 1]")
    return probes


class RunConfig(object):
    """
    Everything a command needs, after the settings file and the command line flags were merged.

    :param command: One of COMMANDS.
    :param case_id: Catalogue case, exclusive with problem.
    :param problem: Problem file path, exclusive with case_id.
    :param J: Resolution level, None for the case default.
    :param max_iters: Sweep cap, None for the case default.
    :param tol_outer: Outer tolerance.
    :param format_: "csv" or "markdown" ("json" too for the catalog command).
    :param out: Output path or None for stdout.
    :param probes: Probe abscissae.
    :param all_cases: Run every catalogue case (bench only).
    :param n_quad: Oracle panels per subinterval.
    """
    def __init__(self, command, case_id=None, problem=None, J=None, max_iters=None, tol_outer=1e-10,
                 format_="csv", out=None, probes=PROBE_POINTS, all_cases=False, n_quad=1024,
                 pivot_floor_factor=DEFAULT_PIVOT_FLOOR, tol_solve=DEFAULT_TOL_SOLVE, workers=4, digits=10,
                 J_min=2, J_max=6, probe_count=33):
        if command not in COMMANDS:
            raise OutOfRange("command", command, "{" + ", ".join(COMMANDS) + "}")
        self.command = command
        self.case_id = case_id
        self.problem = problem
        self.J = J
        self.max_iters = max_iters
        self.tol_outer = tol_outer
        self.format_ = format_
        self.out = out
        self.probes = tuple(probes)
        self.all_cases = all_cases
        self.n_quad = n_quad
        self.pivot_floor_factor = pivot_floor_factor
        self.tol_solve = tol_solve
        self.workers = workers
        self.digits = digits
        self.J_min = J_min
        self.J_max = J_max
        self.probe_count = probe_count
        self.validate()

    def validate(self):
        for x in self.probes:
            if not 0.0 <= x <= 1.0:
                raise OutOfRange("probe point", x, "[0, 1]")
        formats = FORMATS + ("json",) if self.command == "catalog" else FORMATS
        if self.format_ not in formats:
            raise OutOfRange("format", self.format_, "{" + ", ".join(formats) + "}")
        if self.command == "catalog":
            return
        sources = sum(1 for item in (self.case_id is not None, self.problem is not None, self.all_cases) if item)
        if sources != 1:
            raise OutOfRange("problem source", "{} given".format(sources), "exactly one of --case, --problem, --all")
        if self.all_cases and self.command != "bench":
            raise OutOfRange("--all", self.command, "the bench command")
        if self.problem is not None and self.command not in ("solve", "oracle"):
            raise OutOfRange("--problem", self.command, "the solve and oracle commands")
        if self.command == "solve" and self.problem is None:
            raise OutOfRange("problem source", "--case", "--problem for the solve command")
        if self.J_min > self.J_max:
            raise OutOfRange("J range", "{}..{}".format(self.J_min, self.J_max), "J_min <= J_max")


def _key(x):
    return round(float(x), 12)


def cmd_bench(case_id, J=None, iters=None, probes=PROBE_POINTS, tol_outer=1e-10, **linalg):
    """
    Solves a catalogue case and compares it to its closed form and its published Haar values and errors.

    :param case_id: The catalogue id.
    :param J: Defaults to the published resolution level.
    :param iters: Defaults to the published number of sweeps.
    :return: A one-section report with BENCH_COLUMNS.
    """
    case = get_case(case_id)
    J = case.paper_J if J is None else J
    iters = case.paper_iters if iters is None else iters
    solution = solve(case.spec, SolverConfig(J=J, max_iters=iters, tol_outer=tol_outer, **linalg))

    published = dict((_key(x), value) for x, value in case.paper_y_h(J).items())
    # printed errors only exist for the published level
    printed = dict((_key(row.x), row.e_a) for row in case.table_rows) if J == case.paper_J else {}
    x = np.asarray(probes, dtype=float)
    y_h = solution.evaluate(x)
    exact = exact_eval(case, x) if case.has_exact else None

    rows = []
    for idx, point in enumerate(probes):
        paper = published.get(_key(point))
        row_exact = None if exact is None else float(exact[idx])
        rows.append([point, float(y_h[idx]), row_exact,
                     None if row_exact is None else abs(row_exact - y_h[idx]),
                     paper, printed.get(_key(point)), None if paper is None else abs(y_h[idx] - paper)])

    notes = ["J={}, sweeps={}, converged={}".format(J, solution.iters_used, solution.converged),
             case.provenance_note]
    logger.info("Benchmarked case %s at J=%d.", case.case_id, J)
    return [ReportSection("Case {}: {}".format(case.case_id, case.name), BENCH_COLUMNS, rows, notes)]


def max_grid_error(solution, reference):
    """
    The largest |reference - y_h| over the collocation grid of the solution.

    :param reference: A vectorised callable, the exact solution or a finer solve.
    """
    grid = solution.basis.grid
    return float(np.max(np.abs(np.asarray(reference(grid), dtype=float) - solution.evaluate(grid))))


def convergence_rows(spec, exact, J_values, max_iters=12, tol_outer=1e-10, **linalg):
    """
    Rows of a resolution study: (J, 2M, max_error, ratio, iters, delta_history).

    ``ratio`` on row J is err(J) / err(J+1), left empty on the last row. Without an exact solution a solve two
    levels above the finest requested one stands in for it.
    """
    J_values = list(J_values)
    if exact is None:
        reference = solve(spec, SolverConfig(J=max(J_values) + 2, max_iters=max_iters, tol_outer=tol_outer,
                                             **linalg))
        exact = reference.evaluate
        logger.info("Using a J=%d solve as reference for %s.", max(J_values) + 2, spec.name)

    solutions = [solve(spec, SolverConfig(J=J, max_iters=max_iters, tol_outer=tol_outer, **linalg))
                 for J in J_values]
    errors = [max_grid_error(solution, exact) for solution in solutions]

    rows = []
    for idx, (J, solution) in enumerate(zip(J_values, solutions)):
        ratio = None
        if idx + 1 < len(errors) and errors[idx + 1] > 0.0:
            ratio = errors[idx] / errors[idx + 1]
        rows.append([J, solution.basis.size, errors[idx], ratio, solution.iters_used, list(solution.history)])
    return rows


def cmd_converge(case_id, J_min=2, J_max=6, max_iters=12, tol_outer=1e-10, **linalg):
    """
    Resolution study of a catalogue case against its closed form (or a finer solve when it has none).

    :return: A one-section report with CONVERGE_COLUMNS.
    """
    case = get_case(case_id)
    exact = case.exact if case.has_exact else None
    rows = convergence_rows(case.spec, exact, range(J_min, J_max + 1), max_iters, tol_outer, **linalg)
    notes = ["reference: {}".format("closed form" if exact is not None else "J={} solve".format(J_max + 2))]
    return [ReportSection("Case {}: resolution study".format(case.case_id), CONVERGE_COLUMNS, rows, notes)]


def cmd_oracle(case_id=None, problem=None, J=4, n_quad=1024, max_iters=12, tol_outer=1e-10, probe_count=33,
               **linalg):
    """
    Checks a solve against the integral form of the problem under repeated doubling of the quadrature.

    Raises ``UnavailableKernel`` when the Dirichlet kernel does not exist for the problem's p.

    :param case_id: A catalogue case, or
    :param problem: A problem file path.
    :return: The solver residual section, plus one for the closed form solution when the case has one.
    """
    if problem is not None:
        spec = import_(problem)
        ks = kernel_spec(spec)
        exact = None
        title = spec.name
    else:
        case = get_case(case_id)
        spec = case.spec
        ks = case.kernel_spec()
        exact = case.exact
        title = "Case {}".format(case.case_id)

    solution = solve(spec, SolverConfig(J=J, max_iters=max_iters, tol_outer=tol_outer, **linalg))
    probes = probe_grid(probe_count)
    notes = ["{} kernel, J={}, sweeps={}, converged={}".format(ks.family, J, solution.iters_used,
                                                                solution.converged)]
    sections = [ReportSection("{}: integral residual of the Haar solution".format(title), ORACLE_COLUMNS,
                              refinement_study(solution, spec, ks, n_quad, probes=probes), notes)]
    if exact is not None:
        sections.append(ReportSection("{}: integral residual of the closed form".format(title), ORACLE_COLUMNS,
                                      refinement_study(exact, spec, ks, n_quad, probes=probes)))
    return sections


def cmd_solve(problem, J=3, iters=12, tol_outer=1e-10, probes=PROBE_POINTS, **linalg):
    """
    Solves a problem file.

    :return: The probe values section and the iteration history section.
    """
    spec = import_(problem)
    solution = solve(spec, SolverConfig(J=J, max_iters=iters, tol_outer=tol_outer, **linalg))
    x = np.asarray(probes, dtype=float)
    values = solution.evaluate(x)
    slopes = solution.evaluate(x, order=1)
    bc_left, bc_right = solution.bc_residuals()
    notes = ["J={}, sweeps={}, converged={}".format(J, solution.iters_used, solution.converged),
             "boundary residuals: {:.3e}, {:.3e}".format(bc_left, bc_right)]
    rows = [[point, float(values[idx]), float(slopes[idx])] for idx, point in enumerate(probes)]
    history = [[n, delta] for n, delta in enumerate(solution.history, 1)]
    return [ReportSection("{}: solution".format(spec.name), SOLVE_COLUMNS, rows, notes),
            ReportSection("{}: iteration history".format(spec.name), HISTORY_COLUMNS, history)]


class BenchWorker(Thread):
    """
    Takes case ids off the job queue and puts ``(index, sections, error)`` on the result queue.

    A None job stops the worker.
    """
    def __init__(self, jobs, results, options):
        super().__init__(daemon=True)
        self.jobs = jobs
        self.results = results
        self.options = options

    def run(self):
        while True:
            # wait for next case
            job = self.jobs.get()
            if job is None:
                break

            index, case_id = job
            try:
                self.results.put((index, cmd_bench(case_id, **self.options), None))
            except Exception as e:
                # re-raised by the dispatcher once every job is done
                self.results.put((index, None, e))


class BenchDispatcher(object):
    """
    Runs cmd_bench for several cases on worker threads. Results are assembled in case order.

    :param workers: The number of worker threads.
    :param options: Keyword arguments for cmd_bench.
    """
    def __init__(self, workers=4, **options):
        if workers < 1:
            raise OutOfRange("workers", workers, "[1, inf)")
        self.workers = workers
        self.options = options

    def run(self, case_ids=CASE_IDS):
        """
        :return: The concatenated sections. The first error by case order is raised after every job finished.
        """
        jobs = Queue()
        results = Queue()
        case_ids = list(case_ids)
        for index, case_id in enumerate(case_ids):
            jobs.put((index, case_id))

        threads = [BenchWorker(jobs, results, self.options) for _ in range(min(self.workers, len(case_ids)))]
        for thread in threads:
            jobs.put(None)
            thread.start()
        for thread in threads:
            thread.join()

        collected = sorted((results.get() for _ in case_ids), key=lambda item: item[0])
        errors = [error for _, _, error in collected if error is not None]
        if errors:
            raise errors[0]
        sections = []
        for _, case_sections, _ in collected:
            sections.extend(case_sections)
        return sections


def run(config):
    """
    Executes a RunConfig and writes its report.

    :return: The rendered report text.
    """
    linalg = {"pivot_floor_factor": config.pivot_floor_factor, "tol_solve": config.tol_solve}
    if config.command == "catalog":
        return export_catalog(all_cases(), config.format_, config.out)

    if config.command == "bench":
        options = dict(J=config.J, iters=config.max_iters, probes=config.probes, tol_outer=config.tol_outer,
                       **linalg)
        if config.all_cases:
            sections = BenchDispatcher(config.workers, **options).run()
        else:
            sections = cmd_bench(config.case_id, **options)
    elif config.command == "converge":
        sections = cmd_converge(config.case_id, config.J_min, config.J_max, config.max_iters or 12,
                                config.tol_outer, **linalg)
    elif config.command == "oracle":
        sections = cmd_oracle(config.case_id, config.problem, 4 if config.J is None else config.J, config.n_quad,
                              config.max_iters or 12, config.tol_outer, config.probe_count, **linalg)
    else:
        sections = cmd_solve(config.problem, 3 if config.J is None else config.J, config.max_iters or 12,
                             config.tol_outer, config.probes, **linalg)
    return export_report(sections, config.format_, config.out, config.digits)
