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

from invoke import task


@task()
def clean(c):
    from shutil import rmtree

    rmtree("dist", ignore_errors=True)
    rmtree("build", ignore_errors=True)
    rmtree("htmlcov", ignore_errors=True)
    rmtree(".pytest_cache", ignore_errors=True)
    print("Build caches cleaned.")


@task()
def docs(c):
    from os import makedirs
    from os.path import join

    makedirs(join("build", "docs"), exist_ok=True)
    c.run("sphinx-build -b html -d {} {} {}".format(join("docs", "build", "doctrees"),
                                                    join("docs", "source"),
                                                    join("build", "docs")))


@task()
def test(c):
    c.run("py.test --cov=src --cov-report term -vv tests/", pty=True)


@task()
def tables(c, out="dist", format_="csv"):
    """
    Writes the benchmark, resolution study and oracle reports of every catalogue case to *out*.
    """
    from os import makedirs
    from os.path import join

    makedirs(out, exist_ok=True)
    extension = "md" if format_ == "markdown" else "csv"
    c.run("python -m src bench --all --format {} --out {}".format(format_, join(out, "bench." + extension)))
    for case_id in range(1, 9):
        for command in ("converge", "oracle"):
            path = join(out, "{}-case{}.{}".format(command, case_id, extension))
            c.run("python -m src {} --case {} --format {} --out {}".format(command, case_id, format_, path))
    print("Reports written to {}.".format(out))


@task()
def catalog(c, out="catalog.json"):
    c.run("python -m src catalog --format json --out {}".format(out))
