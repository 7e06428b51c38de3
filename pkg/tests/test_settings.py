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
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from src.settings import deep_merge, default_settings, read_settings, write_settings
from src.exceptions import FileAccessError


def test_defaults(tmpdir):
    settings = read_settings(str(tmpdir.join("missing.json")))
    assert settings == default_settings
    settings["Solver"]["J"] = 9
    assert default_settings["Solver"]["J"] == 3

    broken = tmpdir.join("broken.json")
    broken.write("{not json")
    assert read_settings(str(broken)) == default_settings

    with pytest.raises(FileAccessError):
        read_settings(str(tmpdir))


def test_deep_merge():
    merged = deep_merge({"Solver": {"J": 3, "tol_outer": 1e-10}, "Output": {"format": "csv"}},
                       {"Solver": {"J": "five", "tol_outer": 1}, "Output": {"format": "markdown"}, "Extra": 1})
    assert merged == {"Solver": {"J": 3, "tol_outer": 1.0}, "Output": {"format": "markdown"}}
    assert isinstance(merged["Solver"]["tol_outer"], float)

    merged = deep_merge({"Solver": {"tol_outer": 1e-10}}, {"Solver": {"tol_outer": True}})
    assert merged["Solver"]["tol_outer"] == 1e-10


def test_write_and_read(tmpdir):
    path = str(tmpdir.join("nested", "settings.json"))
    settings = read_settings(path)
    settings["Solver"]["J"] = 5
    settings["Output"]["format"] = "markdown"
    write_settings(settings, path)

    with open(path, "r", encoding="utf-8") as settings_file:
        assert '    "Solver"' in settings_file.read()
    assert read_settings(path) == settings
