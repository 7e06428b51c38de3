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
from copy import deepcopy
from json import JSONDecodeError
from os import makedirs
from os.path import dirname, expanduser, join
from jsonpickle import decode, encode, set_encoder_options
from .exceptions import FileAccessError

logger = logging.getLogger("haarql.settings")

default_settings = {
    "Solver": {
        "J": 3,
        "max_iters": 12,
        "tol_outer": 1e-10,
    },
    "Linalg": {
        "pivot_floor_factor": 1e-13,
        "tol_solve": 1e-10,
    },
    "Oracle": {
        "n_quad": 1024,
        "probe_count": 33,
    },
    "Output": {
        "format": "csv",
        "probe": "0.1,0.3,0.5,0.7,0.9",
        "digits": 10,
    },
    "Bench": {
        "workers": 4,
    },
}


def settings_path():
    return join(expanduser("~"), ".haarql", "settings.json")


def deep_merge(a, b, path=None):
    """merges b into a"""
    if path is None:
        path = []
    for key in b:
        if key in a:  # only accept the keys in default settings
            if isinstance(a[key], dict) and isinstance(b[key], dict):
                deep_merge(a[key], b[key], path + [str(key)])
            elif isinstance(b[key], type(a[key])) or (isinstance(a[key], float) and isinstance(b[key], int)
                                                      and not isinstance(b[key], bool)):
                a[key] = type(a[key])(b[key])
            else:
                logger.warning("Ignoring setting %s, expected %s.", ".".join(path + [str(key)]),
                               type(a[key]).__name__)
    return a


def read_settings(path=None):
    """
    Reads the settings from the ~/.haarql/settings.json file. If such a file does not exist it uses the default
    settings. Unknown keys and values of the wrong type are ignored.
    A file that exists but can't be read raises FileAccessError.

    :param path: Reads this file instead of the default one.
    :return: A new settings dict.
    """
    settings = deepcopy(default_settings)
    try:
        with open(path or settings_path(), "r", encoding="utf-8") as configfile:
            settings_dict = decode(configfile.read())
    except FileNotFoundError:
        return settings
    except OSError as e:
        raise FileAccessError("read", path or settings_path(), e.strerror or e.__class__.__name__)
    except (JSONDecodeError, UnicodeDecodeError):
        logger.warning("The settings file is not valid JSON, using the defaults.")
        return settings
    if isinstance(settings_dict, dict):
        deep_merge(settings, settings_dict)
    return settings


def write_settings(settings, path=None):
    """
    Saves the settings dict, creating the ~/.haarql folder when needed.
    """
    path = path or settings_path()
    makedirs(dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as configfile:
        set_encoder_options("json", indent=4)
        configfile.write(encode(settings))
