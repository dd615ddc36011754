# -*- coding: utf-8 -*-

# Copyright 2026 The wafflecert developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
Central record of numeric tolerances and caps.

All modules take their defaults from DEFAULTS. A run may override single
values from a JSON config file and from the "tolerances" object of the input
document; load_config merges both over the defaults, in that order.

Example config file:
    {"ratio_rel_tol": 1e-10, "boundary_samples": 1024}
"""

from collections import namedtuple
import json
import logging
import re

from .errors import PreconditionError

logger = logging.getLogger(__name__)

Tolerances = namedtuple(
    "Tolerances",
    [
        "detTol",
        "traceMargin",
        "relatorDefect",
        "endpointTol",
        "geodesicTol",
        "tangencyAngle",
        "mergeTol",
        "fillingMargin",
        "orientationCap",
        "automorphismCap",
        "isomorphismLimit",
        "strandTol",
        "strandIterations",
        "euclideanTol",
        "ratioRelTol",
        "visualEpsilon",
        "visualDelta",
        "boundarySamples",
        "coarseGridStep",
        "saturationSteps",
        "quadratureTol",
    ],
)

DEFAULTS = Tolerances(
    detTol=1e-12,
    traceMargin=1e-9,
    relatorDefect=1e-8,
    endpointTol=1e-9,
    geodesicTol=1e-9,
    tangencyAngle=1e-6,
    mergeTol=1e-9,
    fillingMargin=1.0,
    orientationCap=10**6,
    automorphismCap=5000,
    isomorphismLimit=10**5,
    strandTol=1e-9,
    strandIterations=10**5,
    euclideanTol=1e-12,
    ratioRelTol=1e-9,
    visualEpsilon=0.1,
    visualDelta=1.1,
    boundarySamples=4096,
    coarseGridStep=0.02,
    saturationSteps=4,
    quadratureTol=1e-10,
)

# caps are counts, everything else is a positive real
INTEGER_FIELDS = (
    "orientationCap",
    "automorphismCap",
    "isomorphismLimit",
    "strandIterations",
    "boundarySamples",
    "saturationSteps",
)


class ConfigError(PreconditionError):
    """raised for unknown or invalid configuration entries"""

    def __init__(self, key, message):
        super().__init__("config entry '%s': %s" % (key, message))
        self.key = key


def snake_name(fieldName):
    """config field name as used in JSON documents, e.g. detTol -> det_tol"""
    return re.sub(r"([A-Z])", r"_\1", fieldName).lower()


FIELD_FOR_KEY = {snake_name(name): name for name in Tolerances._fields}


def coerce_value(key, value):
    """check a single override and return it with the proper type"""
    fieldName = FIELD_FOR_KEY[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, "expected a number, got %r" % (value,))
    if fieldName in INTEGER_FIELDS:
        if int(value) != value:
            raise ConfigError(key, "expected an integer, got %r" % (value,))
        value = int(value)
    if value <= 0:
        raise ConfigError(key, "must be positive")
    return value


def apply_overrides(base, overrides, source="overrides"):
    """
    return a copy of base with the given overrides applied

    Parameters
    ----------
    base : Tolerances
        the record to start from.
    overrides : dict
        snake_case keys (as in JSON documents) mapped to new values.
    source : str, optional
        name of the origin, only used for logging.

    Raises
    ------
    ConfigError
        for unknown keys or values of the wrong type.
    """
    changes = {}
    for key, value in overrides.items():
        if key not in FIELD_FOR_KEY:
            raise ConfigError(key, "unknown tolerance")
        changes[FIELD_FOR_KEY[key]] = coerce_value(key, value)
        logger.info("%s: %s set to %r", source, key, value)
    return base._replace(**changes)


def load_config(path=None, overrides=None, base=DEFAULTS):
    """
    build the effective tolerance record of a run

    Parameters
    ----------
    path : path, optional
        JSON config file with a single object of overrides.
    overrides : dict, optional
        overrides taken from the input document, applied after the file.
    base : Tolerances, optional
        The default is DEFAULTS.

    Returns
    -------
    config : Tolerances
    """
    config = base
    if path is not None:
        with open(path, "r") as configFile:
            try:
                fileOverrides = json.load(configFile)
            except json.JSONDecodeError as ex:
                raise ConfigError(str(path), "not valid JSON: %s" % ex) from ex
        if not isinstance(fileOverrides, dict):
            raise ConfigError(str(path), "must contain a JSON object")
        config = apply_overrides(config, fileOverrides, source=str(path))
    if overrides:
        config = apply_overrides(config, overrides, source="input tolerances")
    return config


def config_echo(config):
    """the record as a JSON-ready dict with snake_case keys"""
    return {snake_name(name): value for name, value in config._asdict().items()}
