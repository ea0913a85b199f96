"""Generic root counts and positive root bounds of vertically parametrized systems."""

import json
import os

from . import _core
from ._core import BudgetExceeded, Error, ParseError, PreconditionError

__all__ = [
    "BudgetExceeded",
    "Error",
    "ParseError",
    "PreconditionError",
    "count",
    "degree",
    "ksite_system",
    "network_system",
    "positive",
    "set_threads",
    "toric",
]


def _system_text(system):
    # dict, JSON text, or a path to a JSON file
    if isinstance(system, dict):
        return json.dumps(system)
    if isinstance(system, (str, os.PathLike)) and os.path.exists(system):
        with open(system) as f:
            return f.read()
    return str(system)


def count(system, strategy="auto", seed=0, separate_parameters=False, search="circuits"):
    return json.loads(_core.count(_system_text(system), strategy, seed, separate_parameters, search))


def positive(system, attempts=32, seed=0, separate_parameters=False):
    return json.loads(_core.positive(_system_text(system), attempts, seed, separate_parameters))


def toric(system, exponent_matrix, attempts=32, seed=0):
    return json.loads(_core.toric(_system_text(system), exponent_matrix, attempts, seed))


def degree(system, seed=0):
    return json.loads(_core.degree(_system_text(system), seed))


def network_system(text):
    return json.loads(_core.network_system(text))


def ksite_system(k):
    return json.loads(_core.ksite_system(k))


def set_threads(n):
    _core.set_threads(n)
