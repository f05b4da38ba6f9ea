#!/usr/bin/env python3

"""
This module contains the functions that read run configuration files and turn their sections into typed values.

Configuration files are YAML documents (JSON files are accepted too). Type errors in a section raise `TypeError`
naming the key; values of the right type that violate a precondition raise `ConfigurationError` naming the field.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import yaml

import fraglaw.defaults
from fraglaw.densities import CutDensity, LogBoxDensity, PiecewiseConstantDensity, UniformDensity, LOG10_HALF
from fraglaw.errors import ConfigurationError, InvalidArgumentError
from fraglaw.mellin import counterexample_schedule
from fraglaw.trials import check_seed

DENSITY_KINDS = ("uniform", "piecewise", "logbox", "counterexample")

def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Reads a configuration file.

    Args:
        path: The path to the YAML or JSON file.

    Returns:
        The top-level dictionary of the file; an empty file yields an empty dictionary.

    Raises:
        ConfigurationError: If the file does not exist or does not contain a mapping.
    """

    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigurationError("<file>", "the configuration file {} does not exist.".format(file_path))

    with file_path.open() as file:
        try:
            # YAML 1.1 reads exponents without a dot, such as 1e-05, as strings.
            contents = json.load(file) if file_path.suffix == ".json" else yaml.safe_load(file)
        except (json.JSONDecodeError, yaml.YAMLError) as error:
            raise ConfigurationError("<file>", "cannot parse {}: {}".format(file_path, error))

    if contents is None:
        return {}

    if not isinstance(contents, dict):
        raise ConfigurationError("<file>", "the top level of {} must be a mapping.".format(file_path))

    return contents

def get_int(dictionary: Dict[str, Any], key: str, default: Optional[int] = None) -> Optional[int]:
    """
    Returns the integer stored under `key`, or `default` if the key is absent.

    Whole floats such as `1e6` are accepted, since YAML reads them as floats.

    Raises:
        TypeError: If the value is not an integer.
    """

    value = dictionary.get(key, default)
    if value is None:
        return None

    if isinstance(value, float) and value.is_integer():
        return int(value)

    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError("The '{}' key must be associated with a value of type `int` and not {}."
                        .format(key, type(value)))

    return value

def get_float(dictionary: Dict[str, Any], key: str, default: Optional[float] = None) -> Optional[float]:
    """
    Returns the number stored under `key` as a float, or `default` if the key is absent.

    Raises:
        TypeError: If the value is not a number.
    """

    value = dictionary.get(key, default)
    if value is None:
        return None

    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TypeError("The '{}' key must be associated with a value of type `float` and not {}."
                        .format(key, type(value)))

    return float(value)

def get_string(dictionary: Dict[str, Any], key: str, default: Optional[str] = None) -> Optional[str]:
    """
    Returns the string stored under `key`, or `default` if the key is absent.

    Raises:
        TypeError: If the value is not a string.
    """

    value = dictionary.get(key, default)
    if value is not None and not isinstance(value, str):
        raise TypeError("The '{}' key must be associated with a value of type `str` and not {}."
                        .format(key, type(value)))

    return value

def get_positive_int(dictionary: Dict[str, Any], key: str, default: int) -> int:
    """
    Returns the integer stored under `key`, or `default` if the key is absent or null.

    Raises:
        TypeError: If the value is not an integer.
        ConfigurationError: If the value is not positive.
    """

    value = get_int(dictionary, key)
    if value is None:
        return default

    if value < 1:
        raise ConfigurationError(key, "expected a positive integer, got {}.".format(value))

    return value

def get_positive_float(dictionary: Dict[str, Any], key: str, default: float) -> float:
    """
    Returns the number stored under `key`, or `default` if the key is absent or null.

    Raises:
        TypeError: If the value is not a number.
        ConfigurationError: If the value is not a positive finite number.
    """

    value = get_float(dictionary, key)
    if value is None:
        return default

    if not 0.0 < value < math.inf:
        raise ConfigurationError(key, "expected a positive number, got {}.".format(value))

    return value

def get_seed(dictionary: Dict[str, Any], key: str = "seed") -> int:
    """
    Returns the 64-bit seed stored under `key`, or the default seed if the key is absent or null.

    Raises:
        TypeError: If the value is not an integer.
        ConfigurationError: If the value is not a 64-bit unsigned integer.
    """

    value = get_int(dictionary, key)
    if value is None:
        return fraglaw.defaults.SEED

    try:
        return check_seed(value)
    except InvalidArgumentError as error:
        raise ConfigurationError(key, str(error))

def _get_number_list(dictionary: Dict[str, Any], key: str, field: str) -> List[float]:
    value = dictionary.get(key)
    if (not isinstance(value, list)
            or not all(map(lambda x: isinstance(x, (int, float)) and not isinstance(x, bool), value))):
        raise TypeError("The '{}' key must be associated with a value of type `List[float]`.".format(key))

    if len(value) == 0:
        raise ConfigurationError(field, "the list must not be empty.")

    return [float(x) for x in value]

def density_from_dict(dictionary: Dict[str, Any], field: str = "density") -> CutDensity:
    """
    Creates a single density from its configuration dictionary.

    Accepted forms: {"kind": "uniform"}, {"kind": "piecewise", "breakpoints": [...], "heights": [...]} and
    {"kind": "logbox", "epsilon": e} with an optional "center_log".

    Args:
        dictionary: The density section.
        field: The dotted path of the section, used in error messages.

    Raises:
        TypeError: If a key holds a value of the wrong type.
        ConfigurationError: If the density is invalid.
    """

    if not isinstance(dictionary, dict):
        raise TypeError("The '{}' key must be associated with a mapping.".format(field))

    kind = get_string(dictionary, "kind")

    try:
        if kind == "uniform":
            return UniformDensity()

        if kind == "piecewise":
            breakpoints = _get_number_list(dictionary, "breakpoints", field + ".breakpoints")
            heights = _get_number_list(dictionary, "heights", field + ".heights")
            return PiecewiseConstantDensity(breakpoints, heights)

        if kind == "logbox":
            epsilon = get_float(dictionary, "epsilon")
            if epsilon is None:
                raise ConfigurationError(field + ".epsilon", "a log-box density needs a half-width.")

            center_log = get_float(dictionary, "center_log", LOG10_HALF)
            return LogBoxDensity(epsilon, center_log if center_log is not None else LOG10_HALF)

    except ConfigurationError:
        raise
    except InvalidArgumentError as error:
        raise ConfigurationError(field, str(error))

    raise ConfigurationError(field + ".kind", "expected one of {}, got {!r}.".format(DENSITY_KINDS[:3], kind))

def level_densities(value: Any, levels: int, field: str = "density") -> List[CutDensity]:
    """
    Resolves the density section of a run into the densities of its levels.

    The section is either a single density (used at every level), a list of densities (the n-th one is used at level
    n and the last one at all further levels) or {"kind": "counterexample", "delta": d}, which yields the shrinking
    log-box densities of the non-Benford construction.

    Args:
        value: The density section; `None` means uniform.
        levels: The number of levels N.
        field: The dotted path of the section, used in error messages.

    Returns:
        A nonempty list whose n-th entry is the density of level n + 1; the last entry also applies to every
        level beyond the end of the list.
    """

    if levels < 1:
        raise ConfigurationError("levels", "at least one level is needed, got {}.".format(levels))

    if value is None:
        return [UniformDensity()]

    if isinstance(value, list):
        if len(value) == 0:
            raise ConfigurationError(field, "the list of per-level densities must not be empty.")

        configured = [density_from_dict(item, "{}[{}]".format(field, index)) for (index, item) in enumerate(value)]
        return configured

    if isinstance(value, dict) and value.get("kind") == "counterexample":
        delta = get_float(value, "delta")
        if delta is None or not 0.0 < delta < 1.0:
            raise ConfigurationError(field + ".delta", "delta must lie in (0, 1), got {}.".format(delta))

        schedule = counterexample_schedule(delta, levels)
        return list(schedule.densities(levels))

    return [density_from_dict(value, field)]

def densities_to_config(densities: Sequence[CutDensity]) -> Any:
    """
    Returns the configuration section that `level_densities` turns back into `densities`.
    """

    if len(densities) == 1:
        return densities[0].to_dict()

    return [density.to_dict() for density in densities]

def resolve(file_config: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merges a configuration file with command-line values: values given on the command line win, then the file,
    then the defaults filled in later by the model-specific `from_dict` constructors.

    Args:
        file_config: The contents of the configuration file.
        overrides: The command-line values; `None` values are ignored.
    """

    result = dict(file_config)
    for (key, value) in overrides.items():
        if value is not None:
            result[key] = value

    result.setdefault("seed", fraglaw.defaults.SEED)
    result.setdefault("trials", fraglaw.defaults.TRIALS)

    return result
