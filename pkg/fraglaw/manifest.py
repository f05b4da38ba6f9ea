#!/usr/bin/env python3

"""
This module contains the `RunManifest` class that records how an output was produced.
"""

import hashlib
import json
import time
from typing import Any, Dict, Optional

import fraglaw.defaults

class RunManifest:
    """
    The command, the fully resolved configuration, the seed and the program version of a run.

    The hash covers everything except the timestamp, so two runs of the same manifest share their hash and produce
    identical data files.
    """

    @staticmethod
    def from_dict(dictionary: Dict[str, Any]) -> "RunManifest":
        """
        Creates a new `RunManifest` object from its JSON representation.

        Raises:
            TypeError: If a key holds a value of the wrong type.
        """

        command = dictionary.get("command")
        if not isinstance(command, str):
            raise TypeError("The 'command' key must be associated with a value of type `str`.")

        config = dictionary.get("config")
        if not isinstance(config, dict):
            raise TypeError("The 'config' key must be associated with a value of type `Dict[str, Any]`.")

        seed = dictionary.get("seed")
        if not isinstance(seed, int):
            raise TypeError("The 'seed' key must be associated with a value of type `int`.")

        version = dictionary.get("version", fraglaw.defaults.VERSION)
        timestamp = dictionary.get("timestamp")

        return RunManifest(command, config, seed, str(version), None if timestamp is None else str(timestamp))

    def __init__(self,
                 command: str,
                 config: Dict[str, Any],
                 seed: int,
                 version: str = fraglaw.defaults.VERSION,
                 timestamp: Optional[str] = None) -> None:
        """
        Creates a new `RunManifest` object.

        Args:
            command: The command, for example "simulate discrete".
            config: The resolved configuration; it must be JSON-serialisable.
            seed: The run seed.
            version: The program version.
            timestamp: The start of the run; the current time if omitted.
        """

        self._command = command
        self._config = config
        self._seed = seed
        self._version = version
        self._timestamp = timestamp if timestamp is not None else str(int(time.time()))

    @property
    def command(self) -> str:
        """
        The command of the run.
        """

        return self._command

    @property
    def config(self) -> Dict[str, Any]:
        """
        The resolved configuration.
        """

        return dict(self._config)

    @property
    def seed(self) -> int:
        """
        The run seed.
        """

        return self._seed

    @property
    def version(self) -> str:
        """
        The program version.
        """

        return self._version

    @property
    def timestamp(self) -> str:
        """
        The start of the run, in seconds since the epoch.
        """

        return self._timestamp

    def hash(self) -> str:
        """
        Returns the hexadecimal SHA-256 digest (first 16 digits) of the canonical JSON form of the manifest without
        its timestamp.
        """

        canonical = json.dumps({"command": self._command,
                                "config": self._config,
                                "seed": self._seed,
                                "version": self._version},
                               sort_keys=True, separators=(",", ":"))

        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    def to_dict(self) -> Dict[str, Any]:
        """
        Returns the JSON representation of the manifest, including its hash.
        """

        return {"command": self._command,
                "config": self._config,
                "seed": self._seed,
                "version": self._version,
                "timestamp": self._timestamp,
                "manifest_hash": self.hash()}
