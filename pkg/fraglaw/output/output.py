#!/usr/bin/env python3

"""
This module contains the functions that are used in generating the output files of a run: plot-ready CSV tables
whose first line is a `# manifest: <hash>` comment, and JSON documents carrying a "manifest_hash" key.
"""

import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, Sequence, Tuple

from fraglaw.errors import InvalidArgumentError
from fraglaw.histogram import DigitHistogram
from fraglaw.manifest import RunManifest
from fraglaw.significand import benford_cdf

def generate_json_text(payload: Dict[str, Any], manifest: RunManifest) -> str:
    """
    Generates a JSON document from `payload` with the hash of `manifest` added.

    Args:
        payload: The JSON-serialisable contents.
        manifest: The manifest of the run.

    Returns:
        The document, with sorted keys so that equal payloads give equal bytes.
    """

    document = dict(payload)
    document["manifest_hash"] = manifest.hash()

    return json.dumps(document, sort_keys=True, indent=2) + "\n"

def generate_manifest_text(manifest: RunManifest) -> str:
    """
    Generates the contents of the manifest.json file.
    """

    return json.dumps(manifest.to_dict(), sort_keys=True, indent=2) + "\n"

def generate_pn_csv_text(histogram: DigitHistogram, manifest: RunManifest) -> str:
    """
    Generates the table `s,pn,benford` of P_N(s) on the tabulated grid of `histogram`.
    """

    text = io.StringIO()
    text.write("# manifest: {}\n".format(manifest.hash()))
    text.write("s,pn,benford\n")

    for (s, value) in histogram.pn_values():
        text.write("{!r},{!r},{!r}\n".format(s, value, benford_cdf(min(s, 10.0))))

    return text.getvalue()

def generate_table_text(header: Sequence[str], rows: Sequence[Tuple[Any, ...]], manifest: RunManifest) -> str:
    """
    Generates a CSV table with the given header.
    """

    text = io.StringIO()
    text.write("# manifest: {}\n".format(manifest.hash()))
    text.write(",".join(header) + "\n")

    for row in rows:
        text.write(",".join(repr(value) if isinstance(value, float) else str(value) for value in row) + "\n")

    return text.getvalue()

def generate_output(output_location: Path, manifest: RunManifest, files: Dict[str, str]) -> None:
    """
    Writes the manifest and the generated files of a run.

    Args:
        output_location: The directory in which the files are written; it is created if it does not exist.
        manifest: The manifest of the run, written to manifest.json.
        files: The contents of the other files, keyed by file name.

    Raises:
        InvalidArgumentError: If `output_location` exists but is not a directory.
    """

    if output_location.exists() and not output_location.is_dir():
        raise InvalidArgumentError("The output location {} is not a directory.".format(output_location))

    output_location.mkdir(parents=True, exist_ok=True)

    with (output_location / "manifest.json").open("w") as file:
        file.write(generate_manifest_text(manifest))

    for (name, contents) in sorted(files.items()):
        with (output_location / name).open("w") as file:
            file.write(contents)

    logging.info("Wrote %s files to %s.", len(files) + 1, output_location)
