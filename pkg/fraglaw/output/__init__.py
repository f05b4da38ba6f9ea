#!/usr/bin/env python3

"""
This package contains the logic that generates the output files of a run.
"""

from .output import generate_output
