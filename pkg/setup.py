#!/usr/bin/env python3

from setuptools import setup, find_packages

setup(
    name = "fraglaw",
    version = "0.1",
    packages = find_packages(),
    entry_points = {
        'console_scripts': [
            'fraglaw = fraglaw.fraglaw:main'
        ]
    },

    install_requires = ['pyyaml', 'numpy', 'scipy', 'sympy', 'mpmath'],

    # metadata to display on PyPI
    description="Benford's law in stick fragmentation processes.",
    license="Apache License 2.0",
    keywords="benford significand fragmentation mellin transform simulation",
)
