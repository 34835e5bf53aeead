"""Builds the optional compiled scan kernel.

The package is fully functional without it (pure-Python twin in _scan_py);
a missing compiler or Cython just skips the extension.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/proofdock/_scan.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
