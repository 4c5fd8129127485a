"""Builds the optional compiled split-scan kernel.

The package works without it (a pure-Python fallback is selected at
import time), so a missing compiler or Cython only costs speed.
Set TREEIDS_SKIP_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TREEIDS_SKIP_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "treeids.trees.kernels._speedups",
                    ["src/treeids/trees/kernels/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    # no -ffast-math: the fallback and the compiled path
                    # must produce bit-identical scores
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
