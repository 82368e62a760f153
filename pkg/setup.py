"""Build the optional Cython kernels.

The package works without them; ``fourthorder.kernels`` falls back to the
pure-Python implementations when the extension cannot be imported.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("FOURTHORDER_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("cython/numpy not available, building pure-Python only", file=sys.stderr)
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "fourthorder._ckernels",
                    ["src/fourthorder/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
