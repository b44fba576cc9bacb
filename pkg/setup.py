"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); building it speeds up the optimizer's inner loop roughly an
order of magnitude.  Set CHANCAP_NO_EXT=1 to skip the compiled kernels.
"""

import os

from setuptools import setup
from setuptools.extension import Extension

ext_modules = []
if not os.environ.get("CHANCAP_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "chancap._kernels._cykernels",
                    sources=["src/chancap/_kernels/_cykernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
