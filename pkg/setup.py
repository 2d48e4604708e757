"""Build script: compiles the optional stencil/flux kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); set SKEWEULER_PURE=1 to skip compilation.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SKEWEULER_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "skeweuler._core",
                    ["src/skeweuler/_core.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
