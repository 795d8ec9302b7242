"""Build script: compiles the optional Cython kernel module.

The package works without the extension (a pure-Python backend is selected
at import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lnc._core",
                ["src/lnc/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
except ImportError:
    print("Cython not available; installing with the pure-Python backend only")

setup(ext_modules=ext_modules)
