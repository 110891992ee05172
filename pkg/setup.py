"""Builds the optional compiled round loop; the package works without it."""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "gameredesign._kernel",
                ["src/gameredesign/_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                # no fused multiply-add: results must match the Python fallback bit for bit
                extra_compile_args=["-O2", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
