import os

import numpy as np
from setuptools import Extension, setup

try:
    if not os.path.exists("src/nocean/_kernels/_core.pyx"):
        raise ImportError("no extension source present")
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nocean._kernels._core",
                ["src/nocean/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
        },
    )
except ImportError:
    # pure-python install still works; kernels fall back to numpy
    ext_modules = []

setup(ext_modules=ext_modules)
