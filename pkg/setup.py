"""Build script for the optional compiled kernel extension.

The package is fully functional without it (a pure-Python fallback is
selected at import time). Compile in place with:

    python setup.py build_ext --inplace

If Cython or a C compiler is missing the extension is simply skipped.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/headmimic/_kernels/_core.pyx",
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
