"""Builds the optional compiled scoring kernels.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes batch scoring faster:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tanisearch._ckernels",
                ["src/tanisearch/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
