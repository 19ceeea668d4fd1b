from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("sloccrank._kernels._core", ["src/sloccrank/_kernels/_core.pyx"])],
        language_level="3",
    )
except ImportError:
    # No Cython: ship pure Python only; the package falls back at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
