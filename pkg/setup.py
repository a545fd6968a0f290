"""Build script for the compiled sampling kernels.

The extension is optional at runtime: if it fails to import, the package
falls back to the pure-Python backend (see propratio.kernels).
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # source dist without Cython: install pure-Python only
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "propratio._kernels",
                sources=["src/propratio/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
