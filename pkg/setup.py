"""Build the optional compiled kernel.

The package works without it (pure-Python fallback), so a missing compiler or
Cython only degrades speed.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "schattenkit._kernel",
                ["src/schattenkit/_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # pragma: no cover - exercised only on hosts without Cython
    pass

setup(ext_modules=ext_modules)
