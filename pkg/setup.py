"""Build script.

The row-reduction kernel for prime-field matrices is compiled from Cython
when available.  The package works without it (a numpy fallback is selected
at import time), so a failed extension build is not fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/torloc/_gfelim.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
