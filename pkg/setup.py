"""Build hook: compile the optional z-stream kernel if Cython is available.

The package works without the extension (a numpy fallback is selected at
import time), so any compile failure is demoted to a warning.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/kochawave/_zkernel.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - environment dependent
    warnings.warn(f"skipping compiled kernel ({exc}); pure fallback will be used")

setup(ext_modules=ext_modules)
