"""Build script: compiles the optional Cython kernel extension.

The extension is a pure speedup; if Cython or a C compiler is missing the
install still succeeds and the package falls back to the numpy kernels at
import time. Set MINETAG_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: building the minetag C extension failed ({exc}); "
              "the pure-numpy kernels will be used instead.")


ext_modules = []
if not os.environ.get("MINETAG_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/minetag/kernels/_core.pyx"],
            language_level=3,
        )
    except ImportError:
        print("WARNING: Cython not available; building without the compiled kernels.")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
