"""Build script: compiles the optional search-kernel extension.

The package works without the extension (a pure-Python kernel is selected
at import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Tolerate extension build failures; the pure kernel takes over."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: compiled search kernel skipped ({exc}); "
              f"falling back to the pure-Python kernel")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("cogseq._kernel", ["src/cogseq/_kernel.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
