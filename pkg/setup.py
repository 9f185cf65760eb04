"""Build the optional compiled term core.

The package works without it: when Cython or a C compiler is missing the
extension is skipped and ``ssclab.core`` falls back to the pure-Python core.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure means fallback
            self.warn("compiled core not built (%s); using the pure-Python core" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self.warn("compiled core not built (%s); using the pure-Python core" % exc)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(["src/ssclab/_ccore.pyx"], language_level=3, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
