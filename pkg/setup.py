"""Build script: compiles the optional _speedups extension.

The extension is a performance add-on only; if Cython or a C compiler is
unavailable the build falls back to the pure-Python kernels in
lkwb._kernels_py and the package is fully functional.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping _speedups extension build: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not compile {ext.name}: {exc}")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available, building without _speedups")
        return []
    return cythonize(
        [Extension("lkwb._speedups", ["src/lkwb/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
