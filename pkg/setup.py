from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the Cython kernels if possible; the package falls back to the
    pure-Python kernels at import time when the extension is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or cython missing
            print(f"warning: skipping extension build ({exc}); "
                  "pure-Python kernels will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "pure-Python kernels will be used")


try:
    from Cython.Build import cythonize
    extensions = cythonize(
        [Extension("triloc._core", ["src/triloc/_core.pyx"])],
        language_level=3,
    )
except Exception as exc:
    print(f"warning: cythonize unavailable ({exc}); "
          "pure-Python kernels will be used")
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
