import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """A failed compile leaves the numpy fallback in charge."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            self.warn(f"compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self.warn(f"building {ext.name} failed ({exc}); using numpy fallback")


def extensions():
    if os.environ.get("HYPERLEARN_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    try:
        return cythonize(
            [
                Extension(
                    "hyperlearn.kernels._core",
                    ["src/hyperlearn/kernels/_core.pyx"],
                    language="c++",
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # noqa: BLE001
        print(f"cythonize failed ({exc}); using numpy fallback")
        return []


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
