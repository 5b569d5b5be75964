# The compiled extension is optional: the package falls back to the pure
# Python kernels in okounkov._speedups_py when the build is unavailable.
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the speedup extension if possible, otherwise keep going."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: skipping compiled speedups ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not available, building without compiled speedups")
        return []
    ext = Extension(
        "okounkov._speedups",
        ["src/okounkov/_speedups.pyx"],
        language="c++",
        extra_compile_args=["-O2", "-std=c++17"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
