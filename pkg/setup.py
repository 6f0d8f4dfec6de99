"""Build script for the compiled engine kernel.

The extension is optional: if Cython or a C compiler is unavailable the
package installs with the pure-Python backend only, which is selected
automatically at import.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "chessworld.engine._core",
                ["src/chessworld/engine/_core.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
