"""Build script: compiles the optional C extension for the hot kernels.

The package works without the extension (a pure-Python twin is selected
at import time), so a failed cythonization only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "crawlsim._kernels._ckernels",
                ["src/crawlsim/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
