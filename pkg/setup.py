"""Build script: compiles the Gibbs-sweep kernel when Cython is available.

The package works without the extension (a pure-Python kernel with the
same semantics is selected at import time), so a failed or skipped
extension build is not fatal.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

DIRECTIVES = {
    "boundscheck": False,
    "wraparound": False,
    "cdivision": True,
    "initializedcheck": False,
    "language_level": "3",
}

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "topicrec._kernels._gibbs",
                ["src/topicrec/_kernels/_gibbs.pyx"],
                # fp-contract off: FMA fusion would change rounding and
                # desynchronize the compiled kernel from the Python one
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives=DIRECTIVES,
    )

setup(ext_modules=ext_modules)
