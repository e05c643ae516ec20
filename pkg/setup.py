"""Build the optional compiled kernels; the package still installs without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("P3ECP_NO_EXT", "") in ("", "0"):
    try:
        import numpy  # noqa: F401
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("planar3ecp._ckernels", ["src/planar3ecp/_ckernels.pyx"], language="c++")],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        print("Cython or numpy not available; installing the pure-Python kernels only")

setup(ext_modules=ext_modules)
