"""Build hook for the optional Cython kernels.

The pure-Python fallback in ``liecert.kernels._pure`` is used whenever the
extension is absent, so a failed compile never breaks the install.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("LIECERT_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "liecert.kernels._ckernels",
                    ["src/liecert/kernels/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
