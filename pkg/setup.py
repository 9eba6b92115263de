"""Build script for the compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed Cython build only costs speed, not functionality.
To skip the extension entirely set RADIOULNAR_NO_EXT=1 in the build env.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("RADIOULNAR_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "radioulnar._core._kernels",
        ["src/radioulnar/_core/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
