"""Build the optional compiled kernel.

Usage:
    python3 setup.py build_ext --inplace

If Cython or a C compiler is missing the package still installs and
falls back to the pure-Python kernel in ``favres._zpm``.
"""

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "favres._zpm_core",
                sources=["src/favres/_zpm_core.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
