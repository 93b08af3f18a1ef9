"""Build script: compiles the union-find sweep kernel when Cython is available.

Without Cython (or if compilation fails) the package still installs and
falls back to the pure-Python kernel at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "topoprompt._kernels._sweep",
                ["src/topoprompt/_kernels/_sweep.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
