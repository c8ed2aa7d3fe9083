import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "qsteer._mc_kernel",
                sources=["src/qsteer/_mc_kernel.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ]
    )
else:
    # No Cython: the pure-numpy kernel is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
