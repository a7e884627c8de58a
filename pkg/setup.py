import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled grid kernel is optional: without it the package selects the
# numpy fallback at import time.
ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "spinclock._kernels._grid",
                ["src/spinclock/_kernels/_grid.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
