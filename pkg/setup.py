import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# No -ffast-math: the layout strategies are required to agree bitwise, which
# needs IEEE-conforming arithmetic in the compiled kernels.
extensions = [
    Extension(
        "slvp._kernels",
        ["src/slvp/_kernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3", "-fopenmp"],
        extra_link_args=["-fopenmp"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
