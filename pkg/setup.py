import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # no compiler toolchain: the package falls back to its numpy kernels
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension(
            "hartogs._ckernels",
            ["src/hartogs/_ckernels.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3", "-fcx-limited-range"],
        )],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
