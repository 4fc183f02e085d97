import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "hmix._kernels",
        ["src/hmix/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        language="c",
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
