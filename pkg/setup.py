from setuptools import setup, Extension
from Cython.Build import cythonize
import numpy as np

ext = Extension(
    "solsta._core",
    sources=["src/solsta/_core.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3", "-fcx-limited-range"],
)

setup(ext_modules=cythonize([ext], language_level=3))
