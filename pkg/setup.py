from setuptools import Extension, setup

# The compiled kernel module is optional: when Cython (or a C compiler) is
# unavailable the package falls back to the pure-numpy twin at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("seqfpp._core", ["src/seqfpp/_core.pyx"])],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
