"""Optional compiled kernel; the package works without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: install the pure-Python package only
    extensions = []
else:
    extensions = cythonize(
        [Extension("hocat._ckernel", ["src/hocat/_ckernel.pyx"], extra_compile_args=["-O3"], optional=True)],
        language_level=3,
    )

setup(ext_modules=extensions)
