"""Builds the optional compiled DL kernel; the package works without it."""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension(
            "relaxrev.logics.dl._dlkernel",
            ["src/relaxrev/logics/dl/_dlkernel.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
            optional=True,
        )],
        language_level=3,
    )

setup(ext_modules=ext_modules)
