"""Build the optional Cython elimination kernel.

The extension is optional: if Cython or a C compiler is missing the package
installs without it and ``apw._kernel_py`` is used instead.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("APW_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("apw._kernel", ["src/apw/_kernel.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
