import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EXEGETE_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("exegete._bitkernels", ["src/exegete/_bitkernels.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except ImportError:
        # no Cython available: install with the pure-Python kernels only
        ext_modules = []

setup(ext_modules=ext_modules)
