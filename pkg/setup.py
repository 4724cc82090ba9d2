import os

from setuptools import setup

ext_modules = []
if os.environ.get("ARGMINPROC_SKIP_EXT") != "1":
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "argminproc._window_cy",
                ["src/argminproc/_window_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
