from setuptools import setup

# The compiled kernels are optional: shortedop._kernels falls back to the
# pure-Python twin when the extension is missing or fails to import.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/shortedop/_fastkernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
