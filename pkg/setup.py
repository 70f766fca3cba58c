from setuptools import Extension, setup
from Cython.Build import cythonize

# The compiled kernels are an optimisation only; obrkit falls back to the
# numpy/pure-python implementations when the extension is unavailable.
extensions = [
    Extension(
        "obrkit._kernels",
        ["src/obrkit/_kernels.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
