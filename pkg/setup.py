from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [Extension("lllshift._mtcore", ["src/lllshift/_mtcore.pyx"])],
        language_level="3",
    )
)
