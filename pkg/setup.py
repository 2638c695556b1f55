from setuptools import setup, Extension

# The compiled search kernel is optional: if Cython (or a C compiler) is
# missing, the package installs anyway and falls back to the pure-Python
# kernel at import time.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("immersionep._search_c", ["src/immersionep/_search_c.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
