from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("thetalift._bracket_c", ["src/thetalift/_bracket_c.pyx"])],
        language_level=3,
    )
except ImportError:
    # Pure-Python kernel is used when the extension is unavailable.
    ext_modules = []

setup(ext_modules=ext_modules)
