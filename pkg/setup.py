import os

from setuptools import Extension, setup


def gather_extensions():
    """Compiled kernels; skipped (pure-Python fallback) if Cython is missing."""
    if os.environ.get("O1KEPLER_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    extensions = [
        Extension(
            "o1kepler._ckernels",
            ["src/o1kepler/_ckernels.pyx"],
            include_dirs=[np.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
        )
    ]
    return cythonize(extensions, compiler_directives={"language_level": "3"})


setup(ext_modules=gather_extensions())
