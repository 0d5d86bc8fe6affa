import numpy as np
from setuptools import Extension, setup


def get_extensions():
    """Cython geometry kernels; the package falls back to numpy if absent."""
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available, building without compiled kernels.")
        return []
    extensions = [
        Extension(
            "sphereguide._kernels",
            sources=["src/sphereguide/_kernels.pyx"],
            include_dirs=[np.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    return cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=get_extensions())
