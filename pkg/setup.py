"""Build script: compiles the optional native kernel extension.

The package works without the extension (numpy fallback is selected at
import time); a failed compile must not fail the install.
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "streamclf.backend._native",
                ["src/streamclf/backend/_native.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"streamclf: native kernels not built ({exc}); numpy fallback will be used")
    ext_modules = []

setup(ext_modules=ext_modules)
