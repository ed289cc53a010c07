import numpy
from setuptools import setup
from setuptools.extension import Extension


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "kfs._core",
        sources=["src/kfs/_core.pyx"],
        include_dirs=[numpy.get_include()],
        # -fcx-limited-range: naive complex multiply (same formula numpy
        # uses), skipping the inf/nan fixup call on every product
        extra_compile_args=["-O3", "-fcx-limited-range"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,  # pure-python kernels take over if the build fails
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=_extensions())
