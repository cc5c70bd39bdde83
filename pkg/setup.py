"""Build hook for the optional compiled community-detection kernel.

The package works without the extension: chainmine.analytics.louvain falls
back to the pure-Python kernel when the compiled one is absent.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "chainmine.analytics._louvain_cy",
                sources=["src/chainmine/analytics/_louvain_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
