"""Build the tcqfi._core extension (C++20, Eigen) with setuptools + pybind11.

The CMake build remains the primary development workflow; this file exists so
`pip install .` (or `pip install -e . --no-build-isolation`) works without
CMake, compiling the core sources directly into the extension module.
"""

import glob
from pathlib import Path

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include() -> str:
    for cand in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if Path(cand, "Eigen", "Core").is_file():
            return cand
    raise RuntimeError("Eigen3 headers not found (expected under /usr/include/eigen3)")


ext = Pybind11Extension(
    "tcqfi._core",
    sorted(glob.glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=["include", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
