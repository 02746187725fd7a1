import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    """Builds the C++ core and the pybind11 module through CMake."""

    def build_extension(self, ext):
        extdir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)

        source_dir = Path(__file__).resolve().parent
        cmake_args = [
            "-DCMAKE_BUILD_TYPE=Release",
            "-DLOOGP_BUILD_PYTHON=ON",
            "-DLOOGP_BUILD_TESTS=OFF",
            "-DLOOGP_BUILD_CLI=OFF",
            f"-DLOOGP_PYTHON_OUTPUT_DIR={extdir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(
            ["cmake", "-S", str(source_dir), "-B", str(build_temp), *cmake_args],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build_temp), "--target", "loogp_python", "-j"],
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("loogp._core")],
    cmdclass={"build_ext": CMakeBuild},
)
