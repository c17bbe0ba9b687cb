import os
import re

from setuptools import find_packages, setup

HERE = os.path.dirname(os.path.realpath(__file__))


def _read(name):
    path = os.path.join(HERE, name)
    if not os.path.isfile(path):
        return ""
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _requirements():
    return [line for line in _read("requirements.txt").splitlines() if line and not line.startswith("#")]


def _version():
    match = re.search(r'^__version__ = "([^"]+)"', _read(os.path.join("sullivan", "__init__.py")), re.M)
    if not match:
        print("Warning: no __version__ in sullivan/__init__.py, using 0.0.1")
        return "0.0.1"
    return match.group(1)


setup(
    name="sullivan-diagrams",
    version=_version(),
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    include_package_data=True,
    description="Homology of moduli spaces of 1-Sullivan diagrams: cell complexes, discrete Morse flows and Hochschild classes.",
    long_description=_read("README.md"),
    long_description_content_type="text/markdown",
    license="MIT",
    install_requires=_requirements(),
    python_requires=">=3.8",
    entry_points={
        "console_scripts": [
            "sullivan=sullivan.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="sullivan-diagrams moduli-spaces homology discrete-morse-theory hochschild string-topology",
)
