from setuptools import setup, find_packages

setup(
    name="scfhydrogen",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "duckdb",
        "numpy",
        "scipy>=1.12",
        "numba",
        "pyyaml",
    ],
    entry_points={
        "console_scripts": [
            "scfhydrogen=scfhydrogen.cli:main",
        ],
    },
    description="Self-consistent proton + electron eigenstates in their own electrostatic potential, compared with Coulomb hydrogen.",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
    ],
)
