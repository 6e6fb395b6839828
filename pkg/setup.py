"""Setup script for gfregular."""

from setuptools import setup, find_packages

setup(
    name="gfregular",
    version="1.0.0",
    description="Exact GF(q)/GF(q^2) matroid toolkit: regular families, obstructions, tangles",
    long_description=open("README.md").read() if __import__("os").path.exists("README.md") else "",
    long_description_content_type="text/markdown",
    license="MIT",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24.0",
        "networkx>=3.0",
    ],
    extras_require={
        "test": ["pytest>=7.0", "galois>=0.3"],
    },
    entry_points={
        "console_scripts": [
            "gfregular=main:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
