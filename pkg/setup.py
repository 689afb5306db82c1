"""
Setup script for memdse
"""
from setuptools import setup, find_packages

with open("requirements.txt") as f:
    requirements = f.read().splitlines()

# Filter out comments and empty lines
requirements = [req for req in requirements if req and not req.startswith('#')]

setup(
    name="memdse",
    version="1.0.0",
    description="Memory design-space exploration for edge-AI accelerators with SRAM/MRAM hierarchies",
    packages=find_packages(exclude=["examples", "examples.*"]),
    package_data={"memdse": ["data/*.json", "data/networks/*.json"]},
    install_requires=requirements,
    python_requires=">=3.8",
    entry_points={
        'console_scripts': [
            'memdse=memdse.main:main',
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
)
