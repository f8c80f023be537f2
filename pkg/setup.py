from setuptools import find_packages, setup

setup(
    name="strat_pi1",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    install_requires=[
        "sympy>=1.12",
        "networkx>=3.0",
        "numpy>=1.19.0",
        "pandas>=1.0.0",
        "tqdm>=4.50.0",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0.0",
            "pytest-cov>=2.10.0",
            "hypothesis>=6.0.0",
            "ruff>=0.1.6",
            "wheel>=0.35.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "strat-pi1=strat_pi1.cli:main",
        ],
    },
    description="Fundamental groups of stratified models via decollages of groups",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
