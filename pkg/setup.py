from setuptools import setup, find_packages


setup(
    name="cryptdfa",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "numpy",
        "pandas",
        "pyyaml",
        "pyparsing",
        "ortools==9.8.3296",
    ],
    extras_require={
        "tests": ["pytest", "hypothesis"],
    },
    description="Finite automata that recognize solvable cryptarithms in any base",
    python_requires=">=3.8, <3.11",  # to match available OR-Tools wheels
    entry_points={
        "console_scripts": [
            "cryptdfa=cryptdfa.cli:main",
        ],
    },
)
