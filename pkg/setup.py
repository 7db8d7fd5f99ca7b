from setuptools import setup

setup(
    name="linfact",
    version="1.0.0",
    install_requires=["numpy>=1.20", "scipy"],
    tests_require=["pytest"],
    packages=["linfact"],
    package_dir={
        "linfact": "linfact"
    },
    entry_points={
        "console_scripts": ["linfact=linfact.cli:main"],
    },
    author="linfact contributors",
    description="Factorization of matrix-valued *-polynomials in free "
    "unitaries into chains of degree-1 factors",
    license="MIT License",
    keywords=" ".join([
        "noncommutative", "polynomial", "linearization", "factorization",
        "free", "unitary", "haar", "permutation", "operator", "norm",
        "random", "matrix", "strong", "convergence",
    ]),
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
