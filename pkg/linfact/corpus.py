# -*- coding: utf-8 -*-

'''
    Seeded random instances for property tests, `probe_m` and `selftest`.
'''

import numpy as np

from .factor import DegreeOneFactor
from .matpoly import MatPoly
from .word import Letter, Word

# Coefficient entries are drawn from this grid, real and imaginary parts
# independently
GRID = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])


def random_word(rng: np.random.Generator, gens: int, degree: int) -> Word:
    return Word(
        Letter(int(rng.integers(1, gens + 1)), bool(rng.integers(0, 2)))
        for _ in range(degree)
    )


def grid_matrix(rng: np.random.Generator, rows: int, cols: int):
    return rng.choice(GRID, (rows, cols)) + 1j * rng.choice(GRID, (rows, cols))


def gaussian_matrix(rng: np.random.Generator, rows: int, cols: int):
    return (
        rng.standard_normal((rows, cols))
        + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2)


def random_matpoly(
    rng: np.random.Generator,
    max_shape: int = 3,
    gens: int = 2,
    max_degree: int = 4,
    max_terms: int = 6,
    shape=None,
    gaussian: bool = False,
) -> MatPoly:
    '''
        A polynomial with up to `max_terms` terms of degree at most
        `max_degree`, each with a grid (or Gaussian) coefficient
    '''
    if shape is None:
        shape = (
            int(rng.integers(1, max_shape + 1)),
            int(rng.integers(1, max_shape + 1)),
        )
    rows, cols = shape
    draw = gaussian_matrix if gaussian else grid_matrix
    terms = [
        (
            random_word(rng, gens, int(rng.integers(0, max_degree + 1))),
            draw(rng, rows, cols),
        )
        for _ in range(int(rng.integers(1, max_terms + 1)))
    ]
    return MatPoly.from_terms(rows, cols, terms)


def random_degree_one(
    rng: np.random.Generator,
    size: int,
    gens: int = 2,
    starred: bool = True,
) -> DegreeOneFactor:
    '''A Gaussian a0 ⊗ 1 + Σ a_j ⊗ x_j (+ Σ b_j ⊗ x_j* if `starred`)'''
    a = {j: gaussian_matrix(rng, size, size) for j in range(1, gens + 1)}
    b = {}
    if starred:
        b = {j: gaussian_matrix(rng, size, size) for j in range(1, gens + 1)}
    return DegreeOneFactor(size, gaussian_matrix(rng, size, size), a, b)
