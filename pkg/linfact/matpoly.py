# -*- coding: utf-8 -*-

'''
    Rectangular matrix-valued *-polynomials over free unitary generators.
    A `MatPoly` is a finite map from `Word` to a coefficient matrix of a fixed
    shape, read as the sum of `coeff ⊗ word`. All arithmetic is exact up to
    floating point rounding of the coefficients; generators stay free.
'''

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple

import numpy as np
from scipy.linalg import block_diag

from .word import Word, UNIT, canonical

# Coefficients whose largest entry falls below this are dropped after every
# arithmetic operation
PRUNE_THRESHOLD = 1e-14


class ShapeError(ValueError):
    '''Thrown when operands have incompatible shapes'''
    pass


def as_matrix(value, rows=None, cols=None) -> np.ndarray:
    '''Copy `value` into a read-only complex128 matrix'''
    matrix = np.array(value, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ShapeError(f"Expected a matrix, got shape {matrix.shape}")
    if (rows is not None and matrix.shape[0] != rows) \
       or (cols is not None and matrix.shape[1] != cols):
        raise ShapeError(
            f"Expected a {rows}x{cols} matrix, got shape {matrix.shape}"
        )
    matrix.flags.writeable = False
    return matrix


def negligible(matrix: np.ndarray) -> bool:
    return matrix.size == 0 or np.max(np.abs(matrix)) < PRUNE_THRESHOLD


@dataclass(frozen=True, eq=False)
class MatPoly:
    '''
        `rows` x `cols` matrix with *-polynomial entries, stored as
        `terms: {Word: coefficient}`. The zero polynomial has no terms.
    '''
    rows: int
    cols: int
    terms: Dict[Word, np.ndarray]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(f"Invalid shape {self.rows}x{self.cols}")
        terms = {}
        for word, coeff in self.terms.items():
            if not isinstance(word, Word):
                raise ShapeError(f"Not a word: {repr(word)}")
            coeff = as_matrix(coeff, self.rows, self.cols)
            if not negligible(coeff):
                terms[word] = coeff
        object.__setattr__(self, "terms", terms)

    @classmethod
    def zero(cls, rows: int, cols: int):
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, {UNIT: np.eye(n)})

    @classmethod
    def constant(cls, coeff):
        coeff = as_matrix(coeff)
        return cls(coeff.shape[0], coeff.shape[1], {UNIT: coeff})

    @classmethod
    def monomial(cls, coeff, word: Word):
        coeff = as_matrix(coeff)
        return cls(coeff.shape[0], coeff.shape[1], {word: coeff})

    @classmethod
    def from_terms(
        cls,
        rows: int,
        cols: int,
        terms: Iterable[Tuple[Word, np.ndarray]],
    ):
        '''Like the constructor, but duplicate words are summed'''
        summed: Dict[Word, np.ndarray] = {}
        for word, coeff in terms:
            coeff = as_matrix(coeff, rows, cols)
            if word in summed:
                summed[word] = summed[word] + coeff
            else:
                summed[word] = coeff
        return cls(rows, cols, summed)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def degree(self) -> int:
        return max((len(word) for word in self.terms), default=0)

    def is_zero(self) -> bool:
        return len(self.terms) == 0

    def generators(self):
        return frozenset().union(*(word.generators() for word in self.terms))

    def sorted_terms(self):
        '''Terms in graded lexicographic order of their words'''
        return [(word, self.terms[word]) for word in canonical(self.terms)]

    def coefficient(self, word: Word) -> np.ndarray:
        if word in self.terms:
            return self.terms[word]
        return np.zeros(self.shape, dtype=np.complex128)

    def __repr__(self):
        return f"MatPoly({self.rows}, {self.cols}, {repr(self.terms)})"

    def __str__(self):
        if self.is_zero():
            return f"0 ({self.rows}x{self.cols})"
        return " + ".join(
            f"{np.array2string(coeff, precision=4)} ⊗ {word}"
            for word, coeff in self.sorted_terms()
        )

    def __eq__(self, other):
        return isinstance(other, MatPoly) \
            and self.shape == other.shape \
            and self.terms.keys() == other.terms.keys() \
            and all(
                np.array_equal(coeff, other.terms[word])
                for word, coeff in self.terms.items()
            )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.terms)))

    def max_difference(self, other) -> float:
        '''Largest entry-wise coefficient gap, over the union of supports'''
        if self.shape != other.shape:
            raise ShapeError(
                f"Can't compare {self.rows}x{self.cols} "
                f"with {other.rows}x{other.cols}"
            )
        words = set(self.terms) | set(other.terms)
        return max((
            float(np.max(np.abs(
                self.coefficient(word) - other.coefficient(word)
            )))
            for word in words
        ), default=0.0)

    def isclose(self, other, tol: float) -> bool:
        return self.max_difference(other) <= tol

    def add(self, other):
        '''Coefficient-wise sum'''
        if self.shape != other.shape:
            raise ShapeError(
                f"Can't add {self.rows}x{self.cols} "
                f"and {other.rows}x{other.cols} polynomials"
            )
        return MatPoly.from_terms(
            self.rows,
            self.cols,
            list(self.terms.items()) + list(other.terms.items()),
        )

    def __add__(self, other):
        return self.add(other)

    def __neg__(self):
        return MatPoly(self.rows, self.cols, {
            word: -coeff for word, coeff in self.terms.items()
        })

    def __sub__(self, other):
        return self.add(-other)

    def __mul__(self, scalar):
        '''Multiplication by a complex scalar'''
        return MatPoly(self.rows, self.cols, {
            word: scalar * coeff for word, coeff in self.terms.items()
        })

    def __rmul__(self, scalar):
        return self * scalar

    def matmul(self, other):
        '''
            The matrix product over the free algebra: coefficient matrices
            multiply, words concatenate. Nothing simplifies x1 x1* to 1.
        '''
        if self.cols != other.rows:
            raise ShapeError(
                f"Can't multiply {self.rows}x{self.cols} "
                f"by {other.rows}x{other.cols}"
            )
        return MatPoly.from_terms(self.rows, other.cols, [
            (v + w, a @ b)
            for v, a in self.terms.items()
            for w, b in other.terms.items()
        ])

    def __matmul__(self, other):
        return self.matmul(other)

    def adjoint(self):
        '''(a ⊗ l1...ld)* = a* ⊗ ld*...l1*'''
        return MatPoly(self.cols, self.rows, {
            word.adjoint(): coeff.conj().T
            for word, coeff in self.terms.items()
        })

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        return self.rows == self.cols \
            and self.max_difference(self.adjoint()) <= tol

    def direct_sum(self, other):
        '''Block-diagonal stacking, word by word'''
        rows = self.rows + other.rows
        cols = self.cols + other.cols
        terms = {}
        for word in set(self.terms) | set(other.terms):
            terms[word] = block_diag(
                self.coefficient(word),
                other.coefficient(word),
            )
        return MatPoly(rows, cols, terms)

    def scale(self, left, right):
        '''Replace each coefficient a by left · a · right'''
        left = as_matrix(left, cols=self.rows)
        right = as_matrix(right, rows=self.cols)
        return MatPoly(left.shape[0], right.shape[1], {
            word: left @ coeff @ right
            for word, coeff in self.terms.items()
        })
