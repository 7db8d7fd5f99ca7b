# -*- coding: utf-8 -*-

'''
    Factorization of matrix-valued *-polynomials into an alternating chain

        x = α0 D1 α1 D2 ... Dm αm

    of scalar matrices αℓ and block-diagonal factors Dℓ whose blocks are
    polynomials of degree at most 1. The construction is the monomial / sum
    one: every monomial is a product of single letters, and sums are glued
    together with a row, a block diagonal and a column. ∏‖αℓ‖ is reported as
    `cost`; it bounds the norm of x under any representation in which every
    Dℓ is a contraction.
'''

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, List, Tuple

import numpy as np
from scipy.linalg import block_diag

from .matpoly import MatPoly, ShapeError, as_matrix, negligible
from .word import Letter, Word, UNIT

logger = logging.getLogger(__name__)

RECONSTRUCTION_TOL = 1e-9


class VerificationError(Exception):
    '''
        Thrown when a computed object fails a check that should hold by
        construction, e.g. a factorization that doesn't expand back to its
        source. This always signals a bug or a corrupted input file.
    '''
    pass


class ChainError(VerificationError):
    '''The dimensions of the alphas and diagonal factors don't chain'''
    pass


class ReconstructionError(VerificationError):
    '''A factorization doesn't expand back to the polynomial it came from'''
    pass


class Form(Enum):
    TYPE_A = "type_a"  # a0 ⊗ 1 + Σ a_j ⊗ x_j
    TYPE_B = "type_b"  # a0 ⊗ 1 + Σ b_j ⊗ x_j*
    MIXED = "mixed"    # both kinds of letter


@dataclass(frozen=True, eq=False)
class DegreeOneFactor:
    '''
        a0 ⊗ 1 + Σ a[j] ⊗ x_j + Σ b[j] ⊗ x_j*, all coefficients `size` x
        `size`. Negligible a[j] and b[j] are dropped, so `form` reflects the
        letters that actually occur.
    '''
    size: int
    a0: np.ndarray
    a: Dict[int, np.ndarray] = field(default_factory=dict)
    b: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.size < 1:
            raise ShapeError(f"Invalid block size: {repr(self.size)}")
        n = self.size
        object.__setattr__(self, "a0", as_matrix(self.a0, n, n))
        for name in ("a", "b"):
            coeffs = {}
            for gen, coeff in getattr(self, name).items():
                Letter(gen)  # validates the index
                coeff = as_matrix(coeff, n, n)
                if not negligible(coeff):
                    coeffs[gen] = coeff
            object.__setattr__(self, name, coeffs)

    @classmethod
    def unit(cls, n: int):
        return cls(n, np.eye(n))

    @classmethod
    def zero(cls, n: int):
        return cls(n, np.zeros((n, n)))

    @classmethod
    def letter(cls, n: int, letter: Letter):
        '''I_n ⊗ x_j, or I_n ⊗ x_j* for a starred letter'''
        coeffs = {letter.gen: np.eye(n)}
        if letter.starred:
            return cls(n, np.zeros((n, n)), b=coeffs)
        return cls(n, np.zeros((n, n)), a=coeffs)

    @classmethod
    def from_matpoly(cls, p: MatPoly):
        if p.rows != p.cols or p.degree() > 1:
            raise ShapeError(
                f"A {p.rows}x{p.cols} polynomial of degree {p.degree()} "
                "is not a square degree-1 factor"
            )
        a, b = {}, {}
        for word, coeff in p.terms.items():
            if len(word) == 1:
                (letter,) = word.letters
                (b if letter.starred else a)[letter.gen] = coeff
        return cls(p.rows, p.coefficient(UNIT), a, b)

    def __repr__(self):
        return (
            f"DegreeOneFactor({self.size}, a0={repr(self.a0)}, "
            f"a={repr(self.a)}, b={repr(self.b)})"
        )

    def __eq__(self, other):
        return isinstance(other, DegreeOneFactor) \
            and self.to_matpoly() == other.to_matpoly()

    def __hash__(self):
        return hash(self.to_matpoly())

    @property
    def form(self) -> Form:
        if not self.b:
            return Form.TYPE_A
        if not self.a:
            return Form.TYPE_B
        return Form.MIXED

    def is_unit(self) -> bool:
        return not self.a and not self.b \
            and np.array_equal(self.a0, np.eye(self.size))

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        '''a0 = a0* and b_j = a_j* for every j'''
        zero = np.zeros((self.size, self.size))

        def gap(x, y):
            return float(np.max(np.abs(x - y)))

        if gap(self.a0, self.a0.conj().T) > tol:
            return False
        return all(
            gap(self.b.get(j, zero), self.a.get(j, zero).conj().T) <= tol
            for j in set(self.a) | set(self.b)
        )

    def generators(self):
        return frozenset(self.a) | frozenset(self.b)

    def coefficients(self) -> Dict[Word, np.ndarray]:
        coeffs = {UNIT: self.a0}
        for gen, coeff in self.a.items():
            coeffs[Word.of(Letter(gen))] = coeff
        for gen, coeff in self.b.items():
            coeffs[Word.of(Letter(gen, True))] = coeff
        return coeffs

    def to_matpoly(self) -> MatPoly:
        return MatPoly(self.size, self.size, self.coefficients())

    def scaled(self, scalar):
        return DegreeOneFactor(
            self.size,
            scalar * self.a0,
            {gen: scalar * coeff for gen, coeff in self.a.items()},
            {gen: scalar * coeff for gen, coeff in self.b.items()},
        )

    def row_scaled(self, s: np.ndarray):
        '''diag(s) · y'''
        s = np.asarray(s)[:, np.newaxis]
        return DegreeOneFactor(
            self.size,
            s * self.a0,
            {gen: s * coeff for gen, coeff in self.a.items()},
            {gen: s * coeff for gen, coeff in self.b.items()},
        )

    def row_norms(self) -> np.ndarray:
        '''Euclidean norms of the rows of (a0 a[1] ... b[1] ...)'''
        stacked = np.hstack(
            [self.a0] + list(self.a.values()) + list(self.b.values())
        )
        return np.linalg.norm(stacked, axis=1)


@dataclass(frozen=True, eq=False)
class BlockDiagonal:
    '''The block-diagonal matrix diag(y1, ..., yk) of degree-1 factors'''
    blocks: Tuple[DegreeOneFactor, ...]
    size: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if len(self.blocks) == 0:
            raise ShapeError("A diagonal factor needs at least one block")
        object.__setattr__(
            self,
            "size",
            sum(block.size for block in self.blocks),
        )

    @classmethod
    def unit(cls, n: int):
        return cls((DegreeOneFactor.unit(n),))

    def __repr__(self):
        return f"BlockDiagonal({repr(self.blocks)})"

    def offsets(self) -> List[int]:
        offsets, offset = [], 0
        for block in self.blocks:
            offsets.append(offset)
            offset += block.size
        return offsets

    def block_sizes(self) -> Tuple[int, ...]:
        return tuple(block.size for block in self.blocks)

    def non_unit_count(self) -> int:
        return sum(1 for block in self.blocks if not block.is_unit())

    def generators(self):
        return frozenset().union(
            *(block.generators() for block in self.blocks)
        )

    def concat(self, other):
        return BlockDiagonal(self.blocks + other.blocks)

    def scaled(self, scalar):
        return BlockDiagonal(block.scaled(scalar) for block in self.blocks)

    def to_matpoly(self) -> MatPoly:
        coeffs = [block.coefficients() for block in self.blocks]
        words = set().union(*coeffs)
        terms = {}
        for word in words:
            terms[word] = block_diag(*(
                c.get(word, np.zeros((block.size, block.size)))
                for c, block in zip(coeffs, self.blocks)
            ))
        return MatPoly(self.size, self.size, terms)


@dataclass(frozen=True, eq=False)
class Factorization:
    '''
        α0 D1 α1 ... Dm αm for an `out_rows` x `out_cols` polynomial. With
        N_ℓ the size of Dℓ, αℓ is N_ℓ x N_ℓ+1, where N_0 = out_rows and
        N_m+1 = out_cols.
    '''
    alphas: Tuple[np.ndarray, ...]
    diags: Tuple[BlockDiagonal, ...]
    out_rows: int
    out_cols: int

    def __post_init__(self):
        object.__setattr__(
            self,
            "alphas",
            tuple(as_matrix(alpha) for alpha in self.alphas),
        )
        object.__setattr__(self, "diags", tuple(self.diags))

        # Validation. Thanks to immutability, this only needs to be carried
        # out once.
        if len(self.diags) < 1:
            raise ChainError("A factorization needs at least one factor")
        if len(self.alphas) != len(self.diags) + 1:
            raise ChainError(
                f"{len(self.diags)} diagonal factors need "
                f"{len(self.diags) + 1} alphas, got {len(self.alphas)}"
            )
        dims = [self.out_rows] + [d.size for d in self.diags] \
            + [self.out_cols]
        for i, alpha in enumerate(self.alphas):
            if alpha.shape != (dims[i], dims[i + 1]):
                raise ChainError(
                    f"alpha {i} has shape {alpha.shape}, "
                    f"expected {(dims[i], dims[i + 1])}"
                )

    def __repr__(self):
        return (
            f"Factorization(alphas={repr(self.alphas)}, "
            f"diags={repr(self.diags)}, "
            f"out_rows={self.out_rows}, out_cols={self.out_cols})"
        )

    @property
    def m(self) -> int:
        return len(self.diags)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(d.size for d in self.diags)

    def alpha_norms(self) -> List[float]:
        return [float(np.linalg.norm(alpha, 2)) for alpha in self.alphas]

    def cost(self) -> float:
        '''∏ ‖αℓ‖, an upper-bound witness for the factorization norm'''
        return float(np.prod(self.alpha_norms()))

    def max_block_degree(self) -> int:
        return max(
            block.to_matpoly().degree()
            for d in self.diags
            for block in d.blocks
        )

    def generators(self):
        return frozenset().union(*(d.generators() for d in self.diags))

    def expand(self) -> MatPoly:
        '''Multiply the chain out symbolically'''
        p = MatPoly.constant(self.alphas[0])
        for d, alpha in zip(self.diags, self.alphas[1:]):
            p = (p @ d.to_matpoly()) @ MatPoly.constant(alpha)
        return p

    def verify(self, p: MatPoly, tol: float = RECONSTRUCTION_TOL):
        if p.shape != (self.out_rows, self.out_cols):
            raise ReconstructionError(
                f"Factorization of shape {self.out_rows}x{self.out_cols} "
                f"can't reconstruct a {p.rows}x{p.cols} polynomial"
            )
        gap = self.expand().max_difference(p)
        if gap > tol:
            raise ReconstructionError(
                f"Factorization expands to within {gap:.3e} of its source, "
                f"tolerance is {tol:.1e}"
            )
        return gap


def factor_monomial(coeff, word: Word) -> Factorization:
    '''
        coeff ⊗ l1...ld = coeff · (I ⊗ l1) · I · ... · (I ⊗ ld) · I. The unit
        word becomes a single unit factor.
    '''
    coeff = as_matrix(coeff)
    rows, cols = coeff.shape
    if len(word) == 0:
        return Factorization(
            (coeff, np.eye(cols)),
            (BlockDiagonal.unit(cols),),
            rows,
            cols,
        )
    return Factorization(
        (coeff,) + tuple(np.eye(cols) for _ in word),
        tuple(
            BlockDiagonal((DegreeOneFactor.letter(cols, letter),))
            for letter in word
        ),
        rows,
        cols,
    )


def equalize_length(f: Factorization, target_m: int) -> Factorization:
    '''Append unit factors (with identity alphas) until there are `target_m`'''
    if target_m < f.m:
        raise ValueError(
            f"Can't shorten a factorization of length {f.m} to {target_m}"
        )
    extra = target_m - f.m
    if extra == 0:
        return f
    n = f.out_cols
    return Factorization(
        f.alphas + tuple(np.eye(n) for _ in range(extra)),
        f.diags + tuple(BlockDiagonal.unit(n) for _ in range(extra)),
        f.out_rows,
        f.out_cols,
    )


def combine_sum(f: Factorization, g: Factorization) -> Factorization:
    '''
        x + y = (1 1) (x 0; 0 y) (1; 1): join the first alphas side by side,
        the last ones on top of each other and everything in between
        diagonally.
    '''
    if (f.out_rows, f.out_cols) != (g.out_rows, g.out_cols):
        raise ShapeError(
            f"Can't add a {f.out_rows}x{f.out_cols} factorization "
            f"to a {g.out_rows}x{g.out_cols} one"
        )
    m = max(f.m, g.m)
    f = equalize_length(f, m)
    g = equalize_length(g, m)

    alphas = [np.hstack([f.alphas[0], g.alphas[0]])]
    for i in range(1, m):
        alphas.append(block_diag(f.alphas[i], g.alphas[i]))
    alphas.append(np.vstack([f.alphas[m], g.alphas[m]]))

    diags = [d.concat(e) for d, e in zip(f.diags, g.diags)]
    return Factorization(alphas, diags, f.out_rows, f.out_cols)


def zero_factorization(rows: int, cols: int) -> Factorization:
    return Factorization(
        (np.zeros((rows, cols)), np.eye(cols)),
        (BlockDiagonal.unit(cols),),
        rows,
        cols,
    )


def factor(p: MatPoly) -> Factorization:
    '''
        Fold `factor_monomial` over the terms in canonical order. The result
        has length max(degree, 1) and every block is a unit or a single
        letter. Monomials are lengthened to the full length before the fold,
        so every factor has the same block sizes.
    '''
    if p.is_zero():
        return zero_factorization(p.rows, p.cols)
    m = max(p.degree(), 1)
    pieces = [
        equalize_length(factor_monomial(coeff, word), m)
        for word, coeff in p.sorted_terms()
    ]
    f = reduce(combine_sum, pieces)
    logger.debug(
        "Factored %d terms into m=%d, sizes %s, cost %.6g",
        len(pieces), f.m, f.sizes, f.cost(),
    )
    return f


def permutation_to_front(size: int, start: int, length: int) -> np.ndarray:
    '''P such that P D P^T moves coordinates start..start+length to the top'''
    moved = list(range(start, start + length))
    rest = [i for i in range(size) if i < start or i >= start + length]
    return np.eye(size)[moved + rest]


def single_blockify(f: Factorization) -> Factorization:
    '''
        Split every Dℓ with several non-unit blocks into a product of factors
        diag(y, 1, ..., 1), one per non-unit block, with permutations inserted
        as extra alphas to move each block into the leading position. Factors
        with at most one non-unit block are left alone.
    '''
    alphas = [f.alphas[0]]
    diags = []
    for d, alpha in zip(f.diags, f.alphas[1:]):
        if d.non_unit_count() <= 1:
            diags.append(d)
            alphas.append(alpha)
            continue

        previous = None
        for block, offset in zip(d.blocks, d.offsets()):
            if block.is_unit():
                continue
            perm = permutation_to_front(d.size, offset, block.size)
            single = BlockDiagonal(
                (block,)
                + tuple(DegreeOneFactor.unit(1)
                        for _ in range(d.size - block.size))
            )
            if previous is None:
                alphas[-1] = alphas[-1] @ perm.T
            else:
                alphas.append(previous @ perm.T)
            diags.append(single)
            previous = perm
        alphas.append(previous @ alpha)

    return Factorization(alphas, diags, f.out_rows, f.out_cols)


def pad(matrix: np.ndarray, rows: int, cols: int) -> np.ndarray:
    padded = np.zeros((rows, cols), dtype=np.complex128)
    padded[:matrix.shape[0], :matrix.shape[1]] = matrix
    return padded


def equalize_sizes(f: Factorization) -> Factorization:
    '''
        Pad every Dℓ with a zero block to the largest size. Only α0 and αm
        can then remain rectangular.
    '''
    size = max(f.sizes)
    diags = [
        d if d.size == size
        else d.concat(BlockDiagonal((DegreeOneFactor.zero(size - d.size),)))
        for d in f.diags
    ]
    alphas = [pad(f.alphas[0], f.out_rows, size)]
    alphas.extend(pad(alpha, size, size) for alpha in f.alphas[1:-1])
    alphas.append(pad(f.alphas[-1], size, f.out_cols))
    return Factorization(alphas, diags, f.out_rows, f.out_cols)


def absorb_scalars(f: Factorization) -> List[MatPoly]:
    '''
        Fold the alphas into the factors: P1 = α0 D1 α1 and Pℓ = Dℓ αℓ,
        so that x = P1 ... Pm with every Pℓ of degree at most 1.
    '''
    chain = []
    for i, (d, alpha) in enumerate(zip(f.diags, f.alphas[1:])):
        left = f.alphas[0] if i == 0 else np.eye(d.size)
        chain.append(d.to_matpoly().scale(left, alpha))
    return chain


def multiply_chain(chain: List[MatPoly]) -> MatPoly:
    return reduce(MatPoly.matmul, chain)


def hermitize(y: DegreeOneFactor) -> DegreeOneFactor:
    '''The self-adjoint doubling (0 y; y* 0), of size 2n'''
    n = y.size
    zero = np.zeros((n, n))

    def doubled(upper, lower):
        return np.block([[zero, upper], [lower.conj().T, zero]])

    gens = y.generators()
    return DegreeOneFactor(
        2 * n,
        doubled(y.a0, y.a0),
        {j: doubled(y.a.get(j, zero), y.b.get(j, zero)) for j in gens},
        {j: doubled(y.b.get(j, zero), y.a.get(j, zero)) for j in gens},
    )


def dehermitize_bracket(h: DegreeOneFactor) -> Tuple[np.ndarray, np.ndarray]:
    '''The row (I 0) and column (0; I) with (I 0) h (0; I) = y'''
    if h.size % 2 != 0:
        raise ShapeError(f"A block of odd size {h.size} is not a doubling")
    n = h.size // 2
    row = np.hstack([np.eye(n), np.zeros((n, n))])
    column = np.vstack([np.zeros((n, n)), np.eye(n)])
    return row, column


def hermitize_factorization(f: Factorization) -> Factorization:
    '''
        Replace every block by its hermitization and fold the extraction
        brackets into the neighbouring alphas. The brackets are a coisometry
        and an isometry, so the cost doesn't change.
    '''
    alphas = list(f.alphas)
    diags = []
    for i, d in enumerate(f.diags):
        doubled = [hermitize(block) for block in d.blocks]
        brackets = [dehermitize_bracket(h) for h in doubled]
        alphas[i] = alphas[i] @ block_diag(*(row for row, _ in brackets))
        alphas[i + 1] = block_diag(*(col for _, col in brackets)) \
            @ alphas[i + 1]
        diags.append(BlockDiagonal(doubled))
    return Factorization(alphas, diags, f.out_rows, f.out_cols)
