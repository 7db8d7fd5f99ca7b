# -*- coding: utf-8 -*-

'''
    Concrete unitary representations: evaluation of polynomials and factors,
    operator norms, and seeded random ensembles. Every norm computed here is
    relative to a finite-dimensional representation and says so in its label.
'''

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag

from .factor import BlockDiagonal, DegreeOneFactor
from .matpoly import MatPoly
from .word import Letter, Word

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-10
SVD_LIMIT = 1024
POWER_TOL = 1e-9
POWER_MAX_ITER = 10_000


class MissingGeneratorError(ValueError):
    '''A polynomial mentions a generator the representation doesn't assign'''
    pass


class NotUnitaryError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    '''Power iteration hit its iteration cap without converging'''
    pass


def unitarity_defect(matrix: np.ndarray) -> float:
    '''‖U*U − I‖_max'''
    n = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(n))))


@dataclass(frozen=True, eq=False)
class Representation:
    '''An assignment of an N x N unitary to each generator index'''
    dim: int
    unitaries: Dict[int, np.ndarray]
    label: str = ""

    def __post_init__(self):
        unitaries = {}
        for gen, matrix in self.unitaries.items():
            Letter(gen)
            matrix = np.array(matrix, dtype=np.complex128)
            if matrix.shape != (self.dim, self.dim):
                raise NotUnitaryError(
                    f"Generator {gen} has shape {matrix.shape}, "
                    f"expected {(self.dim, self.dim)}"
                )
            defect = unitarity_defect(matrix)
            if defect > UNITARY_TOL:
                raise NotUnitaryError(
                    f"Generator {gen} is not unitary: ‖U*U − I‖ = {defect:.3e}"
                )
            matrix.flags.writeable = False
            unitaries[gen] = matrix
        object.__setattr__(self, "unitaries", unitaries)

    def __repr__(self):
        return (
            f"Representation(dim={self.dim}, "
            f"gens={sorted(self.unitaries)}, label={repr(self.label)})"
        )

    def check(self, gens):
        missing = set(gens) - set(self.unitaries)
        if missing:
            raise MissingGeneratorError(
                f"No unitary assigned to generator(s) {sorted(missing)} "
                f"in {repr(self)}"
            )

    def letter_matrix(self, letter: Letter) -> np.ndarray:
        if letter.gen not in self.unitaries:
            self.check({letter.gen})
        matrix = self.unitaries[letter.gen]
        return matrix.conj().T if letter.starred else matrix

    def word_matrix(self, word: Word, cache=None) -> np.ndarray:
        '''ρ(l1...ld) = ρ(l1)...ρ(ld); `cache` memoises prefixes'''
        if cache is None:
            cache = {}
        if word in cache:
            return cache[word]
        if len(word) == 0:
            result = np.eye(self.dim, dtype=np.complex128)
        else:
            prefix = Word(word.letters[:-1])
            result = self.word_matrix(prefix, cache) \
                @ self.letter_matrix(word.letters[-1])
        cache[word] = result
        return result


def evaluate(p: MatPoly, rep: Representation) -> np.ndarray:
    '''Σ coeff ⊗ ρ(word), a (rows·N) x (cols·N) matrix'''
    rep.check(p.generators())
    n = rep.dim
    result = np.zeros((p.rows * n, p.cols * n), dtype=np.complex128)
    cache = {}
    for word, coeff in p.sorted_terms():
        result += np.kron(coeff, rep.word_matrix(word, cache))
    return result


def evaluate_block(y: DegreeOneFactor, rep: Representation) -> np.ndarray:
    rep.check(y.generators())
    result = np.kron(y.a0, np.eye(rep.dim))
    for gen in sorted(y.a):
        result += np.kron(y.a[gen], rep.unitaries[gen])
    for gen in sorted(y.b):
        result += np.kron(y.b[gen], rep.unitaries[gen].conj().T)
    return result


def evaluate_diagonal(d: BlockDiagonal, rep: Representation) -> np.ndarray:
    return block_diag(*(evaluate_block(block, rep) for block in d.blocks))


class NormMethod(Enum):
    FULL_SVD = "full_svd"
    POWER_ITERATION = "power_iteration"


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: NormMethod
    rel_tol: float
    representation_label: str = ""

    def __float__(self):
        return self.value


def power_iteration(matrix: np.ndarray, start: np.ndarray):
    '''
        Largest eigenvalue of A*A by power iteration, returned as a singular
        value of A. Returns None if the iterate collapses to zero.
    '''
    v = start / np.linalg.norm(start)
    previous = None
    for iteration in range(1, POWER_MAX_ITER + 1):
        w = matrix.conj().T @ (matrix @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return None
        rayleigh = float(np.real(np.vdot(v, w)))
        v = w / norm
        if previous is not None \
           and abs(rayleigh - previous) <= POWER_TOL * abs(rayleigh):
            logger.debug("Power iteration converged in %d steps", iteration)
            return float(np.sqrt(max(rayleigh, 0.0)))
        previous = rayleigh
    raise ConvergenceError(
        f"Power iteration did not converge within {POWER_MAX_ITER} steps "
        f"on a {matrix.shape[0]}x{matrix.shape[1]} matrix"
    )


def operator_norm(
    matrix: np.ndarray,
    label: str = "",
    method: Optional[NormMethod] = None,
) -> NormEstimate:
    '''
        Largest singular value. Full SVD up to SVD_LIMIT rows or columns,
        power iteration on A*A beyond that (or when asked for).
    '''
    if matrix.size == 0:
        return NormEstimate(0.0, NormMethod.FULL_SVD, 0.0, label)
    if method is None:
        method = NormMethod.FULL_SVD if max(matrix.shape) <= SVD_LIMIT \
            else NormMethod.POWER_ITERATION

    if method == NormMethod.FULL_SVD:
        value = float(np.linalg.norm(matrix, 2))
        return NormEstimate(value, method, 1e-12, label)

    cols = matrix.shape[1]
    start = np.ones(cols, dtype=np.complex128)
    value = power_iteration(matrix, start)
    if value is None:
        # The all-ones start was orthogonal to the top singular space
        logger.warning("Power iteration stagnated, retrying perturbed start")
        value = power_iteration(matrix, start + np.arange(cols) / cols)
    if value is None:
        value = 0.0
    return NormEstimate(value, method, POWER_TOL, label)


def stream(seed: int, *key: int) -> np.random.Generator:
    '''An independent generator for (seed, *key), whatever the call order'''
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    '''
        Haar-distributed unitary: QR of a complex Ginibre matrix, with the
        phases of R's diagonal moved into Q so the result doesn't depend on
        the QR convention.
    '''
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) \
        / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_permutation_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError(f"Invalid permutation size: {repr(n)}")
    return np.eye(n, dtype=np.complex128)[rng.permutation(n)]


def shift_matrix(n: int) -> np.ndarray:
    '''The cyclic shift e_i -> e_(i+1 mod n)'''
    return np.roll(np.eye(n, dtype=np.complex128), 1, axis=0)


def shift_representation(n: int, k: int) -> Representation:
    '''Every generator 1..k is the same cyclic shift on n points'''
    if k < 1:
        raise ValueError(f"Need at least one generator, got {repr(k)}")
    shift = shift_matrix(n)
    return Representation(
        n,
        {gen: shift for gen in range(1, k + 1)},
        f"circulant_shift(N={n})",
    )


class EnsembleKind(Enum):
    HAAR = "haar_unitary"
    PERMUTATION = "uniform_permutation"
    SHIFT = "circulant_shift"

    @classmethod
    def parse(cls, text: str):
        aliases = {
            "haar": cls.HAAR,
            "perm": cls.PERMUTATION,
            "permutation": cls.PERMUTATION,
            "shift": cls.SHIFT,
        }
        if text in aliases:
            return aliases[text]
        return cls(text)


@dataclass(frozen=True)
class EnsembleSpec:
    '''
        A seeded family of representations. Sample i, generator j is drawn
        from its own stream keyed by (seed, dim, i, j), so samples can be
        drawn in any order or in parallel.
    '''
    kind: EnsembleKind
    dim: int
    gen_count: int
    seed: int = 0
    samples: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind.parse(
            self.kind.value if isinstance(self.kind, EnsembleKind)
            else self.kind
        ))
        if self.dim < 1 or self.gen_count < 1 or self.samples < 1:
            raise ValueError(f"Invalid ensemble: {repr(self)}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"Seed must be a 64-bit unsigned integer: "
                             f"{repr(self.seed)}")

    @classmethod
    def from_dict(cls, block: dict):
        return cls(
            kind=block["kind"],
            dim=int(block["dim"]),
            gen_count=int(block["gen_count"]),
            seed=int(block.get("seed", 0)),
            samples=int(block.get("samples", 1)),
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "dim": self.dim,
            "gen_count": self.gen_count,
            "seed": self.seed,
            "samples": self.samples,
        }

    def sample(self, index: int) -> Representation:
        label = f"{self.kind.value}(N={self.dim}, seed={self.seed}, " \
            f"sample={index})"
        if self.kind == EnsembleKind.SHIFT:
            rep = shift_representation(self.dim, self.gen_count)
            return Representation(rep.dim, rep.unitaries, label)
        draw = haar_unitary if self.kind == EnsembleKind.HAAR \
            else random_permutation_matrix
        unitaries = {
            gen: draw(self.dim, stream(self.seed, self.dim, index, gen))
            for gen in range(1, self.gen_count + 1)
        }
        return Representation(self.dim, unitaries, label)

    def representations(self) -> List[Representation]:
        return [self.sample(i) for i in range(self.samples)]


def parallel_map(function, items, threads: Optional[int] = None) -> list:
    '''`map` over a thread pool; results come back in input order'''
    items = list(items)
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))


@dataclass(frozen=True)
class NormSummary:
    '''Order statistics of a polynomial's norms over an ensemble'''
    spec: EnsembleSpec
    norms: Tuple[float, ...]
    max: float = field(init=False)
    mean: float = field(init=False)
    median: float = field(init=False)

    def __post_init__(self):
        norms = np.array(self.norms)
        object.__setattr__(self, "max", float(np.max(norms)))
        object.__setattr__(self, "mean", float(np.mean(norms)))
        object.__setattr__(self, "median", float(np.median(norms)))


def proxy_norm(
    p: MatPoly,
    spec: EnsembleSpec,
    threads: Optional[int] = None,
) -> NormSummary:
    def norm_of(index):
        rep = spec.sample(index)
        return operator_norm(evaluate(p, rep), rep.label).value

    norms = parallel_map(norm_of, range(spec.samples), threads)
    summary = NormSummary(spec, tuple(norms))
    logger.info(
        "Proxy norm over %s: max %.6g, median %.6g",
        spec.kind.value, summary.max, summary.median,
    )
    return summary


def diagonal_norm(d: BlockDiagonal, rep: Representation) -> float:
    '''The norm of a block diagonal is the largest of its blocks' norms'''
    return max(
        operator_norm(evaluate_block(block, rep), rep.label).value
        for block in d.blocks
    )
