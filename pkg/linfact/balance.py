# -*- coding: utf-8 -*-

'''
    Heuristic balancing of a `Factorization` toward the norm-controlled
    shape: every diagonal factor of proxy norm 1 and ∏‖αℓ‖ as small as
    diagonal similarities can make it. Norms are taken against a reference
    representation or ensemble, so the result is a numerical witness only.
'''

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .corpus import random_matpoly
from .factor import (
    BlockDiagonal, Factorization, VerificationError, RECONSTRUCTION_TOL,
    absorb_scalars, equalize_length, factor,
)
from .matpoly import MatPoly
from .repnorm import (
    EnsembleKind, EnsembleSpec, Representation, diagonal_norm, evaluate,
    operator_norm, parallel_map, stream,
)

logger = logging.getLogger(__name__)

# Scalings tried for each closed-form move, as powers of the full step
STRENGTHS = (1.0, 0.5, 0.25)


class DegenerateFactorError(ValueError):
    '''A diagonal factor evaluates to zero and can't be normalised'''
    pass


@dataclass(frozen=True)
class BalanceConfig:
    '''
        `reference` supplies the proxy norm: a single `Representation`, or an
        `EnsembleSpec` whose samples are all drawn up front and whose largest
        norm is used.
    '''
    reference: Union[EnsembleSpec, Representation]
    max_rounds: int = 50
    similarity_search: bool = True
    tolerance: float = 1e-9
    representations: Tuple[Representation, ...] = field(
        init=False, repr=False, compare=False,
    )

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be ≥ 1: {self.max_rounds}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0: {self.tolerance}")
        if isinstance(self.reference, Representation):
            reps = (self.reference,)
        else:
            reps = tuple(self.reference.representations())
        object.__setattr__(self, "representations", reps)

    def diagonal_proxy(self, d) -> float:
        return max(diagonal_norm(d, rep) for rep in self.representations)

    def poly_proxy(self, p: MatPoly) -> float:
        return max(
            operator_norm(evaluate(p, rep), rep.label).value
            for rep in self.representations
        )


@dataclass(frozen=True)
class BalanceReport:
    initial_cost: float
    final_cost: float
    trajectory: Tuple[float, ...]
    achieved_epsilon: float
    m: int

    @property
    def rounds(self) -> int:
        return len(self.trajectory)


def normalized_cost(f: Factorization, cfg: BalanceConfig) -> float:
    '''∏‖αℓ‖ · ∏ proxy‖Dℓ‖, invariant under rescaling the factors'''
    return f.cost() * float(np.prod([cfg.diagonal_proxy(d) for d in f.diags]))


def geometric_balance(alphas: List[np.ndarray]) -> List[np.ndarray]:
    '''Scale the alphas by tℓ with ∏tℓ = 1 so all norms are equal'''
    norms = [float(np.linalg.norm(alpha, 2)) for alpha in alphas]
    if min(norms) == 0.0:
        return list(alphas)
    mean = math.exp(sum(math.log(norm) for norm in norms) / len(norms))
    return [alpha * (mean / norm) for alpha, norm in zip(alphas, norms)]


def rescale_blocks(f: Factorization, cfg: BalanceConfig) -> Factorization:
    '''
        Divide each Dℓ by its proxy norm, multiply the norm into αℓ, then
        equalize the alpha norms geometrically.
    '''
    alphas = list(f.alphas)
    diags = []
    for i, d in enumerate(f.diags):
        scale = cfg.diagonal_proxy(d)
        if scale < 1e-14:
            raise DegenerateFactorError(
                f"Diagonal factor {i + 1} has proxy norm {scale:.3e}"
            )
        diags.append(d.scaled(1.0 / scale))
        alphas[i + 1] = alphas[i + 1] * scale
    return Factorization(
        geometric_balance(alphas), diags, f.out_rows, f.out_cols,
    )


def log_cost(alphas) -> float:
    norms = [float(np.linalg.norm(alpha, 2)) for alpha in alphas]
    if min(norms) == 0.0:
        return -math.inf
    return sum(math.log(norm) for norm in norms)


def block_slices(d) -> List[slice]:
    return [
        slice(offset, offset + size)
        for offset, size in zip(d.offsets(), d.block_sizes())
    ]


def balancing_scaling(left, right, slices) -> np.ndarray:
    '''
        Per-block t with ‖left[:, k] t‖_F = ‖right[k, :] / t‖_F, the
        closed-form minimiser of the product of those two Frobenius norms.
    '''
    t = np.ones(left.shape[1])
    for sl in slices:
        column = np.linalg.norm(left[:, sl])
        row = np.linalg.norm(right[sl, :])
        if column > 0 and row > 0:
            t[sl] = math.sqrt(row / column)
    return t


def local_move(alphas, i, t):
    '''β = diag(t) between α_i and Dℓ: α_i β, β⁻¹ α_i+1'''
    moved = list(alphas)
    moved[i] = alphas[i] * t[np.newaxis, :]
    moved[i + 1] = alphas[i + 1] / t[:, np.newaxis]
    return moved


def path_move(alphas, t):
    '''The same β at every position: α0 β, β⁻¹ αℓ β, β⁻¹ αm'''
    moved = [alphas[0] * t[np.newaxis, :]]
    moved.extend(
        alpha * (t[np.newaxis, :] / t[:, np.newaxis])
        for alpha in alphas[1:-1]
    )
    moved.append(alphas[-1] / t[:, np.newaxis])
    return moved


def try_move(alphas, current, make):
    '''Apply the first strength of `make` that lowers the objective'''
    for strength in STRENGTHS:
        candidate = make(strength)
        value = log_cost(candidate)
        if value < current:
            return candidate, value
    return alphas, current


def row_balancing(left, d, slices) -> np.ndarray:
    '''
        Per-coordinate t inside every block of size > 1, balancing the
        columns of `left` against the rows of the block, normalised to
        geometric mean 1 on each block.
    '''
    t = np.ones(d.size)
    for block, sl in zip(d.blocks, slices):
        if block.size == 1:
            continue
        columns = np.linalg.norm(left[:, sl], axis=0)
        rows = block.row_norms()
        if np.any(columns == 0) or np.any(rows == 0):
            continue
        local = np.sqrt(rows / columns)
        t[sl] = local / math.exp(float(np.mean(np.log(local))))
    return t


def row_move(alphas, d, i, t, cfg: BalanceConfig):
    '''
        β = diag(t) between α_i and a block-diagonal factor: α_i β and
        β⁻¹ D, renormalised to proxy norm 1 with the norm moved into α_i+1.
        None if the rescaled factor degenerates.
    '''
    moved_d = BlockDiagonal(
        block.row_scaled(1.0 / t[sl])
        for block, sl in zip(d.blocks, block_slices(d))
    )
    scale = cfg.diagonal_proxy(moved_d)
    if scale < 1e-14:
        return None
    moved = list(alphas)
    moved[i] = alphas[i] * t[np.newaxis, :]
    moved[i + 1] = alphas[i + 1] * scale
    return moved, moved_d.scaled(1.0 / scale)


def try_row_move(alphas, diags, i, current, cfg: BalanceConfig):
    '''`row_move` at the first strength that lowers the objective'''
    t = row_balancing(alphas[i], diags[i], block_slices(diags[i]))
    if np.allclose(t, 1.0):
        return alphas, current
    for strength in STRENGTHS:
        result = row_move(alphas, diags[i], i, t ** strength, cfg)
        if result is None:
            break
        moved, moved_d = result
        value = log_cost(moved)
        if value < current:
            diags[i] = moved_d
            return moved, value
    return alphas, current


def similarity_descent(
    f: Factorization,
    cfg: BalanceConfig,
    verify: bool = True,
):
    '''
        Coordinate descent over positive diagonal similarities. Moves that
        are constant on every block leave each Dℓ unchanged; moves inside a
        block rescale its rows and renormalise it to proxy norm 1. Every
        block keeps degree ≤ 1. Returns the balanced factorization and a
        `BalanceReport`; costs are normalized costs.
    '''
    target = f.expand()
    initial = normalized_cost(f, cfg)
    f = rescale_blocks(f, cfg)
    diags = list(f.diags)
    alphas = list(f.alphas)
    current = log_cost(alphas)
    scale = max(1.0, max(
        (float(np.max(np.abs(c))) for c in target.terms.values()),
        default=1.0,
    ))

    shared = len({d.block_sizes() for d in diags}) == 1
    trajectory = []
    if current > -math.inf:
        for number in range(1, cfg.max_rounds + 1):
            start = current
            if shared:
                slices = block_slices(diags[0])
                t = balancing_scaling(alphas[0], alphas[-1], slices)
                alphas, current = try_move(
                    alphas, current, lambda s: path_move(alphas, t ** s),
                )
            for i, d in enumerate(diags):
                slices = block_slices(d)
                t = balancing_scaling(alphas[i], alphas[i + 1], slices)
                alphas, current = try_move(
                    alphas, current, lambda s: local_move(alphas, i, t ** s),
                )
                alphas, current = try_row_move(
                    alphas, diags, i, current, cfg,
                )

            if verify:
                gap = Factorization(alphas, diags, f.out_rows, f.out_cols) \
                    .expand().max_difference(target)
                if gap > RECONSTRUCTION_TOL * scale:
                    raise VerificationError(
                        f"Balancing round {number} moved the expansion "
                        f"by {gap:.3e}"
                    )
            trajectory.append(math.exp(current))
            logger.debug("Round %d: cost %.12g", number, trajectory[-1])
            if math.exp(start) - math.exp(current) < cfg.tolerance:
                break

    balanced = Factorization(
        geometric_balance(alphas), diags, f.out_rows, f.out_cols,
    )
    final = balanced.cost()
    target_norm = cfg.poly_proxy(target)
    if target_norm > 0:
        epsilon = final / target_norm - 1.0
    else:
        epsilon = 0.0 if final == 0.0 else math.inf
    report = BalanceReport(initial, final, tuple(trajectory), epsilon, f.m)
    logger.info(
        "Balanced m=%d: cost %.6g -> %.6g in %d rounds",
        f.m, initial, final, report.rounds,
    )
    return balanced, report


def balance(f: Factorization, cfg: BalanceConfig):
    '''`rescale_blocks`, then `similarity_descent` if the config asks'''
    if cfg.similarity_search:
        return similarity_descent(f, cfg)
    initial = normalized_cost(f, cfg)
    balanced = rescale_blocks(f, cfg)
    target_norm = cfg.poly_proxy(f.expand())
    final = balanced.cost()
    epsilon = final / target_norm - 1.0 if target_norm > 0 else 0.0
    return balanced, BalanceReport(initial, final, (final,), epsilon, f.m)


@dataclass(frozen=True)
class ProbeRow:
    d: int
    n: int
    eps: float
    instance: int
    achieved_m: Optional[int]
    achieved_cost: float


def balanced_chain(f: Factorization, cfg: BalanceConfig) -> List[MatPoly]:
    '''
        `absorb_scalars`, with scalar multiples moved along the chain so
        that every Pℓ has the same proxy norm. The product is unchanged.
    '''
    chain = absorb_scalars(f)
    norms = [cfg.poly_proxy(p) for p in chain]
    if min(norms) == 0.0:
        return chain
    mean = math.exp(sum(math.log(norm) for norm in norms) / len(norms))
    return [p * (mean / norm) for p, norm in zip(chain, norms)]


def chain_norms(f: Factorization, cfg: BalanceConfig) -> List[float]:
    return [cfg.poly_proxy(p) for p in balanced_chain(f, cfg)]


def probe_instance(p: MatPoly, cfg: BalanceConfig, max_extra: int = 2):
    '''
        The smallest length, from max(degree, 1) up to `max_extra` more, at
        which the balanced P1...Pm all have proxy norm < 1; None if none
        does. Also returns the best cost seen.
    '''
    f0 = factor(p)
    best = math.inf
    for length in range(f0.m, f0.m + max_extra + 1):
        f, report = balance(equalize_length(f0, length), cfg)
        best = min(best, report.final_cost)
        if max(chain_norms(f, cfg)) < 1.0:
            return length, report.final_cost
    return None, best


def default_probe_config(seed: int) -> BalanceConfig:
    return BalanceConfig(EnsembleSpec(EnsembleKind.HAAR, 16, 2, seed, 2))


def probe_m(
    d: int,
    n: int,
    eps: float,
    corpus_seed: int,
    count: int = 10,
    cfg: Optional[BalanceConfig] = None,
    max_extra: int = 2,
    threads: Optional[int] = None,
) -> List[ProbeRow]:
    '''
        Factor and balance a seeded corpus of n x n polynomials of degree at
        most d, normalised to proxy norm 1 − eps, and record the length at
        which every factor of the chain is a proxy contraction.
    '''
    if d < 1 or n < 1:
        raise ValueError(f"Need d, n ≥ 1, got d={d}, n={n}")
    if not 0 < eps < 1:
        raise ValueError(f"Need 0 < eps < 1, got {eps}")
    if cfg is None:
        cfg = default_probe_config(corpus_seed)

    def run(index):
        rng = stream(corpus_seed, d, n, index)
        p = random_matpoly(
            rng, gens=2, max_degree=d, max_terms=4, shape=(n, n),
            gaussian=True,
        )
        p = p * ((1.0 - eps) / cfg.poly_proxy(p))
        achieved_m, cost = probe_instance(p, cfg, max_extra)
        if achieved_m is None:
            logger.warning(
                "Instance %d (d=%d, n=%d): no contractive chain, best cost "
                "%.6g", index, d, n, cost,
            )
        return ProbeRow(d, n, eps, index, achieved_m, cost)

    return parallel_map(run, range(count), threads)
