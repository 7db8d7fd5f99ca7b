# -*- coding: utf-8 -*-

'''
    Norm transfer across random unitary ensembles. A polynomial is factored
    once; for each sampled representation both the polynomial and every
    diagonal factor are evaluated, and the direct norm is compared against
    the product bound ∏‖αℓ‖ · ∏‖Dℓ(N)‖.
'''

import csv
import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .factor import (
    Factorization, VerificationError, factor, hermitize_factorization,
)
from .matpoly import MatPoly
from .repnorm import (
    EnsembleKind, EnsembleSpec, Representation, evaluate, evaluate_block,
    evaluate_diagonal, operator_norm, parallel_map,
)

logger = logging.getLogger(__name__)

# Allowed excess of a direct norm over its product bound
BOUND_SLACK = 1e-7
HERMITIAN_TOL = 1e-10


class BoundViolation(VerificationError):
    '''
        A direct norm exceeded its submultiplicative bound. That can't
        happen mathematically, so it means evaluation is broken.
    '''
    pass


class MissingReferenceError(ValueError):
    pass


@dataclass(frozen=True)
class TransferConfig:
    polynomial: MatPoly
    kind: EnsembleKind
    sizes: Tuple[int, ...]
    samples_per_size: int = 20
    seed: int = 0
    self_adjoint_mode: bool = False
    epsilon: float = 0.05
    references: Optional[Tuple[float, ...]] = None
    poly_reference: Optional[float] = None
    threads: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind.parse(
            self.kind.value if isinstance(self.kind, EnsembleKind)
            else self.kind
        ))
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if len(self.sizes) == 0 or any(
            a >= b for a, b in zip(self.sizes, self.sizes[1:])
        ):
            raise ValueError(
                f"Sizes must be strictly increasing: {self.sizes}"
            )
        if self.samples_per_size < 1:
            raise ValueError(
                f"Need at least one sample per size: {self.samples_per_size}"
            )
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0: {self.epsilon}")
        if self.references is not None:
            object.__setattr__(self, "references", tuple(self.references))

    @property
    def gen_count(self) -> int:
        return max(self.polynomial.generators(), default=1)

    def ensemble(self, size: int) -> EnsembleSpec:
        return EnsembleSpec(
            self.kind, size, self.gen_count, self.seed, self.samples_per_size,
        )


@dataclass(frozen=True)
class TransferSample:
    size: int
    sample: int
    direct_norm: float
    factor_norms: Tuple[float, ...]
    bound: float
    factor_exceed: Tuple[bool, ...] = ()
    poly_exceed: bool = False

    @property
    def max_factor_norm(self) -> float:
        return max(self.factor_norms)

    @property
    def exceed_flag(self) -> bool:
        return self.poly_exceed or any(self.factor_exceed)


@dataclass(frozen=True)
class SizeSummary:
    size: int
    count: int
    direct_max: float
    direct_mean: float
    direct_median: float
    bound_max: float
    bound_mean: float
    bound_median: float
    factor_exceed_fractions: Tuple[float, ...] = ()
    poly_exceed_fraction: float = 0.0


@dataclass(frozen=True)
class TransferReport:
    config: TransferConfig
    m: int
    cost: float
    samples: Tuple[TransferSample, ...]
    summaries: Tuple[SizeSummary, ...] = field(init=False)
    cost_inflation: float = 1.0
    references: Optional[Tuple[float, ...]] = None
    reference_source: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        object.__setattr__(self, "summaries", tuple(
            summarize(size, [s for s in self.samples if s.size == size])
            for size in self.config.sizes
        ))

    def poly_trend(self) -> Tuple[float, ...]:
        return tuple(s.poly_exceed_fraction for s in self.summaries)

    def factor_trend(self) -> Tuple[float, ...]:
        '''Per size, the fraction of samples with any factor exceeding'''
        return tuple(
            np.mean([any(s.factor_exceed) for s in self.samples
                     if s.size == summary.size]).item()
            for summary in self.summaries
        )


def summarize(size: int, samples) -> SizeSummary:
    direct = np.array([s.direct_norm for s in samples])
    bound = np.array([s.bound for s in samples])
    m = len(samples[0].factor_norms)
    factor_fractions = tuple(
        float(np.mean([
            s.factor_exceed[i] if s.factor_exceed else False
            for s in samples
        ]))
        for i in range(m)
    )
    return SizeSummary(
        size,
        len(samples),
        float(direct.max()),
        float(direct.mean()),
        float(np.median(direct)),
        float(bound.max()),
        float(bound.mean()),
        float(np.median(bound)),
        factor_fractions,
        float(np.mean([s.poly_exceed for s in samples])),
    )


def factor_norms(
    f: Factorization,
    rep: Representation,
    check_hermitian: bool = False,
) -> Tuple[float, ...]:
    '''‖Dℓ(N)‖ for every ℓ, block by block'''
    norms = []
    for ell, d in enumerate(f.diags, 1):
        norm = 0.0
        for block in d.blocks:
            matrix = evaluate_block(block, rep)
            if check_hermitian:
                gap = float(np.max(np.abs(matrix - matrix.conj().T)))
                if gap > HERMITIAN_TOL:
                    raise VerificationError(
                        f"Hermitized factor {ell} is off by {gap:.3e} "
                        f"under {rep.label}"
                    )
            norm = max(norm, operator_norm(matrix, rep.label).value)
        norms.append(norm)
    return tuple(norms)


def substitution_gap(f: Factorization, rep: Representation) -> float:
    '''
        Relative max-entry gap between (α0⊗I) D1(N) (α1⊗I) ... Dm(N) (αm⊗I)
        and the evaluated expansion of f
    '''
    identity = np.eye(rep.dim)
    product = np.kron(f.alphas[0], identity)
    for d, alpha in zip(f.diags, f.alphas[1:]):
        product = product @ evaluate_diagonal(d, rep) \
            @ np.kron(alpha, identity)
    expanded = evaluate(f.expand(), rep)
    scale = max(1.0, float(np.max(np.abs(expanded))))
    return float(np.max(np.abs(product - expanded))) / scale


def measure(p: MatPoly, f: Factorization, cfg: TransferConfig, key):
    size, index = key
    rep = cfg.ensemble(size).sample(index)
    direct = operator_norm(evaluate(p, rep), rep.label).value
    norms = factor_norms(f, rep, check_hermitian=cfg.self_adjoint_mode)
    bound = f.cost() * float(np.prod(norms))
    if direct > bound + BOUND_SLACK:
        raise BoundViolation(
            f"Direct norm {direct:.17g} exceeds bound {bound:.17g} "
            f"under {rep.label}"
        )
    return TransferSample(size, index, direct, norms, bound)


def run(cfg: TransferConfig) -> TransferReport:
    p = cfg.polynomial
    f = factor(p)
    inflation = 1.0
    if cfg.self_adjoint_mode:
        plain = f.cost()
        f = hermitize_factorization(f)
        if plain > 0:
            inflation = f.cost() / plain
    logger.info(
        "Transfer: m=%d, cost %.6g, sizes %s, %d samples each",
        f.m, f.cost(), cfg.sizes, cfg.samples_per_size,
    )
    keys = [
        (size, index)
        for size in cfg.sizes
        for index in range(cfg.samples_per_size)
    ]
    samples = parallel_map(
        lambda key: measure(p, f, cfg, key), keys, cfg.threads,
    )
    return TransferReport(cfg, f.m, f.cost(), samples, inflation)


def run_transfer(cfg: TransferConfig) -> TransferReport:
    return run(cfg)


def run_transfer_sa(cfg: TransferConfig) -> TransferReport:
    '''Like `run_transfer`, with every factor hermitized before substitution'''
    return run(replace(cfg, self_adjoint_mode=True))


def run_probability_variant(cfg: TransferConfig) -> TransferReport:
    '''
        Per size, the fraction of samples in which a factor norm exceeds its
        reference + ε, and in which the direct norm exceeds the polynomial
        threshold: `poly_reference` + ε when given, else cost · ∏(rℓ + ε).
        Without user references, each factor's median norm at the largest
        size stands in.
    '''
    report = run(cfg)
    eps = cfg.epsilon
    if cfg.references is not None:
        if len(cfg.references) != report.m \
           or any(r is None for r in cfg.references):
            raise MissingReferenceError(
                f"Need {report.m} factor reference values, "
                f"got {cfg.references}"
            )
        references = tuple(float(r) for r in cfg.references)
        source = "user"
    else:
        largest = cfg.sizes[-1]
        norms = np.array([
            s.factor_norms for s in report.samples if s.size == largest
        ])
        references = tuple(float(r) for r in np.median(norms, axis=0))
        source = "largest_n_proxy"

    if cfg.poly_reference is not None:
        threshold = cfg.poly_reference + eps
    else:
        threshold = report.cost * float(np.prod([r + eps for r in references]))

    samples = [
        replace(
            s,
            factor_exceed=tuple(
                norm > r + eps for norm, r in zip(s.factor_norms, references)
            ),
            poly_exceed=s.direct_norm > threshold,
        )
        for s in report.samples
    ]
    return TransferReport(
        cfg, report.m, report.cost, samples, report.cost_inflation,
        references, source,
    )


def is_non_increasing(values) -> bool:
    return all(a >= b for a, b in zip(values, values[1:]))


def fmt(value: float) -> str:
    return f"{value:.17g}"


def write_csv(report: TransferReport, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([
        "N", "sample", "direct_norm", "bound", "max_factor_norm",
        "exceed_flag",
    ])
    for s in report.samples:
        writer.writerow([
            s.size, s.sample, fmt(s.direct_norm), fmt(s.bound),
            fmt(s.max_factor_norm), int(s.exceed_flag),
        ])


def write_summary_csv(report: TransferReport, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([
        "N", "samples", "direct_max", "direct_mean", "direct_median",
        "bound_max", "bound_mean", "bound_median", "factor_exceed_fraction",
        "poly_exceed_fraction", "reference_source",
    ])
    for summary, trend in zip(report.summaries, report.factor_trend()):
        writer.writerow([
            summary.size, summary.count,
            fmt(summary.direct_max), fmt(summary.direct_mean),
            fmt(summary.direct_median), fmt(summary.bound_max),
            fmt(summary.bound_mean), fmt(summary.bound_median),
            fmt(trend), fmt(summary.poly_exceed_fraction),
            report.reference_source or "",
        ])
