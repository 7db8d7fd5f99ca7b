# -*- coding: utf-8 -*-

'''
    The invariant suite behind `linfact selftest`: every family of checks the
    unit tests make, at desk scale and from fixed seeds, one line of output
    per suite.
'''

import io
import logging
import math
import sys

import numpy as np

from .balance import BalanceConfig, balance, normalized_cost
from .corpus import random_degree_one, random_matpoly
from .factor import (
    DegreeOneFactor, absorb_scalars, dehermitize_bracket, equalize_length,
    equalize_sizes, factor, hermitize, multiply_chain, single_blockify,
)
from .matpoly import MatPoly
from .repnorm import (
    EnsembleKind, EnsembleSpec, evaluate, evaluate_block, operator_norm,
    shift_representation, stream,
)
from .transfer import TransferConfig, run_transfer, write_csv
from .word import Letter, Word

logger = logging.getLogger(__name__)


class SuiteFailure(AssertionError):
    pass


def check(condition: bool, message: str):
    if not condition:
        raise SuiteFailure(message)


def corpus(seed: int, family: int, count: int, **kwargs):
    return [
        random_matpoly(stream(seed, family, i), **kwargs)
        for i in range(count)
    ]


def coefficient_scale(p: MatPoly) -> float:
    return max(
        (float(np.max(np.abs(c))) for c in p.terms.values()),
        default=1.0,
    )


def reconstruction(seed, threads):
    polys = corpus(seed, 1, 200)
    worst = 0.0
    for p in polys:
        worst = max(worst, factor(p).verify(p))
    return f"200 polynomials, worst gap {worst:.1e}"


def absorb(seed, threads):
    for i, p in enumerate(corpus(seed, 1, 200)):
        chain = absorb_scalars(factor(p))
        check(
            all(q.degree() <= 1 for q in chain),
            f"instance {i}: a factor of degree > 1",
        )
        gap = multiply_chain(chain).max_difference(p)
        check(gap <= 1e-9, f"instance {i}: product is off by {gap:.3e}")
    return "200 chains of degree-1 factors"


def rewriting(seed, threads):
    rewrites = {
        "single_blockify": single_blockify,
        "equalize_sizes": equalize_sizes,
        "equalize_length": lambda f: equalize_length(f, f.m + 1),
    }
    for i, p in enumerate(corpus(seed, 2, 100)):
        f = factor(p)
        target = f.expand()
        tol = 1e-12 * max(1.0, coefficient_scale(target))
        for name, rewrite in rewrites.items():
            g = rewrite(f)
            gap = g.expand().max_difference(target)
            check(gap <= tol, f"instance {i}: {name} moved by {gap:.3e}")
            check(
                g.cost() <= f.cost() * (1 + 1e-12),
                f"instance {i}: {name} raised the cost",
            )
    return "100 factorizations, 3 rewrites each"


def homomorphism(seed, threads):
    spec = EnsembleSpec(EnsembleKind.HAAR, 32, 2, seed, 1)
    rep = spec.sample(0)
    for i in range(100):
        rng = stream(seed, 3, i)
        rows, inner, cols = (int(k) for k in rng.integers(1, 4, 3))
        p = random_matpoly(rng, max_degree=2, shape=(rows, inner))
        q = random_matpoly(rng, max_degree=2, shape=(inner, cols))
        ep, eq = evaluate(p, rep), evaluate(q, rep)
        gap = float(np.max(np.abs(evaluate(p @ q, rep) - ep @ eq)))
        scale = 1 + np.linalg.norm(ep, 2) * np.linalg.norm(eq, 2)
        check(gap <= 1e-9 * scale, f"triple {i}: off by {gap:.3e}")
        star = float(np.max(np.abs(
            evaluate(p.adjoint(), rep) - ep.conj().T
        )))
        check(star <= 1e-12, f"triple {i}: adjoint off by {star:.3e}")
    return "100 triples at N=32"


def analytic_norms(seed, threads):
    x1 = Word.of(Letter(1))
    p = MatPoly.monomial([[1]], x1) + MatPoly.monomial([[1]], x1.adjoint())
    for n in (3, 8, 64, 257):
        rep = shift_representation(n, 1)
        norm = operator_norm(evaluate(p, rep)).value
        check(abs(norm - 2) <= 1e-9, f"‖x1 + x1*‖ = {norm!r} at N={n}")

    rep = shift_representation(64, 1)
    roots = np.exp(2j * np.pi * np.arange(64) / 64)
    for i in range(20):
        rng = stream(seed, 4, i)
        a0, a1 = rng.standard_normal((2, 2, 2)) \
            + 1j * rng.standard_normal((2, 2, 2))
        q = MatPoly.constant(a0) + MatPoly.monomial(a1, x1)
        symbol = max(np.linalg.norm(a0 + a1 * w, 2) for w in roots)
        norm = operator_norm(evaluate(q, rep)).value
        check(
            abs(norm - symbol) <= 1e-9 * max(1.0, symbol),
            f"pair {i}: {norm!r} against symbol maximum {symbol!r}",
        )
    return "shift oracles at N in (3, 8, 64, 257), 20 symbols at N=64"


def sum_of_letters(starred: bool) -> MatPoly:
    p = MatPoly.zero(1, 1)
    for gen in (1, 2):
        word = Word.of(Letter(gen))
        p = p + MatPoly.monomial([[1]], word)
        if starred:
            p = p + MatPoly.monomial([[1]], word.adjoint())
    return p


def transfer_bound(seed, threads):
    count = 0
    for kind in (EnsembleKind.HAAR, EnsembleKind.PERMUTATION):
        for starred in (False, True):
            report = run_transfer(TransferConfig(
                sum_of_letters(starred), kind, (25, 50, 100, 200), 20,
                seed, threads=threads,
            ))
            count += len(report.samples)
    return f"{count} samples within the product bound"


def strong_convergence(seed, threads):
    spec = EnsembleSpec(EnsembleKind.HAAR, 200, 2, seed, 20)
    for starred, limit in ((False, 2.0), (True, 2 * math.sqrt(3))):
        p = sum_of_letters(starred)
        norms = [
            operator_norm(evaluate(p, rep)).value
            for rep in spec.representations()
        ]
        median = float(np.median(norms))
        check(
            abs(median - limit) <= 0.1 * limit,
            f"median {median:.6f} is not within 10% of {limit:.6f}",
        )
    return "medians within 10% of 2 and 2√3 at N=200"


def hermitization(seed, threads):
    rep = EnsembleSpec(EnsembleKind.HAAR, 32, 2, seed, 1).sample(0)
    for i in range(50):
        y = random_degree_one(stream(seed, 5, i), 2)
        h = hermitize(y)
        check(h.is_self_adjoint(0.0), f"factor {i}: not self-adjoint")
        plain = operator_norm(evaluate_block(y, rep)).value
        doubled = operator_norm(evaluate_block(h, rep)).value
        check(
            abs(plain - doubled) <= 1e-8 * plain,
            f"factor {i}: norms {plain!r} and {doubled!r}",
        )
        row, column = dehermitize_bracket(h)
        extracted = h.to_matpoly().scale(row, column)
        check(
            extracted == y.to_matpoly(),
            f"factor {i}: bracket extraction isn't exact",
        )
    return "50 degree-1 factors at N=32"


def degree_one_product(rng, cfg: BalanceConfig, count: int = 2):
    '''Scalar factors a0 + a1 x_j, each scaled to proxy norm 1'''
    factors = []
    for _ in range(count):
        gen = int(rng.integers(1, 3))
        a0, a1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        y = DegreeOneFactor(1, [[a0]], {gen: [[a1]]}).to_matpoly()
        factors.append(y * (1.0 / cfg.poly_proxy(y)))
    return multiply_chain(factors)


def balancer(seed, threads):
    cfg = BalanceConfig(EnsembleSpec(EnsembleKind.HAAR, 16, 2, seed, 2))
    descents = 0
    for i, p in enumerate(corpus(seed, 6, 100, max_degree=3, max_terms=4)):
        if p.is_zero():
            continue
        f = factor(p)
        descents += 1
        _, report = balance(f, cfg)
        check(
            report.final_cost <= normalized_cost(f, cfg) + cfg.tolerance,
            f"instance {i}: cost rose from {report.initial_cost!r} "
            f"to {report.final_cost!r}",
        )

    cfg = BalanceConfig(EnsembleSpec(EnsembleKind.HAAR, 128, 2, seed, 4))
    passed = 0
    for i in range(50):
        p = degree_one_product(stream(seed, 7, i), cfg)
        _, report = balance(factor(p), cfg)
        if report.final_cost <= 1.01:
            passed += 1
    check(passed >= 40, f"only {passed}/50 round trips within 1%")
    return f"{descents} monotone descents, {passed}/50 round trips within 1%"


def determinism(seed, threads):
    spec = EnsembleSpec(EnsembleKind.HAAR, 20, 2, seed, 3)
    check(
        all(
            np.array_equal(a.unitaries[gen], b.unitaries[gen])
            for a, b in zip(spec.representations(), spec.representations())
            for gen in (1, 2)
        ),
        "resampling changed a unitary",
    )
    outputs = set()
    for count in (1, 4):
        cfg = TransferConfig(
            sum_of_letters(True), EnsembleKind.PERMUTATION, (10, 20), 4,
            seed, threads=count,
        )
        buffer = io.StringIO()
        write_csv(run_transfer(cfg), buffer)
        outputs.add(buffer.getvalue())
    check(len(outputs) == 1, "CSV differs between thread counts")
    return "samples and CSV identical across runs and thread counts"


SUITES = [
    ("reconstruction", reconstruction),
    ("absorb", absorb),
    ("rewriting", rewriting),
    ("homomorphism", homomorphism),
    ("analytic_norms", analytic_norms),
    ("transfer_bound", transfer_bound),
    ("strong_convergence", strong_convergence),
    ("hermitization", hermitization),
    ("balancer", balancer),
    ("determinism", determinism),
]


def run_selftest(seed: int = 0, threads=None, out=None) -> int:
    '''Run every suite, print one line each; returns the number of failures'''
    if out is None:
        out = sys.stdout
    failures = 0
    for name, suite in SUITES:
        logger.info("Running suite %s", name)
        try:
            detail = suite(seed, threads)
        except Exception as e:
            failures += 1
            print(f"{name}: FAIL ({type(e).__name__}: {e})", file=out)
        else:
            print(f"{name}: ok ({detail})", file=out)
    print(f"{len(SUITES) - failures}/{len(SUITES)} suites passed", file=out)
    return failures
