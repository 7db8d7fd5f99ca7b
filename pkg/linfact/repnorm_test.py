# -*- coding: utf-8 -*-

if __name__ == "__main__":
    raise Exception(
        "Test files can't be run directly. Use `python -m pytest linfact`"
    )

import math

import numpy as np
import pytest

from . import repnorm
from .corpus import random_degree_one, random_matpoly
from .factor import BlockDiagonal, DegreeOneFactor
from .matpoly import MatPoly
from .parse import parse_word
from .repnorm import (
    ConvergenceError, EnsembleKind, EnsembleSpec, MissingGeneratorError,
    NormMethod, NotUnitaryError, Representation, diagonal_norm, evaluate,
    evaluate_block, evaluate_diagonal, haar_unitary, operator_norm,
    parallel_map, power_iteration, proxy_norm, random_permutation_matrix,
    shift_matrix, shift_representation, stream, unitarity_defect,
)
from .word import UNIT


@pytest.fixture
def rep():
    return EnsembleSpec(EnsembleKind.HAAR, 8, 3, seed=5).sample(0)


def test_representation_validation():
    with pytest.raises(NotUnitaryError):
        Representation(2, {1: [[1, 1], [0, 1]]})
    with pytest.raises(NotUnitaryError):
        Representation(2, {1: np.eye(3)})
    with pytest.raises(ValueError):
        Representation(2, {0: np.eye(2)})


def test_missing_generator(rep):
    p = MatPoly.monomial([[1]], parse_word("x4"))
    with pytest.raises(MissingGeneratorError):
        evaluate(p, rep)


def test_evaluate_words(rep):
    u1, u2 = rep.unitaries[1], rep.unitaries[2]
    assert np.allclose(evaluate(MatPoly.identity(1), rep), np.eye(8))
    assert np.allclose(
        evaluate(MatPoly.monomial([[1]], parse_word("x1 x2*")), rep),
        u1 @ u2.conj().T,
    )
    assert np.allclose(
        evaluate(MatPoly.monomial([[2j]], parse_word("x2* x2")), rep),
        2j * np.eye(8),
    )


def test_evaluate_layout(rep):
    # coefficient ⊗ matrix, coefficient index outermost
    coeff = np.array([[1, 2, 3]])
    p = MatPoly.monomial(coeff, parse_word("x1"))
    assert np.allclose(evaluate(p, rep), np.kron(coeff, rep.unitaries[1]))
    assert evaluate(p, rep).shape == (8, 24)


def test_evaluation_is_a_homomorphism(rep):
    for i in range(20):
        rng = stream(20, i)
        p = random_matpoly(rng, gens=3, max_degree=2, shape=(2, 3))
        q = random_matpoly(rng, gens=3, max_degree=2, shape=(3, 1))
        ep, eq = evaluate(p, rep), evaluate(q, rep)
        gap = np.max(np.abs(evaluate(p @ q, rep) - ep @ eq))
        scale = 1 + np.linalg.norm(ep, 2) * np.linalg.norm(eq, 2)
        assert gap <= 1e-9 * scale


def test_evaluation_respects_adjoints(rep):
    for i in range(20):
        p = random_matpoly(stream(21, i), gens=3)
        star = evaluate(p.adjoint(), rep)
        gap = np.max(np.abs(star - evaluate(p, rep).conj().T))
        assert gap <= 1e-12


def test_evaluate_block(rep):
    y = random_degree_one(stream(22, 0), 2)
    assert np.allclose(evaluate_block(y, rep), evaluate(y.to_matpoly(), rep))


def test_diagonal_norm(rep):
    d = BlockDiagonal((
        random_degree_one(stream(23, 0), 2),
        DegreeOneFactor.unit(1),
        random_degree_one(stream(23, 1), 3),
    ))
    whole = np.linalg.norm(evaluate_diagonal(d, rep), 2)
    assert diagonal_norm(d, rep) == pytest.approx(whole, rel=1e-12)
    assert np.allclose(
        evaluate_diagonal(d, rep), evaluate(d.to_matpoly(), rep)
    )


def test_operator_norm_methods_agree():
    for i in range(3):
        rng = stream(24, i)
        a = (rng.standard_normal((200, 200))
             + 1j * rng.standard_normal((200, 200))) / math.sqrt(400)
        # a clear top singular value
        a[0, 0] += 3
        full = operator_norm(a, method=NormMethod.FULL_SVD)
        power = operator_norm(a, method=NormMethod.POWER_ITERATION)
        assert full.method == NormMethod.FULL_SVD
        assert power.method == NormMethod.POWER_ITERATION
        assert power.value == pytest.approx(full.value, rel=1e-7)


def test_operator_norm_picks_svd_for_small_matrices():
    estimate = operator_norm(np.eye(3), "identity")
    assert estimate.method == NormMethod.FULL_SVD
    assert estimate.representation_label == "identity"
    assert float(estimate) == pytest.approx(1)


def test_operator_norm_of_zero():
    assert operator_norm(np.zeros((4, 4))).value == 0
    zero = operator_norm(np.zeros((4, 4)), method=NormMethod.POWER_ITERATION)
    assert zero.value == 0


def test_power_iteration_collapse():
    assert power_iteration(np.zeros((3, 3)), np.ones(3)) is None


def test_power_iteration_cap(monkeypatch):
    monkeypatch.setattr(repnorm, "POWER_MAX_ITER", 2)
    rng = stream(25, 0)
    a = rng.standard_normal((50, 50))
    with pytest.raises(ConvergenceError):
        power_iteration(a, np.ones(50))


def test_haar_unitary():
    for n in (1, 2, 17, 64):
        u = haar_unitary(n, stream(26, n))
        assert u.shape == (n, n)
        assert unitarity_defect(u) <= 1e-10


def test_haar_unitary_is_reproducible():
    a = haar_unitary(10, stream(27, 1, 2))
    b = haar_unitary(10, stream(27, 1, 2))
    c = haar_unitary(10, stream(27, 2, 1))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_haar_trace_moments():
    # E|tr U|^2 = 1 for Haar unitaries of any size
    traces = [
        abs(np.trace(haar_unitary(8, stream(28, i)))) ** 2
        for i in range(2000)
    ]
    assert np.mean(traces) == pytest.approx(1, abs=0.15)


def test_random_permutation_matrix():
    p = random_permutation_matrix(6, stream(29, 0))
    assert np.array_equal(p.sum(axis=0), np.ones(6))
    assert np.array_equal(p.sum(axis=1), np.ones(6))
    assert unitarity_defect(p) == 0
    with pytest.raises(ValueError):
        random_permutation_matrix(0, stream(29, 1))


def test_shift_representation():
    x1 = MatPoly.monomial([[1]], parse_word("x1"))
    p = x1 + x1.adjoint()
    for n in (3, 8, 64, 257):
        rep = shift_representation(n, 1)
        assert operator_norm(evaluate(p, rep)).value \
            == pytest.approx(2, abs=1e-9)


def test_shift_has_order_n():
    n = 7
    rep = shift_representation(n, 2)
    assert np.array_equal(rep.unitaries[1], rep.unitaries[2])
    word = MatPoly.monomial([[1]], parse_word(" ".join(["x1"] * n)))
    assert np.allclose(evaluate(word, rep), np.eye(n))
    assert np.array_equal(shift_matrix(3) @ [1, 0, 0], [0, 1, 0])


def test_shift_matches_fourier_symbol():
    n = 64
    rep = shift_representation(n, 1)
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    for i in range(5):
        rng = stream(30, i)
        a0 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        a1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        p = MatPoly.from_terms(2, 2, [(UNIT, a0), (parse_word("x1"), a1)])
        symbol = max(np.linalg.norm(a0 + a1 * w, 2) for w in roots)
        assert operator_norm(evaluate(p, rep)).value \
            == pytest.approx(symbol, rel=1e-9)


def test_ensemble_kind_aliases():
    assert EnsembleKind.parse("haar") == EnsembleKind.HAAR
    assert EnsembleKind.parse("perm") == EnsembleKind.PERMUTATION
    assert EnsembleKind.parse("shift") == EnsembleKind.SHIFT
    assert EnsembleKind.parse("uniform_permutation") \
        == EnsembleKind.PERMUTATION
    with pytest.raises(ValueError):
        EnsembleKind.parse("gue")


def test_ensemble_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("haar", 0, 1)
    with pytest.raises(ValueError):
        EnsembleSpec("haar", 4, 0)
    with pytest.raises(ValueError):
        EnsembleSpec("haar", 4, 1, seed=-1)
    assert EnsembleSpec("perm", 4, 1).kind == EnsembleKind.PERMUTATION


def test_ensemble_spec_dict():
    block = {
        "kind": "haar_unitary", "dim": 5, "gen_count": 2, "seed": 9,
        "samples": 3,
    }
    spec = EnsembleSpec.from_dict(block)
    assert spec == EnsembleSpec(EnsembleKind.HAAR, 5, 2, 9, 3)
    assert spec.to_dict() == block


def test_sampling_is_deterministic():
    spec = EnsembleSpec(EnsembleKind.HAAR, 6, 2, seed=31, samples=4)
    forward = spec.representations()
    backward = [spec.sample(i) for i in reversed(range(4))][::-1]
    for a, b in zip(forward, backward):
        for gen in (1, 2):
            assert np.array_equal(a.unitaries[gen], b.unitaries[gen])
            assert unitarity_defect(a.unitaries[gen]) <= 1e-10
    assert not np.array_equal(forward[0].unitaries[1], forward[1].unitaries[1])
    assert not np.array_equal(forward[0].unitaries[1], forward[0].unitaries[2])


def test_sample_labels():
    rep = EnsembleSpec(EnsembleKind.PERMUTATION, 6, 1, seed=2).sample(3)
    assert rep.label == "uniform_permutation(N=6, seed=2, sample=3)"


def test_parallel_map_keeps_order():
    items = list(range(50))
    assert parallel_map(lambda x: x * x, items, threads=4) \
        == [x * x for x in items]
    assert parallel_map(lambda x: -x, items, threads=1) == [-x for x in items]


def test_proxy_norm():
    x1 = MatPoly.monomial([[1]], parse_word("x1"))
    p = x1 + x1.adjoint()
    summary = proxy_norm(p, EnsembleSpec(EnsembleKind.SHIFT, 16, 1, 0, 3))
    assert len(summary.norms) == 3
    assert summary.max == pytest.approx(2)
    assert summary.median == pytest.approx(2)


def test_proxy_norm_is_independent_of_threads():
    p = MatPoly.from_terms(1, 1, [
        (parse_word("x1"), [[1]]),
        (parse_word("x2 x1*"), [[0.5j]]),
    ])
    spec = EnsembleSpec(EnsembleKind.HAAR, 12, 2, 32, 6)
    assert proxy_norm(p, spec, threads=1).norms \
        == proxy_norm(p, spec, threads=3).norms
