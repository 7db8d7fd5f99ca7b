# -*- coding: utf-8 -*-

if __name__ == "__main__":
    raise Exception(
        "Test files can't be run directly. Use `python -m pytest linfact`"
    )

import numpy as np
import pytest

from .corpus import gaussian_matrix, random_matpoly, random_word
from .matpoly import MatPoly, PRUNE_THRESHOLD, ShapeError
from .parse import parse_word
from .repnorm import EnsembleKind, EnsembleSpec, evaluate, stream
from .word import UNIT


def poly(rows, cols, **terms):
    '''poly(1, 1, x1=[[2]]) style shorthand, "_" separating letters'''
    return MatPoly(rows, cols, {
        parse_word(name.replace("_", " ").replace("s", "*")): coeff
        for name, coeff in terms.items()
    })


@pytest.fixture
def p():
    # 1 + 2 x1 + x1* x2
    return MatPoly.from_terms(1, 1, [
        (UNIT, [[1]]),
        (parse_word("x1"), [[2]]),
        (parse_word("x1* x2"), [[1]]),
    ])


def test_construction(p):
    assert p.shape == (1, 1)
    assert p.degree() == 2
    assert p.generators() == {1, 2}
    assert p.coefficient(parse_word("x1"))[0, 0] == 2
    assert p.coefficient(parse_word("x2"))[0, 0] == 0


def test_coefficients_are_read_only(p):
    with pytest.raises(ValueError):
        p.terms[UNIT][0, 0] = 5


def test_zero():
    zero = MatPoly.zero(2, 3)
    assert zero.is_zero()
    assert zero.degree() == 0
    assert str(zero) == "0 (2x3)"


def test_pruning():
    assert MatPoly(1, 1, {UNIT: [[1e-15]]}).is_zero()
    assert (poly(1, 1, x1=[[1]]) - poly(1, 1, x1=[[1]])).is_zero()


def test_pruning_bounds_evaluation():
    # dropped terms move the evaluation by at most threshold each, since
    # unitaries have entries of modulus ≤ 1
    rep = EnsembleSpec(EnsembleKind.HAAR, 8, 2, 13).sample(0)
    for i in range(20):
        rng = stream(13, i)
        p = random_matpoly(rng, gaussian=True)
        extra = []
        for _ in range(5):
            c = gaussian_matrix(rng, p.rows, p.cols)
            c *= 0.9 * PRUNE_THRESHOLD / np.max(np.abs(c))
            extra.append((random_word(rng, 2, 3), c))
        pruned = MatPoly.from_terms(
            p.rows, p.cols, list(p.terms.items()) + extra,
        )
        assert all(
            np.max(np.abs(c)) >= PRUNE_THRESHOLD
            for c in pruned.terms.values()
        )
        raw = evaluate(p, rep) + sum(
            np.kron(c, rep.word_matrix(word, {})) for word, c in extra
        )
        gap = np.max(np.abs(evaluate(pruned, rep) - raw))
        assert gap <= len(extra) * PRUNE_THRESHOLD \
            + 1e-15 * np.max(np.abs(raw))


def test_duplicates_are_summed():
    x1 = parse_word("x1")
    p = MatPoly.from_terms(1, 2, [(x1, [[1, 2]]), (x1, [[3, 4]])])
    assert np.array_equal(p.coefficient(x1), [[4, 6]])


def test_bad_shapes():
    with pytest.raises(ShapeError):
        MatPoly(0, 1, {})
    with pytest.raises(ShapeError):
        MatPoly(2, 2, {UNIT: [[1, 0]]})
    with pytest.raises(ShapeError):
        MatPoly.identity(2) + MatPoly.identity(3)
    with pytest.raises(ShapeError):
        MatPoly.zero(2, 3) @ MatPoly.zero(2, 3)


def test_shape_errors_are_value_errors():
    with pytest.raises(ValueError):
        MatPoly.identity(2) + MatPoly.identity(3)


def test_addition(p):
    q = p + poly(1, 1, x1=[[-2]], x2=[[1j]])
    assert q.coefficient(parse_word("x1"))[0, 0] == 0
    assert parse_word("x1") not in q.terms
    assert q.coefficient(parse_word("x2"))[0, 0] == 1j


def test_addition_is_commutative():
    for i in range(20):
        rng = stream(0, i)
        a = random_matpoly(rng, shape=(2, 2))
        b = random_matpoly(rng, shape=(2, 2))
        assert a + b == b + a


def test_scalar_multiplication(p):
    q = 2j * p
    assert q.coefficient(UNIT)[0, 0] == 2j
    assert (p * 0).is_zero()


def test_words_concatenate():
    # (x1)(x1*) stays x1 x1*, there are no relations
    p = poly(1, 1, x1=[[1]]) @ poly(1, 1, x1s=[[1]])
    assert p == poly(1, 1, x1_x1s=[[1]])
    assert UNIT not in p.terms


def test_matmul():
    a = MatPoly.monomial([[1, 2]], parse_word("x1"))
    b = MatPoly.from_terms(2, 1, [
        (UNIT, [[1], [0]]),
        (parse_word("x2"), [[0], [1]]),
    ])
    c = a @ b
    assert c.shape == (1, 1)
    assert c == poly(1, 1, x1=[[1]], x1_x2=[[2]])


def test_matmul_is_associative():
    for i in range(20):
        rng = stream(1, i)
        a = random_matpoly(rng, shape=(2, 3), max_degree=2)
        b = random_matpoly(rng, shape=(3, 1), max_degree=2)
        c = random_matpoly(rng, shape=(1, 2), max_degree=2)
        assert ((a @ b) @ c).max_difference(a @ (b @ c)) <= 1e-12


def test_identity_is_neutral(p):
    assert MatPoly.identity(1) @ p == p
    assert p @ MatPoly.identity(1) == p


def test_adjoint():
    p = MatPoly.monomial([[1, 1j]], parse_word("x1 x2*"))
    q = p.adjoint()
    assert q.shape == (2, 1)
    assert np.array_equal(q.coefficient(parse_word("x2 x1*")), [[1], [-1j]])
    assert q.adjoint() == p


def test_adjoint_reverses_products():
    for i in range(20):
        rng = stream(2, i)
        a = random_matpoly(rng, shape=(2, 3), max_degree=2)
        b = random_matpoly(rng, shape=(3, 2), max_degree=2)
        assert (a @ b).adjoint().max_difference(b.adjoint() @ a.adjoint()) \
            <= 1e-12


def test_self_adjoint():
    p = poly(1, 1, x1=[[1]], x1s=[[1]])
    assert p.is_self_adjoint()
    assert not poly(1, 1, x1=[[1]]).is_self_adjoint()
    assert not MatPoly.zero(1, 2).is_self_adjoint()


def test_direct_sum():
    a = poly(1, 1, x1=[[2]])
    b = poly(2, 1, x2=[[1], [3]])
    c = a.direct_sum(b)
    assert c.shape == (3, 2)
    assert np.array_equal(c.coefficient(parse_word("x1")),
                          [[2, 0], [0, 0], [0, 0]])
    assert np.array_equal(c.coefficient(parse_word("x2")),
                          [[0, 0], [0, 1], [0, 3]])


def test_scale():
    p = poly(2, 2, x1=np.eye(2))
    q = p.scale([[1, 1]], [[2], [3]])
    assert q == poly(1, 1, x1=[[5]])
    with pytest.raises(ShapeError):
        p.scale([[1, 1, 1]], np.eye(2))


def test_max_difference():
    a = poly(1, 1, x1=[[1]])
    b = poly(1, 1, x2=[[0.5]])
    assert a.max_difference(b) == 1
    assert a.max_difference(a) == 0
    assert MatPoly.zero(1, 1).max_difference(MatPoly.zero(1, 1)) == 0


def test_sorted_terms_are_canonical():
    p = poly(1, 1, x2=[[1]], x1_x1=[[1]], x1s=[[1]], x1=[[1]])
    words = [str(word) for word, _ in p.sorted_terms()]
    assert words == ["x1", "x1*", "x2", "x1 x1"]


def test_str():
    assert str(poly(1, 1, x1=[[1]])) == "[[1.+0.j]] ⊗ x1"
