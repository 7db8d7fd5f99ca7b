# -*- coding: utf-8 -*-

if __name__ == "__main__":
    raise Exception(
        "Test files can't be run directly. Use `python -m pytest linfact`"
    )

import numpy as np
import pytest

from .corpus import random_degree_one, random_matpoly
from .factor import (
    BlockDiagonal, ChainError, DegreeOneFactor, Factorization, Form,
    ReconstructionError, VerificationError, absorb_scalars, combine_sum,
    dehermitize_bracket, equalize_length, equalize_sizes, factor,
    factor_monomial, hermitize, hermitize_factorization, multiply_chain,
    single_blockify,
)
from .matpoly import MatPoly, ShapeError
from .parse import parse_word
from .repnorm import stream
from .word import Letter, UNIT


@pytest.fixture
def corpus():
    return [random_matpoly(stream(10, i)) for i in range(60)]


def scale_of(p):
    return max(
        (float(np.max(np.abs(c))) for c in p.terms.values()),
        default=1.0,
    )


def test_degree_one_forms():
    assert DegreeOneFactor.letter(2, Letter(1)).form == Form.TYPE_A
    assert DegreeOneFactor.letter(2, Letter(1, True)).form == Form.TYPE_B
    y = DegreeOneFactor(1, [[0]], {1: [[1]]}, {2: [[1]]})
    assert y.form == Form.MIXED
    assert y.generators() == {1, 2}


def test_degree_one_drops_negligible_coefficients():
    y = DegreeOneFactor(1, [[1]], {1: [[1e-16]]}, {2: [[0]]})
    assert y.a == {}
    assert y.b == {}
    assert y.is_unit()


def test_degree_one_from_matpoly():
    p = MatPoly.from_terms(2, 2, [
        (UNIT, np.eye(2)),
        (parse_word("x1*"), [[0, 1], [0, 0]]),
    ])
    y = DegreeOneFactor.from_matpoly(p)
    assert y.form == Form.TYPE_B
    assert y.to_matpoly() == p
    with pytest.raises(ShapeError):
        DegreeOneFactor.from_matpoly(
            MatPoly.monomial([[1]], parse_word("x1 x1"))
        )
    with pytest.raises(ShapeError):
        DegreeOneFactor.from_matpoly(MatPoly.zero(1, 2))


def test_degree_one_row_scaling():
    y = DegreeOneFactor(
        2, np.eye(2), {1: [[0, 3], [0, 0]]}, {2: [[0, 0], [4, 0]]},
    )
    scaled = y.row_scaled([2, 0.5])
    assert scaled.to_matpoly() \
        == MatPoly.constant(np.diag([2, 0.5])) @ y.to_matpoly()
    assert y.row_norms() == pytest.approx([np.sqrt(10), np.sqrt(17)])


def test_block_diagonal():
    d = BlockDiagonal((
        DegreeOneFactor.letter(2, Letter(1)),
        DegreeOneFactor.unit(1),
        DegreeOneFactor.letter(1, Letter(2, True)),
    ))
    assert d.size == 4
    assert d.offsets() == [0, 2, 3]
    assert d.block_sizes() == (2, 1, 1)
    assert d.non_unit_count() == 2
    x1 = d.to_matpoly().coefficient(parse_word("x1"))
    assert np.array_equal(x1, np.diag([1, 1, 0, 0]))


def test_chain_validation():
    d = BlockDiagonal.unit(2)
    with pytest.raises(ChainError):
        Factorization((np.eye(2),), (d,), 2, 2)
    with pytest.raises(ChainError):
        Factorization((np.eye(2), np.eye(3)), (d,), 2, 2)
    with pytest.raises(ChainError):
        Factorization((np.eye(1),), (), 1, 1)


def test_chain_errors_are_verification_errors():
    with pytest.raises(VerificationError):
        Factorization((np.eye(2), np.eye(3)), (BlockDiagonal.unit(2),), 2, 2)


def test_factor_monomial():
    f = factor_monomial([[2]], parse_word("x1 x2*"))
    assert f.m == 2
    assert f.cost() == pytest.approx(2)
    assert f.expand() == MatPoly.monomial([[2]], parse_word("x1 x2*"))
    assert all(d.non_unit_count() == 1 for d in f.diags)


def test_factor_unit_monomial():
    f = factor_monomial([[1, 2]], UNIT)
    assert f.m == 1
    assert f.diags[0].non_unit_count() == 0
    assert f.expand() == MatPoly.constant([[1, 2]])


def test_factor_single_letter():
    f = factor(MatPoly.monomial([[1]], parse_word("x1")))
    assert f.m == 1
    assert f.cost() == pytest.approx(1)


def test_factor_zero():
    f = factor(MatPoly.zero(2, 3))
    assert f.m == 1
    assert f.cost() == 0
    assert f.expand().is_zero()
    assert f.expand().shape == (2, 3)


def test_factor_reconstructs(corpus):
    for p in corpus:
        f = factor(p)
        assert f.m == max(p.degree(), 1)
        assert f.max_block_degree() <= 1
        assert f.verify(p) <= 1e-9


def test_factor_of_a_sum():
    # x1 + x2 = (1 1) diag(x1, x2) (1; 1)
    p = MatPoly.from_terms(1, 1, [
        (parse_word("x1"), [[1]]),
        (parse_word("x2"), [[1]]),
    ])
    f = factor(p)
    assert f.m == 1
    assert f.sizes == (2,)
    assert f.cost() == pytest.approx(2)


def test_factor_shares_block_sizes(corpus):
    # 2 + x1 + x1 x2* pads the shorter terms with unit blocks of their own
    p = MatPoly.from_terms(1, 1, [
        (UNIT, [[2]]),
        (parse_word("x1"), [[1]]),
        (parse_word("x1 x2*"), [[1]]),
    ])
    f = factor(p)
    assert [d.block_sizes() for d in f.diags] == [(1, 1, 1)] * 2
    assert f.diags[1].non_unit_count() == 1
    for p in corpus:
        if not p.is_zero():
            assert len({d.block_sizes() for d in factor(p).diags}) == 1


def test_verify_catches_mismatches():
    f = factor(MatPoly.monomial([[1]], parse_word("x1")))
    with pytest.raises(ReconstructionError):
        f.verify(MatPoly.monomial([[1]], parse_word("x2")))
    with pytest.raises(ReconstructionError):
        f.verify(MatPoly.zero(2, 2))


def test_combine_sum():
    f = factor_monomial([[1]], parse_word("x1 x2"))
    g = factor_monomial([[3]], parse_word("x2*"))
    h = combine_sum(f, g)
    assert h.m == 2
    assert h.expand() == f.expand() + g.expand()
    with pytest.raises(ShapeError):
        combine_sum(f, factor_monomial([[1, 1]], UNIT))


def test_equalize_length():
    f = factor_monomial([[1]], parse_word("x1"))
    g = equalize_length(f, 3)
    assert g.m == 3
    assert g.expand() == f.expand()
    assert g.cost() == pytest.approx(f.cost())
    assert equalize_length(f, 1) is f
    with pytest.raises(ValueError):
        equalize_length(g, 2)


def test_single_blockify(corpus):
    for p in corpus:
        f = factor(p)
        g = single_blockify(f)
        assert all(d.non_unit_count() <= 1 for d in g.diags)
        assert g.expand().max_difference(f.expand()) \
            <= 1e-12 * max(1.0, scale_of(p))
        assert g.cost() <= f.cost() * (1 + 1e-12)


def test_single_blockify_splits_factors():
    p = MatPoly.from_terms(1, 1, [
        (parse_word("x1"), [[1]]),
        (parse_word("x2"), [[2]]),
        (parse_word("x3*"), [[3]]),
    ])
    f = factor(p)
    g = single_blockify(f)
    assert f.m == 1
    assert g.m == 3
    assert g.expand().max_difference(p) <= 1e-12


def test_single_blockify_leaves_single_blocks_alone():
    f = factor_monomial([[1]], parse_word("x1 x2"))
    g = single_blockify(f)
    assert g.m == f.m
    for a, b in zip(f.alphas, g.alphas):
        assert np.array_equal(a, b)


def test_equalize_sizes(corpus):
    for p in corpus:
        f = factor(p)
        g = equalize_sizes(f)
        assert len(set(g.sizes)) == 1
        assert all(
            alpha.shape[0] == alpha.shape[1] for alpha in g.alphas[1:-1]
        )
        assert g.expand().max_difference(f.expand()) \
            <= 1e-12 * max(1.0, scale_of(p))
        assert g.cost() <= f.cost() * (1 + 1e-12)


def test_absorb_scalars(corpus):
    for p in corpus:
        chain = absorb_scalars(factor(p))
        assert all(q.degree() <= 1 for q in chain)
        assert multiply_chain(chain).max_difference(p) <= 1e-9


def test_absorb_degree_one():
    p = MatPoly.from_terms(2, 2, [
        (UNIT, [[1, 2], [3, 4]]),
        (parse_word("x1"), [[0, 1j], [1, 0]]),
        (parse_word("x2*"), [[-1, 0], [0, 0.5]]),
    ])
    chain = absorb_scalars(factor(p))
    assert len(chain) == 1
    assert chain[0].max_difference(p) <= 1e-12


def test_hermitize():
    for i in range(20):
        y = random_degree_one(stream(11, i), 2)
        h = hermitize(y)
        assert h.size == 4
        assert h.is_self_adjoint()
        assert h.to_matpoly().is_self_adjoint()
        row, column = dehermitize_bracket(h)
        assert h.to_matpoly().scale(row, column) == y.to_matpoly()


def test_hermitize_type_a():
    y = DegreeOneFactor.letter(1, Letter(1))
    h = hermitize(y)
    assert h.form == Form.MIXED
    assert np.array_equal(h.a[1], [[0, 1], [0, 0]])
    assert np.array_equal(h.b[1], [[0, 0], [1, 0]])


def test_dehermitize_needs_even_size():
    with pytest.raises(ShapeError):
        dehermitize_bracket(DegreeOneFactor.unit(3))


def test_hermitize_factorization(corpus):
    for p in corpus[:20]:
        f = factor(p)
        g = hermitize_factorization(f)
        assert g.sizes == tuple(2 * size for size in f.sizes)
        assert all(
            block.is_self_adjoint() for d in g.diags for block in d.blocks
        )
        assert g.cost() == pytest.approx(f.cost(), rel=1e-12, abs=1e-12)
        assert g.expand().max_difference(p) <= 1e-9
