# -*- coding: utf-8 -*-

'''
    JSON file formats. Complex matrices are nested lists of [re, im] pairs;
    polynomials, factorizations, P-chains and ensemble blocks are plain
    objects built from those. Floats are written with `repr`, which round
    trips exactly.
'''

import json
import math

import numpy as np

from .factor import (
    BlockDiagonal, DegreeOneFactor, Factorization, VerificationError,
)
from .matpoly import MatPoly, as_matrix
from .parse import parse_word
from .repnorm import EnsembleSpec
from .word import MAX_GENERATORS, format_word

COST_TOL = 1e-9


class CodecError(ValueError):
    '''A file isn't valid JSON, or doesn't have the expected layout'''
    pass


def field_of(data, key, context):
    if not isinstance(data, dict) or key not in data:
        raise CodecError(f"Missing {repr(key)} in {context}")
    return data[key]


def list_of(data, key, context) -> list:
    value = field_of(data, key, context)
    if not isinstance(value, list):
        raise CodecError(f"{repr(key)} in {context} must be a list")
    return value


def int_of(data, key, context) -> int:
    value = field_of(data, key, context)
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise CodecError(
            f"{repr(key)} in {context} must be an integer: {repr(value)}"
        )
    return value


def number_of(data, key, context) -> float:
    value = field_of(data, key, context)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CodecError(
            f"{repr(key)} in {context} must be a number: {repr(value)}"
        )
    return float(value)


def encode_matrix(matrix) -> list:
    return [
        [[float(z.real), float(z.imag)] for z in row]
        for row in np.asarray(matrix)
    ]


def decode_matrix(data, rows=None, cols=None) -> np.ndarray:
    try:
        array = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise CodecError(f"Not a matrix of [re, im] pairs: {repr(data)}") \
            from e
    if array.ndim != 3 or array.shape[2] != 2:
        raise CodecError(
            f"Expected a rows x cols x 2 array, got shape {array.shape}"
        )
    return as_matrix(array[..., 0] + 1j * array[..., 1], rows, cols)


def encode_polynomial(p: MatPoly) -> dict:
    return {
        "rows": p.rows,
        "cols": p.cols,
        "terms": [
            {"word": format_word(word), "coeff": encode_matrix(coeff)}
            for word, coeff in p.sorted_terms()
        ],
    }


def decode_polynomial(data, max_gen: int = MAX_GENERATORS) -> MatPoly:
    rows = int_of(data, "rows", "polynomial")
    cols = int_of(data, "cols", "polynomial")
    terms = []
    for term in list_of(data, "terms", "polynomial"):
        word = field_of(term, "word", "term")
        if not isinstance(word, str):
            raise CodecError(f"A word must be a string: {repr(word)}")
        word = parse_word(word, max_gen)
        coeff = decode_matrix(field_of(term, "coeff", "term"), rows, cols)
        terms.append((word, coeff))
    return MatPoly.from_terms(rows, cols, terms)


def encode_block(y: DegreeOneFactor) -> dict:
    return {
        "size": y.size,
        "a0": encode_matrix(y.a0),
        "a": {str(j): encode_matrix(y.a[j]) for j in sorted(y.a)},
        "b": {str(j): encode_matrix(y.b[j]) for j in sorted(y.b)},
    }


def decode_block(data) -> DegreeOneFactor:
    size = int_of(data, "size", "block")

    def coefficients(name):
        coeffs = data.get(name, {})
        if not isinstance(coeffs, dict):
            raise CodecError(f"{repr(name)} must map generators to matrices")
        decoded = {}
        for j, coeff in coeffs.items():
            if not str(j).isdigit():
                raise CodecError(
                    f"Bad generator key {repr(j)} in {repr(name)}"
                )
            decoded[int(j)] = decode_matrix(coeff, size, size)
        return decoded

    return DegreeOneFactor(
        size,
        decode_matrix(field_of(data, "a0", "block"), size, size),
        coefficients("a"),
        coefficients("b"),
    )


def encode_factorization(f: Factorization) -> dict:
    return {
        "out_rows": f.out_rows,
        "out_cols": f.out_cols,
        "alphas": [encode_matrix(alpha) for alpha in f.alphas],
        "diags": [
            {"blocks": [encode_block(block) for block in d.blocks]}
            for d in f.diags
        ],
        "cost": f.cost(),
    }


def decode_factorization(data, check_cost: bool = True) -> Factorization:
    '''
        Rebuild a `Factorization`. A chain whose dimensions don't fit, or
        whose stored cost disagrees with the recomputed one, raises a
        `VerificationError`: the file was written by us and then corrupted.
    '''
    f = Factorization(
        [decode_matrix(alpha) for alpha in
         list_of(data, "alphas", "factorization")],
        [
            BlockDiagonal(
                decode_block(block) for block in list_of(d, "blocks", "diag")
            )
            for d in list_of(data, "diags", "factorization")
        ],
        int_of(data, "out_rows", "factorization"),
        int_of(data, "out_cols", "factorization"),
    )
    if check_cost and "cost" in data:
        stored = number_of(data, "cost", "factorization")
        if not math.isclose(stored, f.cost(), rel_tol=COST_TOL,
                            abs_tol=COST_TOL):
            raise VerificationError(
                f"Stored cost {stored:.17g} doesn't match recomputed "
                f"cost {f.cost():.17g}"
            )
    return f


def encode_chain(chain, out_rows: int, out_cols: int, cost=None) -> dict:
    data = {
        "out_rows": out_rows,
        "out_cols": out_cols,
        "factors": [encode_polynomial(p) for p in chain],
    }
    if cost is not None:
        data["cost"] = cost
    return data


def decode_chain(data):
    '''Returns (factors, out_rows, out_cols)'''
    factors = [
        decode_polynomial(p) for p in list_of(data, "factors", "P-chain")
    ]
    return (
        factors,
        int_of(data, "out_rows", "P-chain"),
        int_of(data, "out_cols", "P-chain"),
    )


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as e:
        raise CodecError(f"Can't read {repr(str(path))}: {e}") from e
    except json.JSONDecodeError as e:
        raise CodecError(f"{repr(str(path))} is not valid JSON: {e}") from e


def dump_json(data, path):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=1)
        handle.write("\n")


def decode_file(decode, path, *args):
    data = load_json(path)
    try:
        return decode(data, *args)
    except TypeError as e:
        raise CodecError(f"Malformed {repr(str(path))}: {e}") from e


def load_polynomial(path, max_gen: int = MAX_GENERATORS) -> MatPoly:
    return decode_file(decode_polynomial, path, max_gen)


def dump_polynomial(p: MatPoly, path):
    dump_json(encode_polynomial(p), path)


def load_factorization(path) -> Factorization:
    return decode_file(decode_factorization, path)


def dump_factorization(f: Factorization, path):
    dump_json(encode_factorization(f), path)


def dump_chain(chain, out_rows: int, out_cols: int, path, cost=None):
    dump_json(encode_chain(chain, out_rows, out_cols, cost), path)


def load_chain(path):
    return decode_file(decode_chain, path)


def load_ensemble(path) -> EnsembleSpec:
    data = load_json(path)
    try:
        return EnsembleSpec.from_dict(data)
    except (KeyError, TypeError) as e:
        raise CodecError(f"Bad ensemble block in {repr(str(path))}") from e
