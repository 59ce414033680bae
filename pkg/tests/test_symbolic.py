"""Exact multivariate polynomial engine and the determinant identities."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlab.ffield import field_of
from ltlab.hypersurface import d_full, moore
from ltlab.symbolic import IDENTITY_NAMES, MultiPoly, verify_identity


def _random_poly(rng, desc, nvars, nterms=4, maxdeg=3):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randrange(maxdeg) for _ in range(nvars))
        terms[e] = rng.randrange(desc.q)
    return MultiPoly(desc, nvars, terms)


def _eval(poly, values):
    """Pointwise evaluation oracle, independent of substitute()."""
    desc = poly.desc
    acc = 0
    for ex, c in poly.terms.items():
        term = c
        for v, e in zip(values, ex):
            term = desc.mul(term, desc.pow(v, e))
        acc = desc.add(acc, term)
    return acc


def test_ring_axioms_and_oracle_multiplier():
    desc = field_of(3, 2)
    rng = random.Random(11)
    for _ in range(25):
        a = _random_poly(rng, desc, 3)
        b = _random_poly(rng, desc, 3)
        c = _random_poly(rng, desc, 3)
        assert a * b == a.mul_naive(b)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_evaluation_respects_multiplication(seed):
    desc = field_of(2, 3)
    rng = random.Random(seed)
    a = _random_poly(rng, desc, 2)
    b = _random_poly(rng, desc, 2)
    point = [rng.randrange(desc.q) for _ in range(2)]
    assert _eval(a * b, point) == desc.mul(_eval(a, point), _eval(b, point))


def test_q_power_is_frobenius_on_evaluations():
    q = 4
    desc = field_of(q, 2)
    rng = random.Random(3)
    a = _random_poly(rng, desc, 2)
    point = [rng.randrange(desc.q) for _ in range(2)]
    assert _eval(a.q_power(q), point) == desc.pow(_eval(a, point), q)


def test_sorted_terms_is_graded_lex():
    desc = field_of(2, 1)
    poly = MultiPoly(desc, 2, {(0, 2): 1, (1, 0): 1, (2, 0): 1, (0, 0): 1})
    assert [e for e, _ in poly.sorted_terms()] == [
        (0, 0), (1, 0), (2, 0), (0, 2)]


@pytest.mark.parametrize("name", IDENTITY_NAMES)
def test_identity_holds_at_2_2(name):
    assert verify_identity(name, 2, 2)["holds"]


def test_remark12_records_its_sign_convention():
    rep = verify_identity("remark12", 3, 2)
    assert rep["holds"]
    assert rep["tau_h_coefficient"] == "(-1)^(h-1) * d_full"


def test_unknown_identity_rejected():
    with pytest.raises(ValueError):
        verify_identity("nonsense", 2, 2)


@pytest.mark.parametrize("q,h", [(2, 2), (3, 2)])
def test_prodmu_pointwise_oracle(q, h):
    # prod over nonzero a in k^h of (a . x) = (-1)^h mu(x)^(q-1),
    # re-checked numerically at field points, independent of MultiPoly
    big = field_of(q, 2 * h)
    small = field_of(q, 1)
    emb = small.embed_table(big)
    rng = random.Random(q + h)
    qp = lambda x, j: x.q_power(q, j)
    for _ in range(20):
        xs = [big.element(rng.randrange(big.q)) for _ in range(h)]
        prod = big.element(1)
        for a in range(1, small.q ** h):
            digits = [(a // small.q ** i) % small.q for i in range(h)]
            combo = big.element(0)
            for d, x in zip(digits, xs):
                combo = combo + big.element(int(emb[d])) * x
            prod = prod * combo
        mu = moore(xs, qp)
        expect = mu ** (q - 1)
        if h % 2 == 1:
            expect = -expect
        assert prod == expect
