from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcpline import ncwords, qcp
from qcpline.laurent import ONE, P, S, T
from qcpline.ncwords import (
    ALPHA,
    ALPHA_STAR,
    CRITICAL_OVERLAPS,
    GAMMA,
    NCElement,
    NormalWord,
    critical_pair,
    nc_build_generators,
    nc_normalize,
    reduce_terms,
)

words = st.text(alphabet="agA", max_size=7)
coefs = st.sampled_from([ONE, P, -P, S * T, P**-1, 1 - S**2, 2 * T**-1])
elements = st.lists(st.tuples(coefs, words), max_size=3).map(NCElement.from_words)


def test_rule_examples():
    assert nc_normalize("ag") == NCElement.from_words([(P, "ga")])
    assert nc_normalize("Ag") == NCElement.from_words([(P**-1, "gA")])
    assert nc_normalize("aA") == NCElement.from_words([(ONE, ""), (-(P**2), "gg")])
    assert nc_normalize("Aa") == NCElement.from_words([(ONE, ""), (-ONE, "gg")])
    assert nc_normalize("Aga") == NCElement.from_words([(P**-1, "g"), (-(P**-1), "ggg")])


def test_normal_words_are_fixed_points():
    for b in range(3):
        for k in range(-2, 3):
            w = NormalWord(b, k)
            assert NormalWord.from_word(w.word) == w
            assert nc_normalize(w.word) == NCElement({w: ONE})


def test_rendering():
    assert NormalWord(1, -2).render() == "g^1 * A^2"
    x1, _ = nc_build_generators()
    assert str(x1 * x1.adjoint() - x1 * x1.adjoint()) == "0"
    assert "g^1 * a^1" in str(x1.adjoint() * x1)


@settings(max_examples=40, deadline=None)
@given(elements, elements, elements)
def test_multiplication_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(max_examples=40, deadline=None)
@given(elements, elements)
def test_adjoint_anti_homomorphism(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()
    assert x.adjoint().adjoint() == x


@settings(max_examples=60, deadline=None)
@given(words)
def test_strategies_agree_and_terminate(w):
    stats = {}
    left = reduce_terms([(ONE, w)], "leftmost", stats)
    right = reduce_terms([(ONE, w)], "rightmost", {})
    assert left == right
    # each rule step either sorts g left or cancels an a/A pair; 3^len bounds the term tree
    assert stats["steps"] <= 3 ** len(w) * (len(w) + 1)


@pytest.mark.parametrize("overlap", CRITICAL_OVERLAPS)
def test_critical_pairs_join(overlap):
    a, b = critical_pair(overlap)
    assert a == b


def test_displayed_forms_match_canonical():
    for name, forms in ncwords.displayed_expansions().items():
        canon = ncwords.nc_expand_canonical(name)
        for form in forms:
            assert form == canon, name


def test_suite_all_proven():
    rows = ncwords.symbolic_suite()
    assert len(rows) >= 20
    assert all(r["proven"] for r in rows)


def test_core_relations():
    x1, x2 = nc_build_generators()
    one = NCElement.scalar(1)
    assert x1.adjoint() * x1 + (x2.adjoint() * x2).scale(P**-2) == one.scale(P**-2 + S**2)
    assert x1 * x1.adjoint() + x2 * x2.adjoint() == one.scale(1 + S**2)
    assert ALPHA * GAMMA == (GAMMA * ALPHA).scale(P)
    assert ALPHA_STAR * ALPHA + GAMMA * GAMMA == one


@pytest.mark.parametrize("q,c,angle", [(2.0, 1.0, 0.0), (1.5, 0.5, 1.0), (5.0, 3.0, 2.5)])
def test_cross_engine(q, c, angle):
    ctx = qcp.TruncationContext.from_angle(q, c, angle, N=48, margin=12)
    x1n, x2n = qcp.build_x_pair(ctx)
    x1, x2 = nc_build_generators()
    assert qcp.cross_engine_residual(x1, x1n, ctx) < 1e-12
    h = lambda m: m.conj().T  # noqa: E731
    numeric = {
        "x1*x1": h(x1n) @ x1n, "x2*x2": h(x2n) @ x2n, "x1*x2": h(x1n) @ x2n,
        "x2*x1": h(x2n) @ x1n, "x1x1*": x1n @ h(x1n), "x2x2*": x2n @ h(x2n),
    }
    for name, num in numeric.items():
        assert qcp.cross_engine_residual(ncwords.nc_expand_canonical(name), num, ctx) < 1e-10, name
