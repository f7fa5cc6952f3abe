from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qspectra.errors import IndexOutOfRange
from qspectra.partitions import (
    EMPTY,
    Partition,
    ch_partitions,
    contains,
    horizontal_strips,
    in_hook,
    lambda_mn,
    lr_coeff,
    lr_expand,
    partitions_of,
    schur_product_brute,
)

P = Partition


def test_partition_normalizes_and_validates():
    assert P([3, 1, 0, 0]) == P([3, 1])
    assert P([3, 1]).weight == 4
    assert P([2, 2, 1]).conjugate() == P([3, 2])
    for bad in ([1, 2], [-1], [2, 0, 1]):
        with pytest.raises(ValueError):
            P(bad)


@pytest.mark.parametrize("text,expected", [
    ("(2,1)", P([2, 1])), ("[3,3,1]", P([3, 3, 1])), ("()", EMPTY), ("( 4 , 2 )", P([4, 2])), ("[]", EMPTY),
])
def test_parse(text, expected):
    assert P.parse(text) == expected


@pytest.mark.parametrize("text", ["(1,2)", "2,1", "(a)", "[1.5]", "[1,", ""])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        P.parse(text)


def test_in_hook_examples():
    assert in_hook(P([5, 1, 1, 1]), 1, 1)
    assert not in_hook(P([2, 2]), 1, 1)
    assert all(in_hook(EMPTY, m, n) for m in range(3) for n in range(3))


def test_lambda_mn_examples():
    assert lambda_mn(1, 1) == P([2, 2])
    assert lambda_mn(0, 0) == P([1])
    assert lambda_mn(2, 1) == P([2, 2, 2])
    assert lambda_mn(3, 2).weight == 12


def test_ch_partitions_examples():
    assert ch_partitions(2, 1, 1, 0)[0] == P([2, 1])
    assert ch_partitions(2, 1, 1, 0)[1] == P([1, 1])
    assert ch_partitions(1, 1, 0, 0)[0] == P([1])
    with pytest.raises(IndexOutOfRange):
        ch_partitions(2, 1, 3, 0)
    with pytest.raises(IndexOutOfRange):
        ch_partitions(2, 1, 0, 2)


def test_contains_examples():
    assert contains(P([1, 1]), P([2, 1]))
    assert not contains(P([3]), P([2, 2]))
    assert contains(EMPTY, P([4, 1]))


def test_lr_examples():
    assert lr_coeff(P([1]), P([1]), P([2])) == 1
    assert lr_coeff(P([1]), P([1]), P([1, 1])) == 1
    assert lr_coeff(P([2, 1]), P([2, 1]), P([3, 2, 1])) == 2
    assert lr_coeff(P([2, 1]), P([2, 1]), P([3, 2])) == 0
    assert lr_coeff(P([2]), P([1]), P([1, 1, 1])) == 0


def test_partitions_of_counts():
    # partition numbers p(0..10)
    assert [len(list(partitions_of(k))) for k in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_in_hook_matches_rectangle_containment_exhaustively():
    for w in range(13):
        for lam in partitions_of(w):
            for m, n in product(range(4), repeat=2):
                assert in_hook(lam, m, n) == (not contains(lambda_mn(m, n), lam))


def _triples(max_weight):
    for w in range(max_weight + 1):
        for a in range(w + 1):
            for lam in partitions_of(a):
                for mu in partitions_of(w - a):
                    yield lam, mu, w


def test_lr_matches_schur_product_oracle_up_to_weight_6():
    for lam, mu, w in _triples(6):
        assert lr_expand(lam, mu) == schur_product_brute(lam, mu), (lam, mu)


def test_oracle_independent_of_variable_count():
    # with enough variables the expansion stabilizes
    assert schur_product_brute(P([2, 1]), P([1]), nvars=3) == schur_product_brute(P([2, 1]), P([1]), nvars=6)


def _brute_horizontal_strips(lam, k):
    out = []
    for nu in partitions_of(lam.weight + k):
        if contains(lam, nu) and all(nu.part(i + 1) <= lam.part(i) for i in range(len(nu))):
            out.append(nu)
    return sorted(out, reverse=True)


def test_pieri_counts():
    for lam, _mu, _w in _triples(5):
        for k in range(4):
            strips = horizontal_strips(lam, k)
            assert strips == _brute_horizontal_strips(lam, k)
            total = sum(lr_coeff(lam, P([k]) if k else EMPTY, nu) for nu in partitions_of(lam.weight + k))
            assert total == len(strips)


partitions_small = st.integers(0, 4).flatmap(lambda w: st.sampled_from(list(partitions_of(w))))


@given(partitions_small, partitions_small, st.data())
def test_lr_symmetry_and_grading(lam, mu, data):
    w = lam.weight + mu.weight
    nu = data.draw(st.sampled_from(list(partitions_of(w + data.draw(st.integers(-1, 1)))) or [EMPTY]))
    c = lr_coeff(lam, mu, nu)
    assert c == lr_coeff(mu, lam, nu)
    if c:
        assert nu.weight == w and contains(lam, nu) and contains(mu, nu)
