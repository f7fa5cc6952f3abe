from itertools import combinations
from math import prod

import pytest

from qspectra.exact import ONE, Q, ZERO, MultiPoly, TruncatedSeries, mu_var, nu_var, q_pow, var
from qspectra.partitions import Partition, partitions_of
from qspectra.symfunc import (
    Alphabet,
    classical_h,
    complete_sym,
    default_order,
    determinant,
    elem_sym,
    gen_series,
    jacobi_trudi,
    power_sum_classical,
    q_number,
    super_series,
)

q = var(Q)
mu = [var(mu_var(i)) for i in range(4)]
nu = [var(nu_var(j)) for j in range(4)]


def test_q_number_examples():
    assert q_number(1) == 1
    assert q_number(2) == q + q_pow(-1)
    assert q_number(0) == 0
    assert q_number(-3) == -q_number(3)


def test_q_number_closed_form():
    for k in range(-12, 13):
        assert q_number(k) * (q - q_pow(-1)) == q_pow(k) - q_pow(-k)


def test_elem_sym_examples():
    assert elem_sym(2, Alphabet.mu(2)) == mu[0] * mu[1]
    assert elem_sym(1, Alphabet.mu(2, q_pow(-1))) == q_pow(-1) * (mu[0] + mu[1])
    assert elem_sym(3, Alphabet.mu(2)) == 0


def test_complete_sym_examples():
    assert complete_sym(2, Alphabet.mu(1)) == mu[0] ** 2
    assert complete_sym(2, Alphabet.mu(2)) == mu[0] ** 2 + mu[0] * mu[1] + mu[1] ** 2
    assert complete_sym(1, -Alphabet.nu(1, q_pow(1))) == -q * nu[0]
    assert complete_sym(3, Alphabet.mu(0)) == 0


def test_power_sum_examples():
    assert power_sum_classical(1, Alphabet.mu(2)) == mu[0] + mu[1]
    assert power_sum_classical(2, Alphabet.mu(1, q_pow(-1))) == q_pow(-2) * mu[0] ** 2
    assert power_sum_classical(4, Alphabet.mu(0)) == 0
    with pytest.raises(ValueError):
        power_sum_classical(0, Alphabet.mu(1))


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet((mu_var(0), mu_var(0)))
    with pytest.raises(ValueError):
        Alphabet.mu(1, q + 1)


def test_gen_series_examples():
    A = Alphabet.mu(1)
    assert gen_series("E", A, 2) == TruncatedSeries([1, mu[0], 0])
    assert gen_series("H", A, 2) == TruncatedSeries([1, mu[0], mu[0] ** 2])
    B = Alphabet.mu(2)
    E, H = gen_series("E", B, 4), gen_series("H", B, 4)
    assert E * H.compose_scale(-1) == TruncatedSeries([1], order=4)


@pytest.mark.parametrize("size", range(5))
def test_series_coefficients_match_enumeration(size):
    # product-form series vs monomial enumeration
    A = Alphabet.mu(size, q_pow(-1))
    E, H, P = gen_series("E", A, 6), gen_series("H", A, 6), gen_series("P", A, 5)
    for k in range(7):
        assert E.coeff(k) == elem_sym(k, A)
        assert H.coeff(k) == complete_sym(k, A)
    for k in range(6):
        assert P.coeff(k) == power_sum_classical(k + 1, A)


def _e_by_brute(k, xs):
    return sum((prod(c, start=ONE) for c in combinations(xs, k)), start=ZERO)


@pytest.mark.parametrize("size", range(1, 5))
def test_classical_newton(size):
    A = Alphabet.mu(size)
    for k in range(1, 9):
        lhs = k * elem_sym(k, A)
        rhs = sum(((-1) ** (r - 1) * power_sum_classical(r, A) * elem_sym(k - r, A) for r in range(1, k + 1)),
                  start=ZERO)
        assert lhs == rhs
        assert elem_sym(k, A) == _e_by_brute(k, mu[:size])


def test_super_series_examples():
    X, Y = Alphabet.mu(1, q_pow(-1)), Alphabet.nu(1, q_pow(1))
    assert super_series("A", X, Y, 3).coeff(1) == q_pow(-1) * mu[0] - q * nu[0]
    S = super_series("S", Alphabet.mu(0), Y, 4)
    for k in range(5):
        assert S.coeff(k) == elem_sym(k, -Y)
    Pi = super_series("Pi", X, Y, 3)
    assert Pi.coeff(0) == power_sum_classical(1, X) - power_sum_classical(1, Y)


@pytest.mark.parametrize("m,n", [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2)])
def test_super_series_log_derivatives_and_duality(m, n):
    X, Y = Alphabet.mu(m, q_pow(-1)), Alphabet.nu(n, q_pow(1))
    K = 6
    A, S, Pi = super_series("A", X, Y, K), super_series("S", X, Y, K), super_series("Pi", X, Y, K - 1)
    assert Pi == -A.compose_scale(-1).log_derivative()
    assert Pi == S.log_derivative()
    # swapping the alphabets exchanges A and S up to t -> -t
    assert A == super_series("S", Y, X, K).compose_scale(-1)
    assert A * S.compose_scale(-1) == TruncatedSeries([1], order=K)
    assert Pi == -super_series("Pi", Y, X, K - 1)


def test_determinant():
    assert determinant([]) == 1
    assert determinant([[2, 3], [1, 4]]) == 5
    assert determinant([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert determinant([[0, 1], [1, 0]]) == -1


def test_jacobi_trudi_examples():
    A = Alphabet.mu(2)
    h = classical_h(A)
    assert jacobi_trudi(Partition([3]), h) == h(3)
    assert jacobi_trudi(Partition([1, 1]), h) == mu[0] * mu[1]
    assert jacobi_trudi(Partition([2, 1]), h) == h(2) * h(1) - h(3)
    assert jacobi_trudi(Partition(), h) == 1


@pytest.mark.parametrize("size", range(1, 5))
def test_dual_jacobi_trudi(size):
    A = Alphabet.mu(size)
    h = classical_h(A)
    for k in range(1, 6):
        assert jacobi_trudi(Partition([1] * k), h) == elem_sym(k, A)


def test_jacobi_trudi_matches_tableau_count():
    # s_lam(1,1,1) is the number of SSYT with entries <= 3
    from qspectra.partitions import schur_monomials
    A = Alphabet.mu(3)
    pt = {mu_var(i): 1 for i in range(3)}
    for w in range(6):
        for lam in partitions_of(w):
            val = jacobi_trudi(lam, classical_h(A))
            assert MultiPoly._coerce(val).evaluate(pt) == sum(schur_monomials(lam, 3).values())


def test_default_order(monkeypatch):
    monkeypatch.delenv("QSPECTRA_ORDER", raising=False)
    assert default_order() == 8
    monkeypatch.setenv("QSPECTRA_ORDER", "5")
    assert default_order() == 5
    monkeypatch.setenv("QSPECTRA_ORDER", "zero")
    with pytest.raises(ValueError):
        default_order()
