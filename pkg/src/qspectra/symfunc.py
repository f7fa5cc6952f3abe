"""Elementary, complete and power-sum symmetric functions on scaled alphabets,
their generating series, the super series A, S, Pi, q-numbers and
Jacobi-Trudi determinants."""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Callable, Sequence

from .exact import (
    ONE,
    Q,
    T,
    ZERO,
    MultiPoly,
    TruncatedSeries,
    VarId,
    mu_var,
    nu_var,
)
from .partitions import Partition


def default_order() -> int:
    """Series order K; ``QSPECTRA_ORDER`` overrides the default of 8."""
    raw = os.environ.get("QSPECTRA_ORDER")
    if raw:
        try:
            k = int(raw)
        except ValueError:
            raise ValueError(f"QSPECTRA_ORDER must be an integer, got {raw!r}") from None
        if k < 1:
            raise ValueError("QSPECTRA_ORDER must be >= 1")
        return k
    return 8


@dataclass(frozen=True)
class Alphabet:
    """Variables ``x_i`` read as ``prefactor * x_i``."""

    vars: tuple[VarId, ...]
    prefactor: MultiPoly = ONE

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("alphabet variables must be distinct")
        if self.prefactor.monomial_unit() is None:
            raise ValueError("alphabet prefactor must be a unit c*q^k")

    @classmethod
    def mu(cls, m: int, prefactor: MultiPoly = ONE) -> "Alphabet":
        return cls(tuple(mu_var(i) for i in range(m)), prefactor)

    @classmethod
    def nu(cls, n: int, prefactor: MultiPoly = ONE) -> "Alphabet":
        return cls(tuple(nu_var(j) for j in range(n)), prefactor)

    def __neg__(self) -> "Alphabet":
        return Alphabet(self.vars, -self.prefactor)

    def __len__(self) -> int:
        return len(self.vars)

    def scaled(self) -> list[MultiPoly]:
        return [self.prefactor * MultiPoly.var(v) for v in self.vars]


def q_number(k: int) -> MultiPoly:
    """``(q^k - q^-k)/(q - q^-1)`` as the Laurent polynomial
    ``q^(k-1) + q^(k-3) + ... + q^(1-k)``."""
    if k == 0:
        return ZERO
    if k < 0:
        return -q_number(-k)
    return MultiPoly({(e,): 1 for e in range(k - 1, -k, -2)}, (Q,))


def _monomial(vs: Sequence[VarId], idx) -> MultiPoly:
    exps: dict[VarId, int] = {}
    for i in idx:
        exps[vs[i]] = exps.get(vs[i], 0) + 1
    return MultiPoly.monomial(exps)


def elem_sym(k: int, A: Alphabet) -> MultiPoly:
    """``e_k`` of the scaled alphabet, by enumerating k-subsets."""
    if k < 0 or k > len(A):
        return ZERO
    if k == 0:
        return ONE
    body = ZERO
    for idx in combinations(range(len(A)), k):
        body = body + _monomial(A.vars, idx)
    return body * A.prefactor ** k


def complete_sym(k: int, A: Alphabet) -> MultiPoly:
    """``h_k`` of the scaled alphabet, by enumerating k-multisets."""
    if k < 0:
        return ZERO
    if k == 0:
        return ONE
    if not A.vars:
        return ZERO
    body = ZERO
    for idx in combinations_with_replacement(range(len(A)), k):
        body = body + _monomial(A.vars, idx)
    return body * A.prefactor ** k


def power_sum_classical(k: int, A: Alphabet) -> MultiPoly:
    if k < 1:
        raise ValueError("classical power sums start at k = 1")
    return sum((x ** k for x in A.scaled()), start=ZERO)


def gen_series(which: str, A: Alphabet, K: int, formal: VarId = T) -> TruncatedSeries:
    """``E`` and ``H`` as products over the alphabet; ``P`` holds
    ``p_{k+1}`` at ``t^k``."""
    if K < 0:
        raise ValueError("order must be >= 0")
    xs = A.scaled()
    if which == "E":
        out = TruncatedSeries([ONE], order=K, formal=formal)
        for x in xs:
            out = out * TruncatedSeries([ONE, x], order=K, formal=formal)
        return out
    if which == "H":
        out = TruncatedSeries([ONE], order=K, formal=formal)
        for x in xs:
            out = out * TruncatedSeries([x ** j for j in range(K + 1)], formal=formal)
        return out
    if which == "P":
        return TruncatedSeries([power_sum_classical(j + 1, A) for j in range(K + 1)], formal=formal)
    raise ValueError(f"unknown series {which!r}")


def super_series(which: str, X: Alphabet, Y: Alphabet, K: int, formal: VarId = T) -> TruncatedSeries:
    """``A = E(X)H(-Y)``, ``S = H(X)E(-Y)``, ``Pi = P(X) - P(Y)``."""
    if which == "A":
        return gen_series("E", X, K, formal) * gen_series("H", -Y, K, formal)
    if which == "S":
        return gen_series("H", X, K, formal) * gen_series("E", -Y, K, formal)
    if which == "Pi":
        return gen_series("P", X, K, formal) - gen_series("P", Y, K, formal)
    raise ValueError(f"unknown super series {which!r}")


def determinant(matrix: Sequence[Sequence]):
    """Exact determinant by Laplace expansion along rows, memoized over the
    set of used columns; entries may be any commutative ring elements."""
    n = len(matrix)
    if n == 0:
        return 1
    memo: dict[int, object] = {}

    def minor(row: int, used: int):
        if row == n:
            return 1
        hit = memo.get(used)
        if hit is not None:
            return hit
        acc = 0
        sign = 1
        for col in range(n):
            if used >> col & 1:
                continue
            entry = matrix[row][col]
            if not entry == 0:
                term = entry * minor(row + 1, used | (1 << col))
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[used] = acc
        return acc

    return minor(0, 0)


def jacobi_trudi(lam, h_provider: Callable[[int], object]):
    """``det(h(lam_i - i + j))``; ``h_provider`` must give 1 at 0 and 0 below."""
    lam = Partition(lam)
    L = len(lam)

    def h(k):
        if k < 0:
            return 0
        if k == 0:
            return 1
        return h_provider(k)

    return determinant([[h(lam[i] - i + j) for j in range(L)] for i in range(L)])


def classical_h(A: Alphabet) -> Callable[[int], MultiPoly]:
    return lambda k: complete_sym(k, A)

