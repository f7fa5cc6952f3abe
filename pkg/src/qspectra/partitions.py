"""Partitions, hook sets and Littlewood-Richardson coefficients."""
from __future__ import annotations

import json
import re
from collections import Counter
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator

from .errors import IndexOutOfRange


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; trailing zeros are dropped.

    Indexing past the last part returns 0, matching the convention that a
    partition has infinitely many zero parts.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        while parts and parts[-1] == 0:
            parts.pop()
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        if 0 in parts:
            raise ValueError(f"zero part inside {parts}")
        return super().__new__(cls, parts)

    @property
    def parts(self) -> tuple:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        """0-based part access with implicit zeros."""
        return self[i] if i < len(self) else 0

    def conjugate(self) -> "Partition":
        if not self:
            return self
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read ``(a,b,c)`` or the JSON array ``[a,b,c]``."""
        s = text.strip()
        if s.startswith("["):
            try:
                data = json.loads(s)
            except json.JSONDecodeError as exc:
                raise ValueError(f"malformed partition {text!r}") from exc
            if not isinstance(data, list) or not all(isinstance(x, int) for x in data):
                raise ValueError(f"malformed partition {text!r}")
            return cls(data)
        m = re.fullmatch(r"\(\s*((?:\d+\s*,\s*)*\d+)?\s*,?\s*\)", s)
        if m is None:
            raise ValueError(f"malformed partition {text!r}")
        body = m.group(1)
        return cls(int(x) for x in body.split(",")) if body else cls()

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self)) + ")"

    def __repr__(self) -> str:
        return f"Partition({str(self)})"


EMPTY = Partition()


def partitions_of(k: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[Partition]:
    """All partitions of ``k`` in reverse lexicographic order."""
    if max_part is None:
        max_part = k
    if max_len is None:
        max_len = k

    def rec(rest, cap, slots):
        if rest == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first, slots - 1):
                yield (first,) + tail

    for p in rec(k, max_part, max_len):
        yield Partition(p)


def contains(mu: Partition, nu: Partition) -> bool:
    """``mu`` is inside ``nu`` componentwise."""
    return len(mu) <= len(nu) and all(a <= b for a, b in zip(mu, nu))


def lambda_mn(m: int, n: int) -> Partition:
    """The rectangle with ``m+1`` rows of length ``n+1``."""
    return Partition([n + 1] * (m + 1))


def in_hook(lam: Partition, m: int, n: int) -> bool:
    """Membership in the fat hook: row ``m+1`` of ``lam`` is at most ``n``."""
    return Partition(lam).part(m) <= n


def ch_partitions(m: int, n: int, k: int, r: int) -> tuple[Partition, Partition]:
    """``((n+1)^k, n^(m-k))`` and ``(n^m, r)``."""
    if not 0 <= k <= m:
        raise IndexOutOfRange(f"k={k} outside 0..{m}")
    if not 0 <= r <= n:
        raise IndexOutOfRange(f"r={r} outside 0..{n}")
    upper = Partition([n + 1] * k + [n] * (m - k))
    lower = Partition([n] * m + [r])
    return upper, lower


# ---------------------------------------------------------------------------
# Littlewood-Richardson rule


@lru_cache(maxsize=None)
def _lr(lam: Partition, mu: Partition, nu: Partition) -> int:
    if nu.weight != lam.weight + mu.weight or not contains(lam, nu) or not contains(mu, nu):
        return 0
    if not mu:
        return 1
    # cells of nu/lam in reverse reading order: rows top-down, right to left
    cells = [(r, c) for r in range(len(nu)) for c in range(nu[r] - 1, lam.part(r) - 1, -1)]
    filled: dict[tuple[int, int], int] = {}
    content = [0] * (len(mu) + 1)
    count = 0

    def dfs(i: int):
        nonlocal count
        if i == len(cells):
            count += 1
            return
        r, c = cells[i]
        hi = len(mu)
        right = filled.get((r, c + 1))
        if right is not None:
            hi = min(hi, right)
        above = filled.get((r - 1, c))
        lo = above + 1 if above is not None else 1
        for v in range(lo, hi + 1):
            if content[v] >= mu[v - 1]:
                continue
            if v > 1 and content[v] + 1 > content[v - 1]:
                continue
            content[v] += 1
            filled[(r, c)] = v
            dfs(i + 1)
            del filled[(r, c)]
            content[v] -= 1

    dfs(0)
    return count


def lr_coeff(lam, mu, nu) -> int:
    """Littlewood-Richardson coefficient of ``s_nu`` in ``s_lam * s_mu``.

    Counts semistandard fillings of ``nu/lam`` with content ``mu`` whose
    reverse reading word is a lattice word.
    """
    return _lr(Partition(lam), Partition(mu), Partition(nu))


def lr_expand(lam, mu) -> dict[Partition, int]:
    """Nonzero coefficients of ``s_lam * s_mu`` in the Schur basis."""
    lam, mu = Partition(lam), Partition(mu)
    w = lam.weight + mu.weight
    out = {}
    for nu in partitions_of(w, max_len=len(lam) + len(mu)):
        c = lr_coeff(lam, mu, nu)
        if c:
            out[nu] = c
    return out


# ---------------------------------------------------------------------------
# brute-force Schur polynomials (independent oracle)


def _ssyt_contents(shape: Partition, nvars: int) -> Iterator[tuple[int, ...]]:
    cells = [(r, c) for r in range(len(shape)) for c in range(shape[r])]
    grid: dict[tuple[int, int], int] = {}
    content = [0] * nvars

    def dfs(i):
        if i == len(cells):
            yield tuple(content)
            return
        r, c = cells[i]
        lo = 1
        if c > 0:
            lo = grid[(r, c - 1)]
        if r > 0:
            lo = max(lo, grid[(r - 1, c)] + 1)
        for v in range(lo, nvars + 1):
            grid[(r, c)] = v
            content[v - 1] += 1
            yield from dfs(i + 1)
            content[v - 1] -= 1
        grid.pop((r, c), None)

    yield from dfs(0)


@lru_cache(maxsize=None)
def schur_monomials(shape: Partition, nvars: int) -> Counter:
    """Monomial expansion of ``s_shape(x_1..x_nvars)`` via tableaux."""
    return Counter(_ssyt_contents(Partition(shape), nvars))


def schur_product_brute(lam, mu, nvars: int | None = None) -> dict[Partition, int]:
    """Schur expansion of ``s_lam * s_mu`` by multiplying monomial expansions
    and peeling off leading monomials.  ``nvars`` defaults to the weight."""
    lam, mu = Partition(lam), Partition(mu)
    w = lam.weight + mu.weight
    nvars = nvars if nvars is not None else max(w, 1)
    a, b = schur_monomials(lam, nvars), schur_monomials(mu, nvars)
    # only exponent vectors that are partitions are needed to read off the expansion
    prod_: Counter = Counter()
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if all(x >= y for x, y in zip(e, e[1:])):
                prod_[e] += ca * cb
    out = {}
    for nu in partitions_of(w, max_len=nvars):  # lexicographically decreasing
        key = tuple(nu) + (0,) * (nvars - len(nu))
        c = prod_.get(key, 0)
        if c:
            out[nu] = c
            for e, k in schur_monomials(nu, nvars).items():
                if e in prod_:
                    prod_[e] -= c * k
    return out


def horizontal_strips(lam, k: int) -> list[Partition]:
    """Partitions obtained from ``lam`` by adding a horizontal ``k``-strip."""
    lam = Partition(lam)
    rows = len(lam) + 1
    out = []
    for adds in combinations_with_replacement(range(rows), k):
        cnt = Counter(adds)
        new = [lam.part(i) + cnt.get(i, 0) for i in range(rows)]
        # horizontal strip: new_i <= lam_{i-1}
        if all(new[i] <= lam.part(i - 1) for i in range(1, rows)):
            out.append(Partition(new))
    return sorted(set(out), reverse=True)
