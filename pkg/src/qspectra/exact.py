"""Exact coefficient arithmetic.

Sparse multivariate polynomials over the rationals in the variables
``q`` (Laurent), ``mu_i``, ``nu_j`` and a few formal symbols, rational
functions with a factored denominator, and truncated power series.

Coefficients are plain Python ``int`` where possible and
:class:`fractions.Fraction` otherwise, so every result is exact.
"""
from __future__ import annotations

import heapq
from enum import IntEnum
from fractions import Fraction
from math import prod
from operator import add
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import (
    DenominatorVanishes,
    FormalVarMismatch,
    MissingAssignment,
    NonUnitConstantTerm,
    NotDivisible,
    NotFormalVariable,
    OrderMismatch,
    ZeroBaseNegativeExponent,
)

Scalar = Union[int, Fraction]


class VarKind(IntEnum):
    Q = 0
    MU = 1
    NU = 2
    FORMAL = 3


_FORMAL_NAMES = ("t", "z", "y")


class VarId(NamedTuple):
    """A variable; tuple ordering is the canonical variable order."""

    kind: VarKind
    index: int = 0

    @property
    def name(self) -> str:
        if self.kind == VarKind.Q:
            return "q"
        if self.kind == VarKind.MU:
            return f"mu{self.index + 1}"
        if self.kind == VarKind.NU:
            return f"nu{self.index + 1}"
        if self.index < len(_FORMAL_NAMES):
            return _FORMAL_NAMES[self.index]
        return f"x{self.index}"

    def __repr__(self) -> str:
        return self.name


Q = VarId(VarKind.Q)
T = VarId(VarKind.FORMAL, 0)
Z = VarId(VarKind.FORMAL, 1)
Y = VarId(VarKind.FORMAL, 2)


def mu_var(i: int) -> VarId:
    return VarId(VarKind.MU, i)


def nu_var(j: int) -> VarId:
    return VarId(VarKind.NU, j)


def _clean(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# multiplication kernel


def _mul_terms(ta: dict, tb: dict, nv: int) -> dict:
    if len(ta) > len(tb):
        ta, tb = tb, ta
    if not ta:
        return {}
    if len(ta) == 1:
        ((ea, ca),) = ta.items()
        return {tuple(map(add, ea, eb)): ca * cb for eb, cb in tb.items()}
    if nv == 0:
        return {(): ta[()] * tb[()]}
    # pack exponent vectors into one int per monomial; product = key sum
    lo_a = [min(e[i] for e in ta) for i in range(nv)]
    lo_b = [min(e[i] for e in tb) for i in range(nv)]
    shifts, masks, pos = [], [], 0
    for i in range(nv):
        span = max(e[i] for e in ta) - lo_a[i] + max(e[i] for e in tb) - lo_b[i]
        width = span.bit_length() + 1
        shifts.append(pos)
        masks.append((1 << width) - 1)
        pos += width

    def pack(terms, lo):
        out = []
        for e, c in terms.items():
            k = 0
            for x, l, s in zip(e, lo, shifts):
                k |= (x - l) << s
            out.append((k, c))
        return out

    pa, pb = pack(ta, lo_a), pack(tb, lo_b)
    acc: dict = {}
    get = acc.get
    for ka, ca in pa:
        for kb, cb in pb:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    base = [x + y for x, y in zip(lo_a, lo_b)]
    out = {}
    for k, c in acc.items():
        if c:
            out[tuple(((k >> s) & m) + b for s, m, b in zip(shifts, masks, base))] = c
    return out


# ---------------------------------------------------------------------------
# MultiPoly


class MultiPoly:
    """Sparse polynomial: exponent tuple over ``vars`` -> rational coefficient.

    ``vars`` is sorted in canonical order and holds only variables that
    actually occur, so two equal polynomials have identical storage.
    Only ``q`` may carry negative exponents.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping | None = None, vars: Iterable[VarId] = ()):
        vars = tuple(vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(vars):
                raise ValueError("exponent vector length does not match vars")
            c = _clean(Fraction(c)) if not isinstance(c, int) else c
            if c:
                clean[e] = clean.get(e, 0) + c
        for i, v in enumerate(vars):
            if v.kind != VarKind.Q and any(e[i] < 0 for e in clean):
                raise ValueError(f"negative exponent on {v.name}")
        order = sorted(range(len(vars)), key=lambda i: vars[i])
        if order != list(range(len(vars))):
            vars = tuple(vars[i] for i in order)
            clean = {tuple(e[i] for i in order): c for e, c in clean.items()}
        self._set(vars, {e: c for e, c in clean.items() if c})

    def _set(self, vars, terms):
        used = [i for i in range(len(vars)) if any(e[i] for e in terms)]
        if len(used) != len(vars):
            vars = tuple(vars[i] for i in used)
            terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        self.vars = vars
        self.terms = terms
        self._hash = None

    @classmethod
    def _make(cls, vars, terms) -> "MultiPoly":
        """Trusted constructor: ``terms`` has no zero coefficients."""
        p = cls.__new__(cls)
        p._set(vars, terms)
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        c = _clean(c)
        return cls._make((), {(): c} if c else {})

    @classmethod
    def var(cls, v: VarId, power: int = 1) -> "MultiPoly":
        if power < 0 and v.kind != VarKind.Q:
            raise ValueError(f"negative exponent on {v.name}")
        return cls._make((v,), {(power,): 1})

    @classmethod
    def monomial(cls, exps: Mapping[VarId, int], coeff: Scalar = 1) -> "MultiPoly":
        vs = tuple(sorted(exps))
        return cls({tuple(exps[v] for v in vs): coeff}, vs)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> Scalar:
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), 0)

    def degree(self, v: VarId) -> int:
        """Largest exponent of ``v`` (0 if absent, -1 for the zero poly)."""
        if v not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(v)
        return max(e[i] for e in self.terms)

    def min_degree(self, v: VarId) -> int:
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return min(e[i] for e in self.terms)

    def _key(self, e):
        if self.vars and self.vars[0] == Q:
            return (sum(e) - e[0], e)
        return (sum(e), e)

    def sorted_terms(self) -> list:
        """Terms in canonical order, leading term first."""
        return sorted(self.terms.items(), key=lambda t: self._key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=self._key)
        return e, self.terms[e]

    def monomial_unit(self):
        """Return (c, k) if self == c*q^k with c != 0, else None."""
        if len(self.terms) != 1 or any(v != Q for v in self.vars):
            return None
        ((e, c),) = self.terms.items()
        return c, (e[0] if e else 0)

    # -- equality / hashing -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        if _is_scalar(other):
            return (not self.vars and self.terms.get((), 0) == other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, MultiPoly):
            return x
        if _is_scalar(x):
            return MultiPoly.const(x)
        return None

    @staticmethod
    def _align(a: "MultiPoly", b: "MultiPoly"):
        if a.vars == b.vars:
            return a.vars, a.terms, b.terms
        vs = tuple(sorted(set(a.vars) | set(b.vars)))
        return vs, _embed(a, vs), _embed(b, vs)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        vs, ta, tb = self._align(self, other)
        out = dict(ta)
        for e, c in tb.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return MultiPoly._make(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._make(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        vs, ta, tb = self._align(self, other)
        return MultiPoly._make(vs, _mul_terms(ta, tb, len(vs)))

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "MultiPoly":
        c = _clean(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return MultiPoly._make(self.vars, {e: _clean(x * c) for e, x in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            unit = self.monomial_unit()
            if unit is None:
                raise ValueError("negative power of a non-unit polynomial")
            c, d = unit
            return MultiPoly({(d * k,): Fraction(1, 1) / Fraction(c) ** (-k)}, (Q,))
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, MultiPoly):
            unit = other.monomial_unit()
            if unit is not None:
                return self * other ** -1
            return RationalFunction(self, other)
        if isinstance(other, RationalFunction):
            return RationalFunction(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return MultiPoly.const(other) / self
        return NotImplemented

    # -- calculus / substitution -------------------------------------------

    def diff(self, v: VarId) -> "MultiPoly":
        if v not in self.vars:
            return ZERO
        i = self.vars.index(v)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly._make(self.vars, out)

    def subs(self, v: VarId, value) -> "MultiPoly":
        """Substitute ``value`` (scalar or MultiPoly) for ``v``."""
        if v not in self.vars:
            return self
        value = self._coerce(value)
        if value is None:
            raise TypeError("substitution value must be a scalar or MultiPoly")
        i = self.vars.index(v)
        rest_vars = self.vars[:i] + self.vars[i + 1:]
        groups: dict[int, dict] = {}
        for e, c in self.terms.items():
            groups.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        out = ZERO
        for k in sorted(groups):
            if k < 0 and value.monomial_unit() is None:
                if value.is_zero():
                    raise ZeroBaseNegativeExponent(f"{v.name} -> 0 with exponent {k}")
                raise ValueError("cannot substitute a non-unit for a negative power")
            out = out + MultiPoly._make(rest_vars, groups[k]) * value ** k
        return out

    def evaluate(self, point: Mapping[VarId, Scalar]) -> Fraction:
        vals = []
        for v in self.vars:
            if v not in point:
                raise MissingAssignment(v.name)
            vals.append(Fraction(point[v]))
        pw: list[dict] = [{} for _ in self.vars]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = Fraction(c)
            for i, x in enumerate(e):
                if x:
                    cache = pw[i]
                    p = cache.get(x)
                    if p is None:
                        if vals[i] == 0 and x < 0:
                            raise ZeroBaseNegativeExponent(f"{self.vars[i].name} -> 0 with exponent {x}")
                        p = cache[x] = vals[i] ** x
                    term *= p
            total += term
        return total

    def coefficient(self, v: VarId, k: int) -> "MultiPoly":
        """Coefficient of ``v**k`` as a polynomial in the other variables."""
        if v not in self.vars:
            return self if k == 0 else ZERO
        i = self.vars.index(v)
        rest = self.vars[:i] + self.vars[i + 1:]
        return MultiPoly._make(rest, {e[:i] + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k})

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises NotDivisible otherwise."""
        divisor = self._coerce(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return ZERO
        vs, ta, tb = self._align(self, divisor)
        shift = 0
        if vs and vs[0] == Q:
            sa = min(e[0] for e in ta)
            sb = min(e[0] for e in tb)
            shift = sa - sb
            ta = {(e[0] - sa,) + e[1:]: c for e, c in ta.items()}
            tb = {(e[0] - sb,) + e[1:]: c for e, c in tb.items()}

        def key(e):
            return (sum(e), e)

        ed = max(tb, key=key)
        cd = tb[ed]
        rem = dict(ta)
        heap = [tuple(-x for x in (sum(e),) + e) for e in rem]
        heapq.heapify(heap)
        quot = {}
        while rem:
            h = heapq.heappop(heap)
            er = tuple(-x for x in h[1:])
            if er not in rem:
                continue
            eq = tuple(x - y for x, y in zip(er, ed))
            if any(x < 0 for x in eq):
                raise NotDivisible("leading term of remainder is not divisible")
            c = _clean(Fraction(rem[er]) / cd) if cd != 1 else rem[er]
            quot[eq] = c
            for e, cb in tb.items():
                t = tuple(map(add, eq, e))
                old = rem.get(t)
                new = (old or 0) - c * cb
                new = _clean(new) if type(new) is Fraction else new
                if new:
                    rem[t] = new
                    if old is None:
                        heapq.heappush(heap, tuple(-x for x in (sum(t),) + t))
                elif old is not None:
                    del rem[t]
        if shift:
            quot = {(e[0] + shift,) + e[1:]: c for e, c in quot.items()}
        return MultiPoly._make(vs, quot)

    # -- rendering ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v.name if x == 1 else f"{v.name}^{x}" for v, x in zip(self.vars, e) if x
            )
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = str(a) if isinstance(a, int) else f"({a})"
            elif a == 1:
                body = mono
            elif isinstance(a, int):
                body = f"{a}*{mono}"
            else:
                body = f"({a})*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def _embed(p: MultiPoly, vs: tuple) -> dict:
    pos = [vs.index(v) for v in p.vars]
    n = len(vs)
    out = {}
    for e, c in p.terms.items():
        f = [0] * n
        for i, x in zip(pos, e):
            f[i] = x
        out[tuple(f)] = c
    return out


ZERO = MultiPoly._make((), {})
ONE = MultiPoly._make((), {(): 1})


def var(v: VarId) -> MultiPoly:
    return MultiPoly.var(v)


def q_pow(k: int) -> MultiPoly:
    return MultiPoly.var(Q, k)


# ---------------------------------------------------------------------------
# RationalFunction


def _normalize_base(p: MultiPoly):
    """Split ``p`` as unit * base with ``base`` monic and q-free leading monomial.

    Returns (unit, base) with ``unit`` a MultiPoly monomial c*q^k and
    ``base`` None when ``p`` itself is a unit.
    """
    if not p.terms:
        raise DenominatorVanishes("zero denominator")
    unit = p.monomial_unit()
    if unit is not None:
        return p, None
    e, c = p.leading_term()
    k = e[0] if p.vars and p.vars[0] == Q else 0
    u = MultiPoly({(k,): c}, (Q,)) if k else MultiPoly.const(c)
    if u == 1:
        return ONE, p
    return u, p * (u ** -1)


class RationalFunction:
    """Quotient ``num / prod(base**exp)`` with no gcd reduction.

    The denominator is kept as a map from normalized base polynomials to
    exponents; units (c*q^k) are folded into the numerator.  Sums use the
    exponent-wise maximum of the two base maps as common denominator.
    """

    __slots__ = ("num", "factors", "_den")

    def __init__(self, num=0, den=1):
        num = MultiPoly._coerce(num)
        den = MultiPoly._coerce(den)
        if num is None or den is None:
            raise TypeError("RationalFunction parts must be scalars or MultiPoly")
        unit, base = _normalize_base(den)
        num = num * unit ** -1
        self.num = num
        self.factors = {base: 1} if base is not None and num.terms else {}
        self._den = None

    @classmethod
    def _from_parts(cls, num: MultiPoly, factors: dict) -> "RationalFunction":
        r = cls.__new__(cls)
        r.num = num
        r.factors = {b: e for b, e in factors.items() if e} if num.terms else {}
        r._den = None
        return r

    @classmethod
    def from_factors(cls, num, dens: Iterable) -> "RationalFunction":
        """``num / prod(dens)`` keeping each denominator factor separate."""
        num = MultiPoly._coerce(num)
        factors: dict = {}
        for d in dens:
            d = MultiPoly._coerce(d)
            unit, base = _normalize_base(d)
            num = num * unit ** -1
            if base is not None:
                factors[base] = factors.get(base, 0) + 1
        return cls._from_parts(num, factors)

    @property
    def den(self) -> MultiPoly:
        if self._den is None:
            self._den = prod((b ** e for b, e in self.factors.items()), start=ONE)
        return self._den

    @property
    def numerator(self) -> MultiPoly:
        return self.num

    @property
    def denominator(self) -> MultiPoly:
        return self.den

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_polynomial_form(self) -> bool:
        """True when the stored denominator is 1 (no division pending)."""
        return not self.factors

    def to_poly(self) -> MultiPoly:
        """Exact polynomial value; NotDivisible if the denominator does not cancel."""
        if not self.factors:
            return self.num
        return self.num.exact_div(self.den)

    @staticmethod
    def _coerce(x):
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, MultiPoly):
            return RationalFunction._from_parts(x, {})
        if _is_scalar(x):
            return RationalFunction._from_parts(MultiPoly.const(x), {})
        return None

    @staticmethod
    def _cofactors(fa: dict, fb: dict):
        if fa == fb:
            return fa, ONE, ONE
        lcm = dict(fa)
        for b, e in fb.items():
            if e > lcm.get(b, 0):
                lcm[b] = e
        ca = prod((b ** (e - fa.get(b, 0)) for b, e in lcm.items() if e > fa.get(b, 0)), start=ONE)
        cb = prod((b ** (e - fb.get(b, 0)) for b, e in lcm.items() if e > fb.get(b, 0)), start=ONE)
        return lcm, ca, cb

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        lcm, ca, cb = self._cofactors(self.factors, other.factors)
        return RationalFunction._from_parts(self.num * ca + other.num * cb, lcm)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._from_parts(-self.num, self.factors)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        num = self.num * other.num
        if not num.terms:
            return RationalFunction._from_parts(ZERO, {})
        factors = dict(self.factors)
        for b, e in other.factors.items():
            factors[b] = factors.get(b, 0) + e
        return RationalFunction._from_parts(num, factors)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        r = RationalFunction.from_factors(self.den, [self.num])
        return r

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.factors:
            unit = other.num.monomial_unit()
            if unit is not None:
                return self * other.num ** -1
            return self * RationalFunction.from_factors(ONE, [other.num])
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        num = self.num ** k
        return RationalFunction._from_parts(num, {b: e * k for b, e in self.factors.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ratfun_eq(self, other)

    __hash__ = None

    def evaluate(self, point: Mapping[VarId, Scalar]) -> Fraction:
        d = Fraction(1)
        for b, e in self.factors.items():
            d *= b.evaluate(point) ** e
        if d == 0:
            raise DenominatorVanishes("denominator vanishes at evaluation point")
        return self.num.evaluate(point) / d

    def subs(self, v: VarId, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            if not value.factors:
                value = value.num
            else:
                raise TypeError("substitution of a proper fraction is not supported")
        num = self.num.subs(v, value)
        dens = []
        for b, e in self.factors.items():
            bs = b.subs(v, value) if v in b.vars else b
            if not bs.terms:
                raise DenominatorVanishes(f"denominator factor {b} vanishes at {v.name} = {value}")
            dens.extend([bs] * e)
        return RationalFunction.from_factors(num, dens)

    def diff(self, v: VarId) -> "RationalFunction":
        return diff_univar(self, v)

    def __str__(self) -> str:
        if not self.factors:
            return str(self.num)
        fs = sorted(self.factors.items(), key=lambda t: str(t[0]))
        den = "*".join(f"({b})" if e == 1 else f"({b})^{e}" for b, e in fs)
        return f"({self.num})/({den})" if len(fs) > 1 else f"({self.num})/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def as_ratfun(x) -> RationalFunction:
    r = RationalFunction._coerce(x)
    if r is None:
        raise TypeError(f"cannot interpret {type(x).__name__} as a rational function")
    return r


# ---------------------------------------------------------------------------
# public operations


def poly_arith(op: str, a: MultiPoly, b) -> MultiPoly:
    """Apply ``add``, ``sub``, ``mul`` or ``pow`` (b is an exponent >= 0)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        if not isinstance(b, int) or b < 0:
            raise ValueError("pow exponent must be a nonnegative integer")
        return a ** b
    raise ValueError(f"unknown op {op!r}")


def ratfun_eq(a, b) -> bool:
    """Equality by cross-multiplication over the common base map."""
    a, b = as_ratfun(a), as_ratfun(b)
    if a.factors == b.factors:
        return a.num == b.num
    _, ca, cb = RationalFunction._cofactors(a.factors, b.factors)
    return a.num * ca == b.num * cb


def poly_eval(p, point: Mapping[VarId, Scalar]) -> Fraction:
    if _is_scalar(p):
        return Fraction(p)
    return p.evaluate(point)


def diff_univar(f, v: VarId):
    """Derivative with respect to a formal variable.

    For ``N / prod B_i^e_i`` this returns
    ``(N' prod B_i - N sum e_i B_i' prod_{j!=i} B_j) / prod B_i^(e_i+1)``
    over the bases that depend on ``v``, so repeated differentiation
    raises exponents by one instead of squaring the denominator.
    """
    if v.kind != VarKind.FORMAL:
        raise NotFormalVariable(f"{v.name} is not a formal variable")
    if isinstance(f, MultiPoly) or _is_scalar(f):
        return MultiPoly._coerce(f).diff(v)
    f = as_ratfun(f)
    dep = [(b, e) for b, e in f.factors.items() if v in b.vars]
    dnum = f.num.diff(v)
    if not dep:
        return RationalFunction._from_parts(dnum, f.factors)
    bases = [b for b, _ in dep]
    rad = prod(bases, start=ONE)
    s = ZERO
    for i, (b, e) in enumerate(dep):
        others = prod((bases[j] for j in range(len(bases)) if j != i), start=ONE)
        s = s + b.diff(v) * others * e
    factors = dict(f.factors)
    for b, e in dep:
        factors[b] = e + 1
    return RationalFunction._from_parts(dnum * rad - f.num * s, factors)


# ---------------------------------------------------------------------------
# TruncatedSeries


def _is_zero(x) -> bool:
    return x == 0


class TruncatedSeries:
    """Power series in one formal symbol, kept through ``t**order``.

    Coefficients are any exact scalars of this module (int, Fraction,
    MultiPoly, RationalFunction); arithmetic never reads past ``order``.
    """

    __slots__ = ("formal", "coeffs")

    def __init__(self, coeffs: Iterable, order: int | None = None, formal: VarId = T):
        if formal.kind != VarKind.FORMAL:
            raise NotFormalVariable(f"{formal.name} is not a formal variable")
        cs = list(coeffs)
        if order is not None:
            if order < 0:
                raise ValueError("series order must be >= 0")
            cs = cs[: order + 1] + [ZERO] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("series needs at least one coefficient")
        self.formal = formal
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k <= self.order else ZERO

    def _check(self, other: "TruncatedSeries"):
        if other.formal != self.formal:
            raise FormalVarMismatch(f"{self.formal.name} vs {other.formal.name}")
        if other.order != self.order:
            raise OrderMismatch(f"order {self.order} vs {other.order}")

    def _new(self, cs) -> "TruncatedSeries":
        s = TruncatedSeries.__new__(TruncatedSeries)
        s.formal = self.formal
        s.coeffs = tuple(cs)
        return s

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return self._new(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        return self._new(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._new(-a for a in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        K = self.order
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(K + 1):
            acc = 0
            for i in range(k + 1):
                if not _is_zero(a[i]) and not _is_zero(b[k - i]):
                    acc = acc + a[i] * b[k - i]
            out.append(acc)
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "TruncatedSeries":
        return self._new(c * a for a in self.coeffs)

    def compose_scale(self, c) -> "TruncatedSeries":
        """Substitute ``t -> c*t``: coefficient k is multiplied by ``c**k``."""
        out, p = [], 1
        for a in self.coeffs:
            out.append(a * p)
            p = p * c
        return self._new(out)

    def derivative(self) -> "TruncatedSeries":
        """d/dt; result has order ``order - 1`` (order 0 stays order 0)."""
        if self.order == 0:
            return self._new([ZERO])
        return self._new(a * k for k, a in enumerate(self.coeffs) if k)

    def log_derivative(self) -> "TruncatedSeries":
        return series_log_derivative(self)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise OrderMismatch(f"cannot extend order {self.order} to {order}")
        return self._new(self.coeffs[: order + 1])

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.formal == other.formal and self.order == other.order
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    __hash__ = None

    def __str__(self) -> str:
        t = self.formal.name
        parts = []
        for k, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            mono = "" if k == 0 else (t if k == 1 else f"{t}^{k}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return (" + ".join(parts) or "0") + f" + O({t}^{self.order + 1})"

    def __repr__(self) -> str:
        return f"TruncatedSeries({self})"


def series_arith(op: str, a: TruncatedSeries, b) -> TruncatedSeries:
    """``add``/``sub``/``mul`` of two series, ``scale`` by a scalar, or
    ``compose_scale`` (t -> b*t)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, TruncatedSeries):
            raise TypeError("mul expects two series; use scale for scalars")
        return a * b
    if op == "scale":
        return a.scale(b)
    if op == "compose_scale":
        return a.compose_scale(b)
    raise ValueError(f"unknown op {op!r}")


def series_log_derivative(a: TruncatedSeries) -> TruncatedSeries:
    """``a'/a`` through order K-1 for a series with constant term 1.

    Solves ``(k+1) a_{k+1} = sum_{j<=k} b_j a_{k-j}`` for ``b``.
    """
    if not a.coeffs[0] == 1:
        raise NonUnitConstantTerm("log-derivative needs constant term 1")
    K = a.order
    if K == 0:
        return a._new([ZERO])
    cs = a.coeffs
    b = []
    for k in range(K):
        acc = cs[k + 1] * (k + 1)
        for j in range(k):
            if not _is_zero(b[j]) and not _is_zero(cs[k - j]):
                acc = acc - b[j] * cs[k - j]
        b.append(acc)
    return a._new(b)


def series_from_function(f, order: int, formal: VarId) -> TruncatedSeries:
    """Taylor coefficients at 0 of a rational function in ``formal``.

    Expands each denominator base as a series with nonzero constant term
    and multiplies out; used to read off derivatives at the origin.
    """
    f = as_ratfun(f)
    num = f.num
    out = TruncatedSeries([num.coefficient(formal, k) for k in range(order + 1)], formal=formal)
    for b, e in f.factors.items():
        cs = [b.coefficient(formal, k) for k in range(order + 1)]
        c0 = cs[0]
        if c0 == 0:
            raise DenominatorVanishes(f"factor {b} vanishes at {formal.name} = 0")
        # inverse series of b via the recursion inv_k = -(1/c0) sum_{j>=1} c_j inv_{k-j}
        inv0 = as_ratfun(1) / c0
        inv = [inv0]
        for k in range(1, order + 1):
            acc = ZERO
            for j in range(1, k + 1):
                if not _is_zero(cs[j]):
                    acc = acc + cs[j] * inv[k - j]
            inv.append(-acc * inv0)
        ser = TruncatedSeries(inv, formal=formal)
        for _ in range(e):
            out = out * ser
    return out
