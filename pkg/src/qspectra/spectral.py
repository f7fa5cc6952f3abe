"""Spectral images of the characteristic subalgebra generators.

All quantities live in the polynomial ring in ``q^{+-1}``, ``mu_1..mu_m``
and ``nu_1..nu_n`` (rational functions where a division is pending), with
the formal symbols ``z`` and ``y`` for the residue calculus.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial, prod

from .errors import IdentityMismatch
from .exact import (
    ONE,
    Q,
    Y,
    Z,
    ZERO,
    MultiPoly,
    RationalFunction,
    diff_univar,
    mu_var,
    nu_var,
    q_pow,
    ratfun_eq,
    series_from_function,
    var,
)
from .partitions import Partition, ch_partitions
from .report import CellResult, VerificationReport
from .symfunc import Alphabet, complete_sym, default_order, elem_sym, jacobi_trudi, q_number


@dataclass(frozen=True)
class SpectralContext:
    """Bi-rank ``(m|n)`` and series order ``K``."""

    m: int
    n: int
    K: int = field(default_factory=default_order)

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be nonnegative")
        if self.K < 1:
            raise ValueError("series order must be >= 1")

    @property
    def q(self) -> MultiPoly:
        return var(Q)

    @property
    def mus(self) -> list[MultiPoly]:
        return [var(mu_var(i)) for i in range(self.m)]

    @property
    def nus(self) -> list[MultiPoly]:
        return [var(nu_var(j)) for j in range(self.n)]

    def even(self) -> Alphabet:
        """The alphabet ``q^-1 mu``."""
        return Alphabet.mu(self.m, q_pow(-1))

    def odd(self) -> Alphabet:
        """The alphabet ``q nu``."""
        return Alphabet.nu(self.n, q_pow(1))

    def _need_rank(self):
        if self.m + self.n < 1:
            raise ValueError("need m + n >= 1")


@dataclass(frozen=True)
class WeightVector:
    d: tuple
    d_tilde: tuple


QQI = q_pow(1) - q_pow(-1)  # q - q^-1


def pi_k(k: int, ctx: SpectralContext) -> MultiPoly:
    """Sum of ``(q^-1 mu_i)^k`` minus sum of ``(q nu_j)^k`` (over all n odd values)."""
    if k < 1:
        raise ValueError("pi_k is defined for k >= 1")
    q = ctx.q
    return sum(((x * q ** -1) ** k for x in ctx.mus), start=ZERO) - sum(((x * q) ** k for x in ctx.nus), start=ZERO)


def a_image(k: int, ctx: SpectralContext) -> MultiPoly:
    if k < 0:
        return ZERO
    E, H = ctx.even(), -ctx.odd()
    return sum((elem_sym(r, E) * complete_sym(k - r, H) for r in range(k + 1)), start=ZERO)


def s_image(k: int, ctx: SpectralContext) -> MultiPoly:
    if k < 0:
        return ZERO
    E, H = -ctx.odd(), ctx.even()
    return sum((elem_sym(r, E) * complete_sym(k - r, H) for r in range(k + 1)), start=ZERO)


def build_weights(ctx: SpectralContext, *, even_exp: int = -2, odd_exp: int = 2) -> WeightVector:
    """Weights with configurable q-exponents inside the products.

    ``even_exp``/``odd_exp`` are the powers of q multiplying the other
    value in the numerator factors of ``d_i``; the defaults give the true
    weights.  Other values exist only to build corrupted weights for
    sensitivity tests.
    """
    ctx._need_rank()
    q, mus, nus = ctx.q, ctx.mus, ctx.nus
    d = []
    for i, mi in enumerate(mus):
        nums = [mi - q ** even_exp * mp for p, mp in enumerate(mus) if p != i]
        nums += [mi - q ** odd_exp * nj for nj in nus]
        dens = [mi - mp for p, mp in enumerate(mus) if p != i] + [mi - nj for nj in nus]
        d.append(RationalFunction.from_factors(q ** -1 * prod(nums, start=ONE), dens))
    dt = []
    for j, nj in enumerate(nus):
        nums = [nj - q ** -2 * mi for mi in mus]
        nums += [nj - q ** 2 * np_ for p, np_ in enumerate(nus) if p != j]
        dens = [nj - mi for mi in mus] + [nj - np_ for p, np_ in enumerate(nus) if p != j]
        dt.append(RationalFunction.from_factors(-q * prod(nums, start=ONE), dens))
    return WeightVector(tuple(d), tuple(dt))


def f_numerator_denominator(ctx: SpectralContext, formal=Z):
    """Linear factors of f(z): numerators ``z - q^-2 mu_i``, ``z - q^2 nu_j``
    and poles ``mu_i``, ``nu_j``."""
    q, z = ctx.q, var(formal)
    nums = [z - q ** -2 * x for x in ctx.mus] + [z - q ** 2 * x for x in ctx.nus]
    poles = ctx.mus + ctx.nus
    return nums, poles


def f_of_z(ctx: SpectralContext) -> RationalFunction:
    ctx._need_rank()
    nums, poles = f_numerator_denominator(ctx)
    z = var(Z)
    return RationalFunction.from_factors(prod(nums, start=ONE), [z - x for x in poles])


def f_of_y(ctx: SpectralContext) -> RationalFunction:
    """f(1/y) = prod (1 - q^-2 mu_i y)/(1 - mu_i y) * prod (1 - q^2 nu_j y)/(1 - nu_j y)."""
    ctx._need_rank()
    q, y = ctx.q, var(Y)
    nums = [1 - q ** -2 * x * y for x in ctx.mus] + [1 - q ** 2 * x * y for x in ctx.nus]
    dens = [1 - x * y for x in ctx.mus + ctx.nus]
    return RationalFunction.from_factors(prod(nums, start=ONE), dens)


def u_terms(ctx: SpectralContext) -> list[RationalFunction]:
    """The simple summands of u(y), one per spectral value."""
    ctx._need_rank()
    q, y = ctx.q, var(Y)
    out = []
    for x in ctx.mus:
        out.append(RationalFunction.from_factors(q ** -1 * x, [1 - x * y, 1 - q ** -2 * x * y]))
    for x in ctx.nus:
        out.append(RationalFunction.from_factors(-q * x, [1 - x * y, 1 - q ** 2 * x * y]))
    return out


def u_of_y(ctx: SpectralContext) -> RationalFunction:
    return sum(u_terms(ctx), start=RationalFunction(0))


def smn_product(ctx: SpectralContext) -> MultiPoly:
    """``prod_{i,j} (q^-1 mu_i - q nu_j)``."""
    q = ctx.q
    return prod((q ** -1 * mi - q * nj for mi in ctx.mus for nj in ctx.nus), start=ONE)


class SpectralImages:
    """Cached spectral images for one context.

    ``weights`` may be supplied to study a modified parameterization; all
    derived quantities (``p``) then use it.
    """

    def __init__(self, ctx: SpectralContext, weights: WeightVector | None = None):
        self.ctx = ctx
        self._weights = weights
        self._cache: dict = {}

    def _memo(self, key, fn):
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = fn()
        return hit

    @property
    def weights(self) -> WeightVector:
        if self._weights is None:
            self._weights = build_weights(self.ctx)
        return self._weights

    def a(self, k: int) -> MultiPoly:
        return self._memo(("a", k), lambda: a_image(k, self.ctx))

    def s(self, k: int) -> MultiPoly:
        return self._memo(("s", k), lambda: s_image(k, self.ctx))

    def pi(self, k: int) -> MultiPoly:
        return self._memo(("pi", k), lambda: pi_k(k, self.ctx))

    def p(self, k: int) -> RationalFunction:
        def build():
            w = self.weights
            terms = [di * x ** k for di, x in zip(w.d, self.ctx.mus)]
            terms += [dj * x ** k for dj, x in zip(w.d_tilde, self.ctx.nus)]
            return sum(terms, start=RationalFunction(0))

        return self._memo(("p", k), build)

    def schur(self, lam) -> RationalFunction:
        lam = Partition(lam)
        return self._memo(("schur", lam), lambda: RationalFunction(jacobi_trudi(lam, self.s)))

    def f_taylor(self, k: int) -> RationalFunction:
        """``[y^k] f(y)``, i.e. the k-th derivative at 0 divided by k!."""
        def build():
            ser = series_from_function(f_of_y(self.ctx), max(k, self.ctx.K), Y)
            for j, c in enumerate(ser.coeffs):
                self._cache[("ft", j)] = c
            return self._cache[("ft", k)]

        return self._memo(("ft", k), build)

    def u_derivative_at_zero(self, k: int) -> RationalFunction:
        """``d^k u/dy^k`` at ``y = 0``, differentiating each summand."""
        def build():
            total = RationalFunction(0)
            for term in u_terms(self.ctx):
                g = term
                for _ in range(k):
                    g = diff_univar(g, Y)
                total = total + g.subs(Y, 0)
            return total

        return self._memo(("u0", k), build)


@lru_cache(maxsize=64)
def images_for(ctx: SpectralContext) -> SpectralImages:
    return SpectralImages(ctx)


def weights(ctx: SpectralContext) -> WeightVector:
    return images_for(ctx).weights


def p_image(k: int, ctx: SpectralContext) -> RationalFunction:
    """Weighted power sum ``sum d_i mu_i^k + sum d~_j nu_j^k``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ctx._need_rank()
    return images_for(ctx).p(k)


def p_image_poly(k: int, ctx: SpectralContext) -> MultiPoly:
    """The polynomial equal to ``p_image(k)``; raises NotDivisible if the
    denominator fails to cancel."""
    r = p_image(k, ctx)
    poly = r.to_poly()
    if not ratfun_eq(r, poly):
        raise IdentityMismatch("cleared form disagrees with p_image")
    return poly


def schur_image(lam, ctx: SpectralContext) -> RationalFunction:
    """Jacobi-Trudi determinant over the one-row images ``s_k``."""
    return images_for(ctx).schur(lam)


def residues(ctx: SpectralContext) -> list[tuple[MultiPoly, RationalFunction]]:
    """Residue of f(z) at each pole, as the value of ``(z - x) f(z)`` at ``z = x``
    after cancelling ``z - x`` by exact division."""
    nums, poles = f_numerator_denominator(ctx)
    z = var(Z)
    num = prod(nums, start=ONE)
    den = prod((z - x for x in poles), start=ONE)
    out = []
    for x in poles:
        cof = den.exact_div(z - x)
        out.append((x, RationalFunction(num.subs(Z, x), cof.subs(Z, x))))
    return out


def partial_fraction_checks(ctx: SpectralContext, images: SpectralImages | None = None):
    """(label, lhs, rhs) triples for the simple-fraction expansion of f."""
    images = images or images_for(ctx)
    w = images.weights
    q, z = ctx.q, var(Z)
    f = f_of_z(ctx)
    res = residues(ctx)
    checks = []
    for (x, r), dx in zip(res, list(w.d) + list(w.d_tilde)):
        checks.append((f"residue at {x}", r, QQI * x * dx))
    expansion = RationalFunction(1)
    for x, r in res:
        expansion = expansion + r * RationalFunction.from_factors(ONE, [z - x])
    checks.append(("f(z) = 1 + sum Res/(z - pole)", f, expansion))
    checks.append(("f(0)", f.subs(Z, 0), q ** (2 * (ctx.n - ctx.m))))
    num_deg, den_deg = f.num.degree(Z), f.den.degree(Z)
    lead_num = f.num.coefficient(Z, num_deg)
    lead_den = f.den.coefficient(Z, den_deg)
    checks.append(("deg_z num = deg_z den", num_deg, den_deg))
    checks.append(("limit at infinity", RationalFunction(lead_num, lead_den), 1))
    checks.append(("p_0 from f(0)", 1 - QQI * images.p(0), f.subs(Z, 0)))
    return checks


def zf_expansion_checks(k: int, ctx: SpectralContext, images: SpectralImages | None = None):
    """Expansion of ``z^k f(z)`` into polynomial part plus simple fractions,
    and ``p_k = [y^k] f(y) / (q - q^-1)``."""
    images = images or images_for(ctx)
    w = images.weights
    z = var(Z)
    lhs = f_of_z(ctx) * z ** k
    poly_part = sum((images.f_taylor(r) * z ** (k - r) for r in range(k + 1)), start=RationalFunction(0))
    frac = RationalFunction(0)
    for dx, x in zip(list(w.d) + list(w.d_tilde), ctx.mus + ctx.nus):
        frac = frac + dx * x ** (k + 1) * RationalFunction.from_factors(ONE, [z - x])
    rhs = poly_part + QQI * frac
    return [
        (f"z^{k} f(z) expansion", lhs, rhs),
        (f"p_{k} = f_{k}/((q-q^-1) {k}!)", images.p(k) * QQI, images.f_taylor(k)),
    ]


def partial_fraction_check(ctx: SpectralContext) -> VerificationReport:
    """Residues and simple-fraction expansion of f(z), as a one-cell report."""
    ctx._need_rank()
    return _report_from_checks("partial-frac", ctx, 0, partial_fraction_checks(ctx))


def u_pi_checks(k: int, ctx: SpectralContext, images: SpectralImages | None = None):
    """``u_k(0) = k! (k+1)_q pi_{k+1}``; at k=0 also f' = (q-q^-1) u f, and for
    k >= 1 the recursion ``f_k = (q-q^-1) sum C(k-1, r) u_r(0) f_{k-r-1}``."""
    images = images or images_for(ctx)
    checks = [(f"u_{k}(0)", images.u_derivative_at_zero(k),
               factorial(k) * q_number(k + 1) * images.pi(k + 1))]
    if k == 0:
        f = f_of_y(ctx)
        checks.append(("f'(y) = (q-q^-1) u(y) f(y)", diff_univar(f, Y), QQI * u_of_y(ctx) * f))
    else:
        def fk(j):
            return images.f_taylor(j) * factorial(j)

        rhs = sum((comb(k - 1, r) * images.u_derivative_at_zero(r) * fk(k - r - 1) for r in range(k)),
                  start=RationalFunction(0))
        checks.append((f"f_{k} recursion", fk(k), QQI * rhs))
    return checks


def u_derivatives_check(ctx: SpectralContext, kmax: int) -> VerificationReport:
    ctx._need_rank()
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    cells = []
    for k in range(kmax + 1):
        cells.extend(_report_from_checks("u-pi", ctx, k, u_pi_checks(k, ctx)[:1]).cells)
    return VerificationReport("u-pi", "symbolic", None, cells)


def ch_coeff_images(ctx: SpectralContext, check: bool = True) -> list[tuple[Partition, RationalFunction]]:
    """Product-formula images of the Cayley-Hamilton coefficient Schur functions.

    Returns ``[m|n]^k -> s_[m|n] e_k(q^-1 mu)`` for ``0 <= k <= m`` followed by
    ``[m|n]_r -> s_[m|n] e_r(-q nu)`` for ``0 <= r <= n``; with ``check`` each
    value is compared with ``schur_image`` of the partition.
    """
    m, n = ctx.m, ctx.n
    smn = smn_product(ctx)
    out = []
    for k in range(m + 1):
        lam = ch_partitions(m, n, k, 0)[0]
        out.append((lam, RationalFunction(smn * elem_sym(k, ctx.even()))))
    for r in range(n + 1):
        lam = ch_partitions(m, n, 0, r)[1]
        out.append((lam, RationalFunction(smn * elem_sym(r, -ctx.odd()))))
    if check:
        for lam, val in out:
            if not ratfun_eq(val, schur_image(lam, ctx)):
                raise IdentityMismatch(f"schur image of {lam} differs from the product formula")
    return out


def _report_from_checks(identity, ctx, k, checks) -> VerificationReport:
    from .verify import render_witness

    failures = []
    for label, lhs, rhs in checks:
        if not (lhs == rhs):
            failures.append(render_witness(label, lhs, rhs))
    cell = CellResult(ctx.m, ctx.n, k, "fail" if failures else "pass", 0.0,
                      "; ".join(failures) or None)
    return VerificationReport(identity, "symbolic", None, [cell])
