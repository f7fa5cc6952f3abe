"""Identity verification engine.

Every named identity is a function ``cell(env, k)`` returning a list of
``(label, lhs, rhs)`` comparisons.  In symbolic mode ``env`` hands out
exact polynomials and rational functions and sides are compared by
cross-multiplication.  In evaluated mode ``env`` hands out the same
ingredients evaluated at a seeded random rational point, so the identity
is combined over the rationals instead of over polynomials.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable

from .errors import (
    DenominatorVanishes,
    OrderExceeded,
    ResampleCapExceeded,
    ZeroBaseNegativeExponent,
)
from .exact import (
    Q,
    Y,
    Z,
    MultiPoly,
    RationalFunction,
    TruncatedSeries,
    VarId,
    as_ratfun,
    mu_var,
    nu_var,
    q_pow,
    series_log_derivative,
    var,
)
from .partitions import (
    Partition,
    ch_partitions,
    contains,
    lambda_mn,
    lr_expand,
    partitions_of,
    schur_product_brute,
)
from .report import CellResult, VerificationReport
from .spectral import (
    QQI,
    SpectralContext,
    SpectralImages,
    images_for,
    partial_fraction_checks,
    smn_product,
    u_pi_checks,
    zf_expansion_checks,
)
from .symfunc import (
    Alphabet,
    complete_sym,
    default_order,
    elem_sym,
    jacobi_trudi,
    power_sum_classical,
    q_number,
    super_series,
)

IDENTITIES = (
    "newton-anti",
    "newton-simm",
    "wronski",
    "gf-newton2",
    "lemma1-a",
    "lemma1-s",
    "lemma2",
    "gf-ppi",
    "partial-frac",
    "u-pi",
    "p0",
    "gs-reduction",
    "classical-limit",
    "ch-images",
    "schur-vanishing",
    "lr-homomorphism",
)

DEFAULT_GRID = ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2))
DEFAULT_KMAX = 8
DEFAULT_HEIGHT = 99
DEFAULT_TRIALS = 3
RESAMPLE_CAP = 32
WITNESS_TERMS = 40
LR_MAX_WEIGHT = 6
SHOW_SIDES = frozenset({"p0"})


# ---------------------------------------------------------------------------
# environments


class SymbolicEnv:
    mode = "symbolic"

    def __init__(self, images: SpectralImages, order: int):
        self.images = images
        self.ctx = images.ctx
        self.order = order
        self.q = var(Q)
        self._memo: dict = {}

    def lift(self, x):
        return x

    def memo(self, key, fn):
        hit = self._memo.get(key)
        if hit is None:
            hit = self._memo[key] = fn()
        return hit

    def a(self, k):
        return self.images.a(k)

    def s(self, k):
        return self.images.s(k)

    def p(self, k):
        return self.images.p(k)

    def pi(self, k):
        return self.images.pi(k)

    def qn(self, k):
        return q_number(k)

    def schur(self, lam):
        return self.images.schur(lam)

    def equal(self, lhs, rhs) -> bool:
        return lhs == rhs


class EvaluatedEnv(SymbolicEnv):
    """Ingredients evaluated at ``point``; identity arithmetic runs over Q."""

    mode = "evaluated"

    def __init__(self, images: SpectralImages, order: int, point: dict):
        super().__init__(images, order)
        self.point = point
        self.q = Fraction(point[Q])

    def lift(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        return x.evaluate(self.point)

    def a(self, k):
        return self.memo(("a", k), lambda: self.lift(self.images.a(k)))

    def s(self, k):
        return self.memo(("s", k), lambda: self.lift(self.images.s(k)))

    def p(self, k):
        return self.memo(("p", k), lambda: self.lift(self.images.p(k)))

    def pi(self, k):
        return self.memo(("pi", k), lambda: self.lift(self.images.pi(k)))

    def qn(self, k):
        return self.memo(("qn", k), lambda: self.lift(q_number(k)))

    def schur(self, lam):
        lam = Partition(lam)
        return self.memo(("schur", lam), lambda: Fraction(jacobi_trudi(lam, self.s)))

    def equal(self, lhs, rhs) -> bool:
        return self.lift(lhs) == self.lift(rhs)


def _sum(items: Iterable, start=0):
    return sum(items, start=start)


def _series(env: SymbolicEnv, coeffs) -> TruncatedSeries:
    return TruncatedSeries(list(coeffs))


def _lifted_series(env: SymbolicEnv, ser: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries([env.lift(c) for c in ser.coeffs], formal=ser.formal)


def _super(env: SymbolicEnv, which: str, order: int) -> TruncatedSeries:
    images = env.images
    ser = images._memo(("super", which, order),
                       lambda: super_series(which, env.ctx.even(), env.ctx.odd(), order))
    return env.memo(("super", which, order), lambda: _lifted_series(env, ser))


def _A(env):
    return env.memo("A", lambda: _series(env, (env.a(k) for k in range(env.order + 1))))


def _S(env):
    return env.memo("S", lambda: _series(env, (env.s(k) for k in range(env.order + 1))))


def _P(env):
    qqi = env.lift(QQI)
    return env.memo("P", lambda: _series(env, [1] + [qqi * env.p(k) for k in range(1, env.order + 1)]))


# ---------------------------------------------------------------------------
# identity cells


def _newton_anti(env, k):
    q = env.q
    lhs = (-1) ** k * env.qn(k) * env.a(k)
    lhs = lhs + _sum((-q) ** r * env.a(r) * env.p(k - r) for r in range(k))
    return [(f"q-anti k={k}", lhs, 0)]


def _newton_simm(env, k):
    q = env.q
    lhs = env.qn(k) * env.s(k) - _sum(q ** -r * env.s(r) * env.p(k - r) for r in range(k))
    return [(f"q-simm k={k}", lhs, 0)]


def _wronski(env, k):
    lhs = _sum((-1) ** r * env.a(r) * env.s(k - r) for r in range(k + 1))
    return [(f"wronski k={k}", lhs, 0)]


def _gf_newton2(env, k):
    q = env.q
    A, S, P = _A(env), _S(env), _P(env)

    def lhs1():
        return env.memo("n2-1", lambda: (P.compose_scale(-1) * A.compose_scale(q), A.compose_scale(q ** -1)))

    def lhs2():
        return env.memo("n2-2", lambda: (P * S.compose_scale(q ** -1), S.compose_scale(q)))

    def lhs3():
        return env.memo("n2-3", lambda: A * S.compose_scale(-1))

    (l1, r1), (l2, r2), l3 = lhs1(), lhs2(), lhs3()
    return [
        (f"P(-t)A(qt) = A(t/q) at t^{k}", l1.coeff(k), r1.coeff(k)),
        (f"P(t)S(t/q) = S(qt) at t^{k}", l2.coeff(k), r2.coeff(k)),
        (f"A(t)S(-t) = 1 at t^{k}", l3.coeff(k), 1 if k == 0 else 0),
    ]


def _lemma1_a(env, k):
    lhs = (-1) ** k * k * env.a(k) + _sum((-1) ** r * env.a(r) * env.pi(k - r) for r in range(k))
    A = _super(env, "A", env.order)
    Pi = _super(env, "Pi", env.order - 1)
    logder = env.memo("logA", lambda: -series_log_derivative(A.compose_scale(-1)))
    return [
        (f"a-pi k={k}", lhs, 0),
        (f"a_{k} = [t^{k}] E(q^-1 mu|t)H(-q nu|t)", env.a(k), A.coeff(k)),
        (f"Pi = -d/dt log A(-t) at t^{k - 1}", Pi.coeff(k - 1), logder.coeff(k - 1)),
    ]


def _lemma1_s(env, k):
    lhs = k * env.s(k) - _sum(env.s(r) * env.pi(k - r) for r in range(k))
    S = _super(env, "S", env.order)
    Pi = _super(env, "Pi", env.order - 1)
    logder = env.memo("logS", lambda: series_log_derivative(S))
    return [
        (f"s-pi k={k}", lhs, 0),
        (f"s_{k} = [t^{k}] H(q^-1 mu|t)E(-q nu|t)", env.s(k), S.coeff(k)),
        (f"Pi = d/dt log S(t) at t^{k - 1}", Pi.coeff(k - 1), logder.coeff(k - 1)),
    ]


def _lemma2(env, k):
    qqi = env.lift(QQI)
    rhs = env.qn(k) * env.pi(k) + qqi * _sum(env.qn(r) * env.pi(r) * env.p(k - r) for r in range(1, k))
    return [(f"p-pi k={k}", k * env.p(k), rhs)]


def _gf_ppi(env, k):
    q, K = env.q, env.order

    def build():
        Pi = _super(env, "Pi", K - 1)
        G = Pi.compose_scale(q).scale(q) - Pi.compose_scale(q ** -1).scale(q ** -1)
        P = _P(env)
        return P.truncate(K - 1) * G, P.derivative()

    lhs, rhs = env.memo("ppi", build)
    return [(f"P(t)(q Pi(qt) - Pi(t/q)/q) = P'(t) at t^{k - 1}", lhs.coeff(k - 1), rhs.coeff(k - 1))]


def _partial_frac(env, k):
    if k == 0:
        return partial_fraction_checks(env.ctx, env.images)
    return zf_expansion_checks(k, env.ctx, env.images)


def _u_pi(env, k):
    return u_pi_checks(k, env.ctx, env.images)


def _p0(env, k):
    ctx = env.ctx
    m, n = ctx.m, ctx.n
    w = env.images.weights
    total = _sum(env.lift(d) for d in list(w.d) + list(w.d_tilde))
    closed = env.lift(q_pow(n - m) * q_number(m - n))
    return [("p_0 = q^(n-m) (m-n)_q", env.p(0), closed), ("sum of weights", total, closed)]


def gl_m_weights(ctx: SpectralContext) -> tuple[list, list]:
    """Weights from the pure even (resp. pure odd) formula, times the mixed
    factor that the other parity contributes."""
    q = var(Q)
    mus, nus = ctx.mus, ctx.nus
    d = []
    for i, mi in enumerate(mus):
        w = RationalFunction(q ** -1)
        for j, mj in enumerate(mus):
            if j != i:
                w = w * RationalFunction(mi - q ** -2 * mj) / (mi - mj)
        for nj in nus:
            w = w * RationalFunction(mi - q ** 2 * nj) / (mi - nj)
        d.append(w)
    dt = []
    for j, nj in enumerate(nus):
        w = RationalFunction(-q)
        for p, np_ in enumerate(nus):
            if p != j:
                w = w * RationalFunction(nj - q ** 2 * np_) / (nj - np_)
        for mi in mus:
            w = w * RationalFunction(nj - q ** -2 * mi) / (nj - mi)
        dt.append(w)
    return d, dt


def _gs_reduction(env, k):
    ctx = env.ctx
    w = env.images.weights
    d, dt = gl_m_weights(ctx)
    checks = [(f"d_{i + 1}", w.d[i], d[i]) for i in range(ctx.m)]
    if ctx.m == 0:
        checks += [(f"d~_{j + 1}", w.d_tilde[j], dt[j]) for j in range(ctx.n)]
    return [(label, env.lift(a), env.lift(b)) for label, a, b in checks]


def _classical_limit(env, k):
    ctx, images = env.ctx, env.images
    mu_plain, nu_plain = Alphabet.mu(ctx.m), Alphabet.nu(ctx.n)

    def e_cl(r):
        return env.memo(("ecl", r), lambda: env.lift(_sum(
            (elem_sym(s, mu_plain) * complete_sym(r - s, -nu_plain) for s in range(r + 1)), MultiPoly.const(0))))

    def p_cl(r):
        return env.memo(("pcl", r), lambda: env.lift(
            power_sum_classical(r, mu_plain) - power_sum_classical(r, nu_plain)))

    def a1(r):
        return env.memo(("a1", r), lambda: env.lift(images.a(r).subs(Q, 1)))

    def p1(r):
        return env.memo(("p1", r), lambda: env.lift(images.p(r).subs(Q, 1)))

    classical = k * e_cl(k) + _sum((-1) ** r * p_cl(r) * e_cl(k - r) for r in range(1, k + 1))
    anti_q1 = (-1) ** k * k * a1(k) + _sum((-1) ** r * a1(r) * p1(k - r) for r in range(k))
    return [
        (f"p_{k}|q=1 = supertrace power sum", p1(k), p_cl(k)),
        (f"a_{k}|q=1 = classical super e_{k}", a1(k), e_cl(k)),
        (f"classical Newton k={k}", classical, 0),
        (f"q-anti|q=1 = (-1)^k classical Newton k={k}", anti_q1, (-1) ** k * classical),
    ]


def _ch_images(env, k):
    ctx = env.ctx
    m, n = ctx.m, ctx.n
    smn = smn_product(ctx)
    checks = []
    if k == 0:
        checks.append(("s_[m|n] = prod (q^-1 mu_i - q nu_j)", env.schur(Partition([n] * m)), env.lift(smn)))
    if k <= m:
        lam = ch_partitions(m, n, k, 0)[0]
        checks.append((f"s_{lam} = s_[m|n] e_{k}(q^-1 mu)", env.schur(lam),
                       env.lift(smn * elem_sym(k, ctx.even()))))
    if k <= n:
        lam = ch_partitions(m, n, 0, k)[1]
        checks.append((f"s_{lam} = s_[m|n] e_{k}(-q nu)", env.schur(lam),
                       env.lift(smn * elem_sym(k, -ctx.odd()))))
    return checks


def _schur_vanishing(env, k):
    rect = lambda_mn(env.ctx.m, env.ctx.n)
    return [(f"s_{nu} = 0", env.schur(nu), 0)
            for nu in partitions_of(k) if contains(rect, nu)]


def _lr_homomorphism(env, k):
    checks = []
    for a in range(k + 1):
        if a < k - a:
            continue
        for lam in partitions_of(a):
            for mu in partitions_of(k - a):
                if a == k - a and tuple(lam) < tuple(mu):
                    continue
                coeffs = lr_expand(lam, mu)
                checks.append((f"LR rule vs Schur product oracle {lam}*{mu}",
                               len(coeffs), len(schur_product_brute(lam, mu))))
                if coeffs != schur_product_brute(lam, mu):
                    checks.append((f"LR coefficients {lam}*{mu}", 0, 1))
                rhs = _sum(c * env.schur(nu) for nu, c in coeffs.items())
                checks.append((f"s_{lam} s_{mu} = sum c s_nu", env.schur(lam) * env.schur(mu), rhs))
    return checks


CELLS: dict[str, Callable] = {
    "newton-anti": _newton_anti,
    "newton-simm": _newton_simm,
    "wronski": _wronski,
    "gf-newton2": _gf_newton2,
    "lemma1-a": _lemma1_a,
    "lemma1-s": _lemma1_s,
    "lemma2": _lemma2,
    "gf-ppi": _gf_ppi,
    "partial-frac": _partial_frac,
    "u-pi": _u_pi,
    "p0": _p0,
    "gs-reduction": _gs_reduction,
    "classical-limit": _classical_limit,
    "ch-images": _ch_images,
    "schur-vanishing": _schur_vanishing,
    "lr-homomorphism": _lr_homomorphism,
}


def cell_indices(identity: str, m: int, n: int, kmax: int) -> list[int]:
    """The k values of the grid cells an identity runs on."""
    if identity in ("partial-frac", "u-pi"):
        return list(range(kmax + 1))
    if identity in ("p0", "gs-reduction"):
        return [0]
    if identity == "ch-images":
        return list(range(max(m, n) + 1))
    if identity == "schur-vanishing":
        w = (m + 1) * (n + 1)
        return [w, w + 1, w + 2]
    if identity == "lr-homomorphism":
        return list(range(min(kmax, LR_MAX_WEIGHT) + 1))
    return list(range(1, kmax + 1))


# ---------------------------------------------------------------------------
# witnesses and random points


def _render_truncated(p: MultiPoly, limit: int = WITNESS_TERMS) -> str:
    terms = p.sorted_terms()
    if len(terms) <= limit:
        return str(p)
    head = MultiPoly(dict(terms[:limit]), p.vars)
    return f"{head} + ... ({len(terms) - limit} more terms)"


def render_witness(label: str, lhs, rhs) -> str:
    """Label plus the cleared numerator of ``lhs - rhs``, at most 40 terms."""
    if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
        return f"{label}: lhs={lhs} rhs={rhs}"
    diff = as_ratfun(lhs) - as_ratfun(rhs)
    return f"{label}: {_render_truncated(diff.num)}"


def _random_rational(rng: random.Random, height: int) -> Fraction:
    num = rng.randint(1, height) * rng.choice((-1, 1))
    return Fraction(num, rng.randint(1, height))


def _point_vars(ctx: SpectralContext) -> list[VarId]:
    return [Q] + [mu_var(i) for i in range(ctx.m)] + [nu_var(j) for j in range(ctx.n)] + [Z, Y]


def _draw_point(rng: random.Random, vs: list[VarId], height: int) -> dict:
    return {v: _random_rational(rng, height) for v in vs}


def _vars_of(x) -> set:
    if isinstance(x, MultiPoly):
        return set(x.vars)
    if isinstance(x, RationalFunction):
        out = set(x.num.vars)
        for b in x.factors:
            out |= set(b.vars)
        return out
    return set()


def random_eval_check(lhs, rhs, seed, trials: int, *, height: int = DEFAULT_HEIGHT,
                      cap: int = RESAMPLE_CAP) -> bool:
    """Compare two rational functions at ``trials`` seeded random rational
    points; points where a denominator vanishes are redrawn up to ``cap``
    times in a row."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(f"random-eval:{seed}")
    vs = sorted(_vars_of(lhs) | _vars_of(rhs))
    lhs, rhs = as_ratfun(lhs), as_ratfun(rhs)
    for _ in range(trials):
        for _attempt in range(cap):
            point = _draw_point(rng, vs, height)
            try:
                a, b = lhs.evaluate(point), rhs.evaluate(point)
            except (DenominatorVanishes, ZeroBaseNegativeExponent):
                continue
            break
        else:
            raise ResampleCapExceeded(f"no valid point after {cap} draws")
        if a != b:
            return False
    return True


# ---------------------------------------------------------------------------
# driver


def _run_cell(identity: str, images: SpectralImages, k: int, kmax: int, mode: str, seed,
              trials: int, height: int) -> CellResult:
    ctx = images.ctx
    fn = CELLS[identity]
    order = max(kmax, 1)
    t0 = time.perf_counter()
    failures = []
    detail = None
    if mode == "symbolic":
        env = SymbolicEnv(images, order)
        checks = fn(env, k)
        for label, lhs, rhs in checks:
            if not env.equal(lhs, rhs):
                failures.append(render_witness(label, lhs, rhs))
        if identity in SHOW_SIDES:
            detail = "; ".join(f"{label}: {_show(lhs)} vs {_show(rhs)}" for label, lhs, rhs in checks)
    else:
        rng = random.Random(f"{seed}:{identity}:{ctx.m}:{ctx.n}:{k}")
        vs = _point_vars(ctx)
        for _ in range(trials):
            for _attempt in range(RESAMPLE_CAP):
                point = _draw_point(rng, vs, height)
                env = EvaluatedEnv(images, order, point)
                try:
                    checks = [(label, env.lift(lhs), env.lift(rhs)) for label, lhs, rhs in fn(env, k)]
                except (DenominatorVanishes, ZeroBaseNegativeExponent, ZeroDivisionError):
                    continue
                break
            else:
                raise ResampleCapExceeded(f"{identity} m={ctx.m} n={ctx.n} k={k}: no valid point")
            pt = ", ".join(f"{v.name}={x}" for v, x in point.items())
            failures += [f"{render_witness(label, a, b)} at {pt}" for label, a, b in checks if a != b]
            if failures:
                break
    ms = (time.perf_counter() - t0) * 1000.0
    return CellResult(ctx.m, ctx.n, k, "fail" if failures else "pass", ms, "; ".join(failures) or None,
                      detail)


def _show(x) -> str:
    if isinstance(x, RationalFunction):
        try:
            return str(x.to_poly())
        except ArithmeticError:
            return str(x)
    return str(x)


def verify_identity(identity: str, m: int, n: int, kmax: int = DEFAULT_KMAX, mode: str = "symbolic",
                    seed: int | None = None, *, order: int | None = None, images: SpectralImages | None = None,
                    trials: int = DEFAULT_TRIALS, height: int = DEFAULT_HEIGHT) -> VerificationReport:
    """Run one identity over its grid cells for bi-rank ``(m|n)``."""
    if identity not in CELLS:
        raise ValueError(f"unknown identity {identity!r}")
    if mode not in ("symbolic", "evaluated"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "evaluated" and seed is None:
        raise ValueError("evaluated mode requires a seed")
    if m < 0 or n < 0 or m + n < 1:
        raise ValueError("need m, n >= 0 and m + n >= 1")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    K = order if order is not None else (images.ctx.K if images is not None else default_order())
    if kmax > K:
        raise OrderExceeded(f"kmax={kmax} exceeds series order {K}")
    if images is None:
        images = images_for(SpectralContext(m, n, K))
    elif (images.ctx.m, images.ctx.n) != (m, n):
        raise ValueError("images were built for a different (m|n)")
    cells = [_run_cell(identity, images, k, kmax, mode, seed, trials, height)
             for k in cell_indices(identity, m, n, kmax)]
    return VerificationReport(identity, mode, seed if mode == "evaluated" else None, cells)


def _verify_star(args):
    identity, m, n, kmax, mode, seed, order = args
    return verify_identity(identity, m, n, kmax, mode, seed, order=order)


def verify_all(m: int, n: int, kmax: int = DEFAULT_KMAX, mode: str = "symbolic", seed: int | None = None,
               *, order: int | None = None, identities: Iterable[str] = IDENTITIES,
               jobs: int = 1) -> list[VerificationReport]:
    """Every identity for one ``(m|n)``; results are in ``identities`` order
    regardless of ``jobs``."""
    work = [(i, m, n, kmax, mode, seed, order) for i in identities]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_verify_star, work))
    return [_verify_star(w) for w in work]


def verify_grid(grid: Iterable[tuple[int, int]] = DEFAULT_GRID, kmax: int = DEFAULT_KMAX,
                mode: str = "symbolic", seed: int | None = None, *, order: int | None = None,
                identities: Iterable[str] = IDENTITIES, jobs: int = 1) -> list[VerificationReport]:
    identities = tuple(identities)
    work = [(i, m, n, kmax, mode, seed, order) for (m, n) in grid for i in identities]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_verify_star, work))
    return [_verify_star(w) for w in work]


def combined_summary(reports: list[VerificationReport]) -> dict:
    return {"pass": sum(r.n_pass for r in reports), "fail": sum(r.n_fail for r in reports)}


__all__ = [
    "IDENTITIES",
    "DEFAULT_GRID",
    "verify_identity",
    "verify_all",
    "verify_grid",
    "random_eval_check",
    "render_witness",
    "cell_indices",
    "gl_m_weights",
]
