"""Euler-product side of the absolute tensor square of two Dirichlet L-functions.

The ten terms E_1..E_10 collect, prime power by prime power, the residues of
e^{i(s-1)t} t^{w-1} l_{chi1-bar}(t) l_{chi2-bar}(t) at the poles t = i m log p:

    sum_k E_k(w, s) = e^{-pi i w/2} 2 pi i sum_{p, m} Res_{t = i m log p}.

Every E_k (k >= 2) is a sum over ordered pairs (a, b) in {(1, 2), (2, 1)} of
an outer prime-power sum weighted by chi_a(p^m) log p, times a quantity built
from chi_b at c = m log p.  `pair_slices` returns those per-prime-power pieces,
which is what the residue oracle compares against a contour integral.

At w = 0 the sum of the E_k is the logarithm of the tensor square (Re s > 2).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import cramer
from .cramer import CramerEvalParams, ParameterError, alternating_sum, k_integral, semi_ellipse
from .lfunctions import ZeroList, l_log_derivative, l_value
from .primesums import prime_power_table, tail_estimate
from .special import DEFAULT_QUAD, EULER_GAMMA, QuadratureSpec, fsum_complex, gamma, gauss_legendre, quad_half_line

TWO_PI = 2 * math.pi
PAIRS = ((0, 1), (1, 0))


@dataclass(frozen=True)
class ContourSpec:
    """The semi-ellipse S from -alpha to 1 through the upper half plane, height epsilon."""
    alpha: float
    epsilon: float
    nodes: int = 256

    @property
    def center(self):
        return (1 - self.alpha) / 2

    @property
    def semi_major(self):
        return (1 + self.alpha) / 2

    @property
    def semi_minor(self):
        return self.epsilon

    def points(self):
        """(u, du): nodes run from u = 1 to u = -alpha, du integrates along S from -alpha to 1."""
        return semi_ellipse(self.alpha, self.epsilon, self.nodes)

    def endpoints(self):
        return self.center - self.semi_major, self.center + self.semi_major


@dataclass(frozen=True)
class TensorEvalParams:
    alpha: float = 0.5
    epsilons: tuple = (1.0, 1.0)
    thetas: tuple = (None, None)
    P: int = 100_000
    T: float = 150.0
    quad: QuadratureSpec = DEFAULT_QUAD
    contour_nodes: int = 256
    # "exact": inner prime sums completed through L-function identities;
    # "truncated": inner sums cut at P, matching cramer.l_explicit
    inner: str = "exact"
    # w = 0 only: E_6 inner sum as -L'/L ("logderiv") or a prime sum ("primes")
    e6_route: str = "logderiv"
    # (mu0, mu_tau0, tau0) for each character
    mu: tuple = ((0, 0, 0.25), (0, 0, 0.25))

    @property
    def epsilon(self):
        return min(self.epsilons)

    @property
    def theta(self):
        th = [t if t is not None else 0.5 * math.atan(e) for t, e in zip(self.thetas, self.epsilons)]
        return min(th)

    @property
    def tau0(self):
        return max(m[2] for m in self.mu)

    def contour(self):
        return ContourSpec(self.alpha, self.epsilon, self.contour_nodes)

    def cramer_params(self, j=None):
        """CramerEvalParams sharing alpha and P; epsilon is eps_j, or eps^(2) when j is None."""
        eps = self.epsilon if j is None else self.epsilons[j]
        return CramerEvalParams(alpha=self.alpha, epsilon=eps, T=self.T, P=self.P,
                                quad=self.quad, contour_nodes=self.contour_nodes)

    def validate(self, *first_ordinates):
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha = {self.alpha} must lie in (0, 1)")
        if min(self.epsilons) <= 0:
            raise ParameterError("epsilon must be positive")
        if first_ordinates and not self.epsilon < min(first_ordinates):
            raise ParameterError(f"epsilon = {self.epsilon} must be below the first zero ordinates")
        if not math.tan(self.theta) < self.epsilon:
            raise ParameterError("need tan(theta) < epsilon")
        if self.inner not in ("exact", "truncated"):
            raise ParameterError(f"unknown inner mode {self.inner!r}")
        return self


def tensor_params(zeros1: ZeroList, zeros2: ZeroList, zeros1_bar=None, zeros2_bar=None, **kw):
    """Defaults: eps_j = min(1, tau_j/2) over chi_j and its conjugate, mu data from the zero lists."""
    firsts = []
    for z, zb in ((zeros1, zeros1_bar), (zeros2, zeros2_bar)):
        tau = min(z.first, zb.first if zb is not None else z.first)
        firsts.append(min(1.0, tau / 2))
    kw.setdefault("epsilons", tuple(firsts))
    kw.setdefault("mu", tuple((z.mu0, z.mu_tau0, z.tau0) for z in (zeros1, zeros2)))
    return TensorEvalParams(**kw)


# ---------------------------------------------------------------- per-character inner data

@dataclass
class _Inner:
    """Quantities attached to one character at every c = m log p of the table."""
    chi: object
    i2: np.ndarray = None      # sum_{q^n != p^m} chi(q^n) q^{-n} / (n (c - n log q))
    i3: np.ndarray = None      # sum chi-bar(q^n) q^{-n(1+alpha)} / (n (c + n log q))
    i3_alt: np.ndarray = None  # sum chi(q^n) q^{-n(1+alpha)} log q / (n (c + n log q))
    alt: np.ndarray = None     # sum_n (chi(-1) e^{-i alpha pi})^n / (n (n pi - i c))
    j6: np.ndarray = None      # int_S p^{m u} log L(u, chi) du
    const: complex = 0j        # continued log(chi(-1) Gamma(1+a) N^a G / (2 pi)^{1+a})
    s_nodes: np.ndarray = None
    s_weights: np.ndarray = None
    s_logl: np.ndarray = None
    tail: float = 0.0


@dataclass
class _Table:
    p: np.ndarray
    m: np.ndarray
    value: np.ndarray
    log_p: np.ndarray
    c: np.ndarray
    k: np.ndarray = field(default=None, repr=False)   # K(c) for the current alpha


_CACHE: dict = {}


def _real_line_log_l(chi, z):
    """log L(z, chi) at real z > 1, continuous from z = +inf where it vanishes."""
    z = np.asarray(z, dtype=float)
    order = np.argsort(-z)
    zs = z[order]
    lv = np.empty(len(zs), dtype=complex)
    far = zs > 40.0
    if np.any(far):
        # the Dirichlet series converges to double precision within 60 terms
        n = np.arange(1, 61)
        lv[far] = np.exp(-np.outer(zs[far], np.log(n))) @ chi.values[n % chi.modulus]
    if np.any(~far):
        lv[~far] = l_value(chi, zs[~far].astype(complex), method="hurwitz")
    vals = np.log(lv)
    ang = np.unwrap(np.concatenate([[0.0], vals.imag]))[1:]
    out = np.empty(len(z), dtype=complex)
    out[order] = vals.real + 1j * ang
    return out


def _pair_matrix_product(c, x, v, sign, exclude_diagonal, rows=512):
    """sum_j v[j] / (c[i] + sign x[j]) for every i, optionally skipping j = i."""
    out = np.zeros((len(c),) + v.shape[1:], dtype=complex)
    for lo in range(0, len(c), rows):
        hi = min(lo + rows, len(c))
        with np.errstate(divide="ignore"):
            d = 1.0 / (c[lo:hi, None] + sign * x[None, :])
        if exclude_diagonal:
            d[np.arange(hi - lo), np.arange(lo, hi)] = 0.0
        out[lo:hi] = d @ v
    return out


def _i2_tail(chi, table, P, nodes=96):
    """Completion of the inner sum of E_2 beyond P:
    -int_0^inf e^{c y} (log L(1+y) - sum_{q^n <= P} chi(q^n) q^{-n(1+y)}/n) dy.

    The bracket decays like P^{-y}; outer terms with c > log P - 2 carry a
    weight below P^{-(Re s - 1)} and are left uncorrected.
    """
    ycut = 16 * math.log(10) / math.log(P)
    y, wy = gauss_legendre(nodes, 0.0, ycut)
    chi_q = table.character_values(chi)
    logl = _real_line_log_l(chi, 1.0 + y)
    xq = table.m * table.log_p
    partial = (np.exp(-np.outer(1.0 + y, xq)) @ (chi_q / table.m))
    bracket = logl - partial
    c = xq
    ok = c < math.log(P) - 2.0
    out = np.zeros(len(c), dtype=complex)
    out[ok] = -(np.exp(np.outer(c[ok], y)) @ (wy * bracket))
    return out


def _i3_exact(chi_bar, c, alpha, quad):
    """int_0^inf e^{-c y} log L(1+alpha+y, chi-bar) dy, batched over c."""
    def f(y):
        logl = _real_line_log_l(chi_bar, 1.0 + alpha + y)
        return np.exp(-np.outer(y, c)) * logl[:, None]

    val, _ = quad_half_line(f, 0.0, QuadratureSpec(1e-15, 1e-13, quad.max_refinements, 0.5))
    return np.asarray(val)


def _inner_data(chi, params: TensorEvalParams, table: _Table, raw):
    key = ("inner", chi.label, params.alpha, params.epsilon, params.P, params.contour_nodes, params.inner)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    a = params.alpha
    P = params.P
    c = table.c
    inn = _Inner(chi)
    chi_q = raw.character_values(chi)
    v2 = chi_q * np.exp(-c) / table.m
    chibar_q = np.conj(chi_q)
    v3 = chibar_q * np.exp(-(1 + a) * c) / table.m
    v3p = chi_q * np.exp(-(1 + a) * c) * table.log_p / table.m
    prod = _pair_matrix_product(c, c, np.stack([v2], axis=1), -1.0, True)
    inn.i2 = prod[:, 0]
    prod = _pair_matrix_product(c, c, np.stack([v3, v3p], axis=1), 1.0, False)
    inn.i3, inn.i3_alt = prod[:, 0], prod[:, 1]
    if params.inner == "exact":
        inn.i2 = inn.i2 + _i2_tail(chi, raw, P)
        inn.i3 = _i3_exact(chi.conjugate(), c, a, params.quad)
        inn.tail = 1e-14
    else:
        # envelope of the truncated inner sums, |chi| <= 1
        inn.tail = 1.0 / math.log(P)
    x = chi.parity * cmath.exp(-1j * a * math.pi)
    inn.alt = alternating_sum(x, -1j * c)
    ctx = cramer.context(chi, params.cramer_params())
    inn.const = ctx.const
    inn.s_nodes, inn.s_weights, inn.s_logl = ctx.s_nodes, ctx.s_weights, ctx.s_logl
    inn.j6 = np.exp(np.outer(c, ctx.s_nodes)) @ (ctx.s_weights * ctx.s_logl)
    _CACHE[key] = inn
    return inn


def _table(params: TensorEvalParams):
    key = ("table", params.P, params.alpha)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    raw = prime_power_table(int(params.P))
    t = _Table(raw.p, raw.m.astype(float), raw.value, raw.log_p, raw.log_value)
    t.k, _ = k_integral(-1j * t.c, params.alpha, params.quad)
    _CACHE[key] = (t, raw)
    return t, raw


# ---------------------------------------------------------------- the ten terms

def _powers(c, w):
    lc = np.log(c)
    return np.exp(w * lc), np.exp((w - 1) * lc), np.exp((w - 2) * lc)


def e1_slices(w, s, chi1, chi2, table, raw):
    """(i/2pi) chi1 chi2(p^m) p^{-ms} (log p)^2 [(s-2) c^{w-1} - (w+1) c^{w-2}]."""
    cw, cw1, cw2 = _powers(table.c, w)
    x = raw.character_values(chi1) * raw.character_values(chi2)
    return (1j / TWO_PI) * x * np.exp(-s * table.c) * table.log_p**2 * ((s - 2) * cw1 - (w + 1) * cw2)


def pair_slices(k, w, s, chis, params, table, raw, inners, variant="derived"):
    """Per-prime-power pieces of E_k (k >= 2), summed over the ordered pairs (a, b)."""
    c = table.c
    lp = table.log_p
    a_ = params.alpha
    cw, cw1, cw2 = _powers(c, w)
    out = np.zeros(len(c), dtype=complex)
    for ia, ib in PAIRS:
        chi_a, chi_b = chis[ia], chis[ib]
        inn = inners[ib]
        base = raw.character_values(chi_a) * lp
        eps_b = chi_b.parity
        if k == 2:
            term = -(1j / TWO_PI) * base * np.exp(-(s - 1) * c) * cw * inn.i2
        elif k == 3:
            if variant == "alt_w0":
                term = (1 / TWO_PI) * raw.character_values(chi_a) * np.exp(-(s + a_) * c) * inn.i3_alt
            else:
                pre = 1 / TWO_PI if variant == "alt" else 1j / TWO_PI
                term = pre * base * np.exp(-(s + a_) * c) * cw * inn.i3
        elif k == 4:
            if variant == "alt":
                alt = -alternating_sum(cmath.exp(-1j * a_ * math.pi), -1j * c)
                term = -(1 / TWO_PI) * eps_b * base * np.exp(-(s + a_) * c) * cw2 * alt
            else:
                term = -(1 / TWO_PI) * base * np.exp(-(s + a_) * c) * cw * inn.alt
        elif k == 5:
            shift = (1 - eps_b) / 2 if variant == "alt" else (1 + eps_b) / 2
            # (i/2) / sin(i c) = 1 / (2 sinh c)
            term = 0.5 * base * np.exp(-(s - shift) * c) * cw1 / np.sinh(c)
        elif k == 6:
            pre = -1j / TWO_PI if variant == "alt" else 1j / TWO_PI
            term = pre * base * cw * np.exp(-s * c) * inn.j6
        elif k == 7:
            N_b = chi_b.modulus
            weight = base * np.exp(-(s + a_) * c)
            if variant == "alt":
                const = cramer.principal_log_constant(chi_b, a_) + EULER_GAMMA + cmath.log(TWO_PI / N_b + 0.5j * math.pi)
                term = weight * (const / TWO_PI * cw2 - (1 + a_) / 4 * cw1 + (1j / TWO_PI) * cw1 * table.k)
            else:
                inv = table.k - EULER_GAMMA - math.log(TWO_PI / N_b) + 0.5j * math.pi
                term = weight * ((1j * inn.const / TWO_PI - (1 + a_) / 4) * cw1 + (1j / TWO_PI) * cw2 * inv)
        elif k in (8, 9, 10):
            mu0, mut, tau0 = params.mu[ib]
            if k == 8:
                mult, shift = mut, 0.5 + tau0
            elif k == 9:
                mult, shift = mut, 0.5 - tau0
            else:
                mult, shift = mu0, 0.5
            if not mult:
                continue
            term = mult * base * np.exp(-(s - shift) * c) * cw1
        else:
            raise ValueError(f"no term E_{k}")
        out += term
    return out


def _e6_logderiv(s, chis, params, inners):
    """E_6 at w = 0 with the inner prime sum replaced by -L'/L(s - u, chi_a)."""
    total = 0j
    for ia, ib in PAIRS:
        inn = inners[ib]
        dl = l_log_derivative(chis[ia], s - inn.s_nodes)
        total += (1j / TWO_PI) * np.sum(inn.s_weights * (-dl) * inn.s_logl)
    return complex(total)


def e6_prime_route(s, chis, params: TensorEvalParams, limit, rows=4096):
    """E_6 at w = 0 with the inner sum sum chi_a(p^m) log p p^{-m(s-u)} taken over p^m <= limit."""
    tab = prime_power_table(int(limit))
    total = 0j
    for ia, ib in PAIRS:
        ctx = cramer.context(chis[ib], params.cramer_params())
        u, wu, lg = ctx.s_nodes, ctx.s_weights, ctx.s_logl
        vals = tab.character_values(chis[ia]) * tab.log_p
        c = tab.log_value
        acc = np.zeros(len(u), dtype=complex)
        for lo in range(0, len(c), rows):
            hi = min(lo + rows, len(c))
            acc += vals[lo:hi] @ np.exp(-np.outer(c[lo:hi], s - u))
        total += (1j / TWO_PI) * np.sum(wu * acc * lg)
    return complex(total)


# lower bounds on Re s for absolute convergence of each E_k (w fixed, Re w > 0)
def _abscissa(k, params):
    a = params.alpha
    return {1: 1.0, 2: 2.0, 3: 1.0 - a, 4: 1.0 - a, 5: 1.0, 6: 2.0, 7: 1.0 - a,
            8: 1.5 + params.tau0, 9: 1.5 - params.tau0, 10: 1.5}[k]


@dataclass
class TermValues:
    w: complex
    s: complex
    values: list
    errors: list
    slices: dict = field(default_factory=dict, repr=False)

    @property
    def total(self):
        return fsum_complex(self.values)

    @property
    def error(self):
        return float(sum(self.errors))


def e_terms(w, s, chi1, chi2, params: TensorEvalParams, variant="derived", keep_slices=False) -> TermValues:
    """All ten E_k(w, s) with truncation estimates.

    variant="derived" builds every term from products of the single-character
    expansions.  "alt" swaps in competing closed forms for E_4 to E_7 (parity
    factor outside the alternating sum, opposite shift in E_5, opposite sign in
    E_6, log(2 pi/N + pi i/2) inside the E_7 constant); "alt_w0" swaps only E_3.
    Both move with alpha and exist to show it.
    """
    w, s = complex(w), complex(s)
    for k in range(1, 11):
        if s.real <= _abscissa(k, params):
            raise ParameterError(f"E_{k} needs Re s > {_abscissa(k, params)}")
    table, raw = _table(params)
    chis = (chi1, chi2)
    inners = [_inner_data(chi, params, table, raw) for chi in chis]
    vals, errs, slices = [], [], {}
    P = params.P
    for k in range(1, 11):
        v = variant
        if variant == "alt_w0":
            v = "alt_w0" if k == 3 else "derived"
        sl = e1_slices(w, s, chi1, chi2, table, raw) if k == 1 else pair_slices(k, w, s, chis, params, table, raw, inners, v)
        if k == 6 and w == 0 and params.e6_route == "logderiv":
            val = _e6_logderiv(s, chis, params, inners)
            err = 1e-13
        else:
            val = fsum_complex(sl)
            # outer truncation: envelope of the remaining prime powers
            sig = s.real - _abscissa(k, params) + 1.0
            scale = max(1.0, float(np.max(np.abs(sl[-50:]) / np.maximum(np.exp(-sig * table.c[-50:]), 1e-300)))) if len(sl) > 50 else 1.0
            err = min(tail_estimate(sig, w.real + 1.0, P) * scale, 1.0)
            if k in (2, 3):
                err += inners[0].tail * abs(val) * 1e-3 if params.inner == "exact" else 0.0
        vals.append(complex(val))
        errs.append(float(err))
        if keep_slices:
            slices[k] = sl
    return TermValues(w, s, vals, errs, slices)


def e_term(k, w, s, chi1, chi2, params: TensorEvalParams, variant="derived") -> complex:
    return e_terms(w, s, chi1, chi2, params, variant).values[k - 1]


@dataclass
class TensorValue:
    s: complex
    value: complex
    log_value: complex
    per_term: list
    error_estimate: float
    params: TensorEvalParams


def tensor_square(s, chi1, chi2, params: TensorEvalParams, variant="derived") -> TensorValue:
    """exp(sum_k E_k(0, s)) for Re s > 2."""
    s = complex(s)
    if s.real <= 2:
        raise ParameterError("the Euler-product expression needs Re s > 2")
    tv = e_terms(0.0, s, chi1, chi2, params, variant)
    lv = tv.total
    val = cmath.exp(lv)
    return TensorValue(s, val, lv, tv.values, abs(val) * tv.error, params)


# ---------------------------------------------------------------- residue oracle

def _single_c_inner(chi, c, exclude_value, params: CramerEvalParams):
    """Inner sums of E_2, E_3 at one c, truncated at params.P exactly as cramer.l_explicit."""
    raw = prime_power_table(int(params.P))
    x = raw.log_value
    chi_q = raw.character_values(chi)
    v2 = chi_q * np.exp(-x) / raw.m
    d2 = c - x
    keep = raw.value != exclude_value
    i2 = fsum_complex(v2[keep] / d2[keep])
    v3 = np.conj(chi_q) * np.exp(-(1 + params.alpha) * x) / raw.m
    i3 = fsum_complex(v3 / (c + x))
    return i2, i3


def residue_slice(p, m, w, s, chi1, chi2, params: TensorEvalParams):
    """The (p, m) slice of sum_k E_k(w, s, {chi1, chi2}), inner sums truncated at params.P."""
    w, s = complex(w), complex(s)
    c = m * math.log(p)
    lp = math.log(p)
    pm = p**m
    a_ = params.alpha
    cw, cw1, cw2 = (c**w, c ** (w - 1), c ** (w - 2))
    chis = (chi1, chi2)
    xs = [complex(chi.values[pm % chi.modulus]) for chi in chis]
    total = (1j / TWO_PI) * xs[0] * xs[1] * cmath.exp(-s * c) * lp**2 * ((s - 2) * cw1 - (w + 1) * cw2)
    k_c = complex(k_integral(np.array([-1j * c]), a_, params.quad)[0][0])
    for ia, ib in PAIRS:
        if xs[ia] == 0:
            continue
        chi_b = chis[ib]
        base = xs[ia] * lp
        cp = params.cramer_params()
        i2, i3 = _single_c_inner(chi_b, c, pm, cp)
        alt = complex(alternating_sum(chi_b.parity * cmath.exp(-1j * a_ * math.pi), -1j * c)[0])
        ctx = cramer.context(chi_b, cp)
        j6 = complex(np.sum(np.exp(c * ctx.s_nodes) * ctx.s_weights * ctx.s_logl))
        inv = k_c - EULER_GAMMA - math.log(TWO_PI / chi_b.modulus) + 0.5j * math.pi
        total += -(1j / TWO_PI) * base * cmath.exp(-(s - 1) * c) * cw * i2
        total += (1j / TWO_PI) * base * cmath.exp(-(s + a_) * c) * cw * i3
        total += -(1 / TWO_PI) * base * cmath.exp(-(s + a_) * c) * cw * alt
        total += 0.5 * base * cmath.exp(-(s - (1 + chi_b.parity) / 2) * c) * cw1 / math.sinh(c)
        total += (1j / TWO_PI) * base * cw * cmath.exp(-s * c) * j6
        total += base * cmath.exp(-(s + a_) * c) * ((1j * ctx.const / TWO_PI - (1 + a_) / 4) * cw1 + (1j / TWO_PI) * cw2 * inv)
        mu0, mut, tau0 = params.mu[ib]
        for mult, shift in ((mut, 0.5 + tau0), (mut, 0.5 - tau0), (mu0, 0.5)):
            if mult:
                total += mult * base * cmath.exp(-(s - shift) * c) * cw1
    return complex(total)


def residue_probe(p, m, w, s, chi1, chi2, params: TensorEvalParams, radius=0.05, n=64, zeros=(None, None)):
    """(2 pi i / Gamma(w)) Res_{t = i m log p} e^{i(s-1)t} t^{w-1} l_chi1(t) l_chi2(t), by a circle rule."""
    w, s = complex(w), complex(s)
    t0 = 1j * m * math.log(p)
    ang = 2 * math.pi * np.arange(n) / n
    z = t0 + radius * np.exp(1j * ang)
    l1 = cramer.l_explicit(chi1, z, params.cramer_params(0), zeros[0], branch="ii")
    l2 = cramer.l_explicit(chi2, z, params.cramer_params(1), zeros[1], branch="ii")
    # t^{w-1} with arg t in (-pi/2, 3pi/2); the circle stays in the upper half plane
    g = np.exp(1j * (s - 1) * z + (w - 1) * np.log(z))
    res = complex(np.mean(g * l1 * l2 * radius * np.exp(1j * ang)))
    return 2j * math.pi * res / complex(gamma(w))


def residue_contribution(p, m, w, s, chi1, chi2, params: TensorEvalParams, radius=0.05, n=64):
    """(formula, probe) for the prime power p^m.

    The probe is the circle integral of e^{i(s-1)t} t^{w-1} l_chi1 l_chi2; the
    formula is the matching slice of the E_k built for the conjugate pair,
    scaled by e^{pi i w/2} / Gamma(w).
    """
    if complex(w).real <= 2:
        raise ParameterError("residue slices are used with Re w > 2")
    w = complex(w)
    sl = residue_slice(p, m, w, s, chi1.conjugate(), chi2.conjugate(), params)
    formula = cmath.exp(0.5j * math.pi * w) / complex(gamma(w)) * sl
    probe = residue_probe(p, m, w, s, chi1, chi2, params, radius, n)
    return formula, probe
