"""Cramer's function l_chi(t) = sum_{gamma > 0} exp(-gamma t) over zeros 1/2 + i gamma.

Two evaluations:

* `l_zero_sum`: the defining series, truncated at the zero height T (Re t > 0).
* `l_explicit`: explicit formulas in terms of primes, a contour integral of
  log L near the critical strip, and a few elementary integrals.  The
  right-half-plane form ("i") comes from integrating e^{ist} log L(s) around a
  contour made of the lines Re s = -alpha, Re s = 1 and a semi-ellipse S joining
  them below height epsilon.  The form valid on all of C minus the negative
  imaginary axis ("ii") is obtained from the reflection identity
  l_chi(t) + l_{chi-bar}(-t) = -i e^{-chi(-1) i t/2} / (2 sin t) - mu-terms  (Re t < 0).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .lfunctions import ZeroList, log_l_along_path, anchored_log_l
from .primesums import prime_power_table
from .special import (
    EULER_GAMMA,
    DEFAULT_QUAD,
    QuadratureSpec,
    gauss_legendre,
    log_gamma,
    quad_half_line,
)

TWO_PI = 2 * math.pi


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class CramerEvalParams:
    alpha: float = 0.5
    epsilon: float = 0.5
    theta: float | None = None
    T: float = 150.0
    P: int = 1_000_000
    quad: QuadratureSpec = DEFAULT_QUAD
    contour_nodes: int = 256
    # sign of the pi i/2 constant in the 1/t term of the right-half-plane form
    half_pi_sign: int = 1

    @property
    def theta_value(self):
        return self.theta if self.theta is not None else 0.5 * math.atan(self.epsilon)

    def validate(self, *first_ordinates):
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha = {self.alpha} must lie in (0, 1)")
        if self.epsilon <= 0:
            raise ParameterError("epsilon must be positive")
        tau1 = min(first_ordinates) if first_ordinates else math.inf
        if not self.epsilon < tau1:
            raise ParameterError(f"epsilon = {self.epsilon} must be below the first zero ordinate {tau1}")
        if not math.tan(self.theta_value) < self.epsilon:
            raise ParameterError("need tan(theta) < epsilon")
        return self


def default_params(*zero_lists: ZeroList, **kw) -> CramerEvalParams:
    tau1 = min(z.first for z in zero_lists) if zero_lists else 2.0
    eps = kw.pop("epsilon", None) or min(1.0, tau1 / 2)
    return CramerEvalParams(epsilon=eps, **kw)


# ---------------------------------------------------------------- per-character data

@dataclass
class _Context:
    chi: object
    params: CramerEvalParams
    chi_pm: np.ndarray = field(repr=False, default=None)        # chi(p^m)
    chibar_pm: np.ndarray = field(repr=False, default=None)
    c: np.ndarray = field(repr=False, default=None)             # m log p
    m: np.ndarray = field(repr=False, default=None)
    log_p: np.ndarray = field(repr=False, default=None)
    s_nodes: np.ndarray = field(repr=False, default=None)       # points on S
    s_weights: np.ndarray = field(repr=False, default=None)     # ds weights, oriented -alpha -> 1
    s_logl: np.ndarray = field(repr=False, default=None)
    const: complex = 0j                                         # log(chi(-1) Gamma(1+a) N^a G / (2 pi)^{1+a}), continued
    const_branch: int = 0


_CONTEXTS: dict = {}


def semi_ellipse(alpha, epsilon, n):
    """Gauss-Legendre nodes on S: s(phi) = (1-alpha)/2 + (1+alpha)/2 cos phi + i eps sin phi.

    Returns (nodes, weights) with nodes ordered from s = 1 (phi = 0) to
    s = -alpha, and weights such that sum(w f(nodes)) integrates f ds along S
    from -alpha to 1.
    """
    phi, wphi = gauss_legendre(n, 0.0, math.pi)
    c0, a = (1 - alpha) / 2, (1 + alpha) / 2
    s = c0 + a * np.cos(phi) + 1j * epsilon * np.sin(phi)
    ds = -a * np.sin(phi) + 1j * epsilon * np.cos(phi)
    return s, -wphi * ds


def context(chi, params: CramerEvalParams) -> _Context:
    key = (chi.label, params.alpha, params.epsilon, params.P, params.contour_nodes)
    ctx = _CONTEXTS.get(key)
    if ctx is not None:
        return ctx
    t = prime_power_table(int(params.P))
    ctx = _Context(chi, params)
    ctx.chi_pm = t.character_values(chi)
    ctx.chibar_pm = np.conj(ctx.chi_pm)
    ctx.c = t.log_value
    ctx.m = t.m.astype(float)
    ctx.log_p = t.log_p
    s, w = semi_ellipse(params.alpha, params.epsilon, params.contour_nodes)
    path = np.concatenate([[1.0 + 0j], s, [-params.alpha + 0j]])
    logs = log_l_along_path(chi, path).values
    ctx.s_nodes, ctx.s_weights, ctx.s_logl = s, w, logs[1:-1]
    ctx.const, ctx.const_branch = _continued_constant(chi, params.alpha, logs[-1])
    _CONTEXTS[key] = ctx
    return ctx


def principal_log_constant(chi, alpha) -> complex:
    """Principal log of chi(-1) Gamma(1+alpha) N^alpha G(chi) / (2 pi)^{1+alpha}."""
    N = chi.modulus
    val = chi.parity * math.gamma(1 + alpha) * N**alpha * chi.gauss_sum() / TWO_PI ** (1 + alpha)
    return cmath.log(val)


def _continued_constant(chi, alpha, log_l_at_minus_alpha):
    """The constant in log L(-alpha + iy) on the branch continued along S.

    Splitting log L(-alpha + iy) by the functional equation leaves
    log(1 + chi(-1) e^{-i pi (1+alpha)}) + (pi i/2)(1+alpha) + log L(1+alpha, chi-bar)
    plus this constant; it agrees with the principal log above up to 2 pi i k.
    """
    eps = chi.parity
    rest = (cmath.log(1 + eps * cmath.exp(-1j * math.pi * (1 + alpha)))
            + 0.5j * math.pi * (1 + alpha)
            + anchored_log_l(chi.conjugate(), 1 + alpha))
    cont = log_l_at_minus_alpha - rest
    base = principal_log_constant(chi, alpha)
    k = round((cont - base).imag / TWO_PI)
    if abs(cont - base - 2j * math.pi * k) > 1e-6:
        raise RuntimeError(f"functional-equation constant mismatch: {cont} vs {base} + 2 pi i {k}")
    return base + 2j * math.pi * k, k


# ---------------------------------------------------------------- building blocks

def alternating_sum(x, t, n_direct=200, order=10):
    """sum_{n>=1} x^n / (n (t + n pi)) for |x| = 1, x != 1, vectorised over t.

    Direct summation followed by an Euler-transformed tail.
    """
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    n = np.arange(1, n_direct + 1, dtype=float)
    xn = x ** n
    head = (xn[None, :] / (n[None, :] * (t[:, None] + n[None, :] * math.pi))).sum(axis=1)
    N0 = n_direct + 1
    nn = np.arange(N0, N0 + order + 1, dtype=float)
    f = 1.0 / (nn[None, :] * (t[:, None] + nn[None, :] * math.pi))
    y = x / (1 - x)
    tail = np.zeros_like(t)
    diff = f
    yk = 1.0 + 0j
    for _ in range(order):
        tail = tail + yk * diff[:, 0]
        diff = diff[:, 1:] - diff[:, :-1]
        yk *= y
    tail = tail * x**N0 / (1 - x)
    return head + tail


def k_integral(t, alpha, quad: QuadratureSpec = DEFAULT_QUAD, sheet="direct"):
    """K(t) = int_0^inf (u + i t (1 - e^{-alpha u})) / ((e^u - 1)(u + i t)) du, analytic off i[0, inf).

    sheet="upper" continues K from Re t > 0 across the positive imaginary axis
    into the quadrant Re t < 0, Im t > 0.
    """
    t = np.atleast_1d(np.asarray(t, dtype=complex))

    def f(u):
        u = u[:, None]
        small = u < 1e-3
        # (1 - e^{-alpha u}) and u/(e^u - 1) via expm1; below 1e-3 use the series
        one_m = np.where(small, alpha * u * (1 - alpha * u / 2 + (alpha * u) ** 2 / 6), -np.expm1(-alpha * u))
        ue = np.where(small, 1 - u / 2 + u * u / 12, u / np.expm1(np.where(small, 1.0, u)))
        num = u + 1j * t[None, :] * one_m
        return ue * num / (u * (u + 1j * t[None, :]))

    val, err = quad_half_line(f, 0.0, quad)
    if sheet == "upper":
        # continue across i(0, inf): the pole u = -it has crossed above the real axis
        u0 = -1j * t
        crossed = (u0.real > 0) & (u0.imag > 0)
        res = -1j * t * np.exp(1j * alpha * t) / np.expm1(np.where(crossed, u0, 1.0))
        val = val - np.where(crossed, 2j * math.pi * res, 0.0)
    return val, err


def k_integral_ray(t, alpha, phi, quad: QuadratureSpec = DEFAULT_QUAD):
    """K(t) integrated along the ray arg u = phi (0 <= phi < pi/2); a second route
    for the continuation through the upper half plane when phi is above the pole."""
    t = complex(t)
    rot = cmath.exp(1j * phi)

    def f(r):
        u = r * rot
        num = u + 1j * t * (-np.expm1(-alpha * u))
        return rot * num / (np.expm1(u) * (u + 1j * t))

    val, err = quad_half_line(f, 0.0, quad.with_decay(math.cos(phi)))
    return complex(val), err


def h_function(t, alpha, route="direct", quad: QuadratureSpec = DEFAULT_QUAD):
    """H(t) = (1/t) int_0^inf (u - i t (1 - e^{-alpha u})) / ((e^u - 1)(u - i t)) du.

    The integral is analytic for t off the closed negative imaginary axis.
    route="rotated" integrates along the ray arg u = -beta instead, adding the
    residue at u = i t when the pole lies between the ray and the real axis.
    """
    t = complex(t)
    if t.real == 0 and t.imag <= 0:
        raise ParameterError("H is not defined on the ray i R_{<=0}")
    if route == "direct":
        val, _ = k_integral(np.array([-t]), alpha, quad)
        return complex(val[0]) / t
    beta = 0.45 * math.pi
    rot = cmath.exp(-1j * beta)

    def f(r):
        u = rot * r
        num = u - 1j * t * (-np.expm1(-alpha * u))
        return rot * num / (np.expm1(u) * (u - 1j * t))

    val, _ = quad_half_line(f, 0.0, quad.with_decay(math.cos(beta)))
    pole = 1j * t
    ang = cmath.phase(pole)
    if abs(pole) > 0 and -beta < ang < 0:
        res = 1j * t * cmath.exp(-1j * alpha * t) / (cmath.exp(1j * t) - 1)
        val = val - 2j * math.pi * res
    return complex(val) / t


def h_small_t_remainder(t, alpha, constant="corrected", quad: QuadratureSpec = DEFAULT_QUAD):
    """H(t) + e^{-i(alpha+1/2)t} L(t) / (2 sin(t/2)), bounded near t = 0 when L is right.

    constant="corrected" uses L(t) = log(-it) = log t - pi i/2; "alt" uses
    L(t) = log t, which leaves a (pi i/2)/t remainder.
    """
    t = complex(t)
    lg = principal_log(t)
    if constant == "corrected":
        lg -= 0.5j * math.pi
    return h_function(t, alpha, quad=quad) + cmath.exp(-1j * (alpha + 0.5) * t) * lg / (2 * cmath.sin(t / 2))


def l_small_t_remainder(chi, t, params, zeros=None, constant="corrected"):
    """l_chi(t) + (log t + log(2 pi/N) + gamma + c) / (2 pi t) with c = 0 ("corrected")
    or c = 3 pi i/2 ("alt").  Only the corrected constant stays bounded as t -> 0."""
    t = complex(t)
    c = 1.5j * math.pi if constant == "alt" else 0.0
    N = chi.modulus
    lead = (principal_log(t) + math.log(TWO_PI / N) + EULER_GAMMA + c) / (TWO_PI * t)
    return complex(l_explicit(chi, t, params, zeros)) + lead


# ---------------------------------------------------------------- explicit formula

def _right_half(ctx: _Context, t, params: CramerEvalParams, with_pole_mask=None, k_sheet="direct"):
    """Explicit formula for l_chi(t) from the contour around the critical strip.

    Valid for Re t > 0 and, as an analytic continuation, for t off the closed
    positive imaginary axis.  `with_pole_mask` drops selected prime-power terms
    of the first sum (used to split off a pole).
    """
    p = params
    chi = ctx.chi
    a = p.alpha
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    N = chi.modulus
    weights = ctx.chi_pm * np.exp(-ctx.c) / ctx.m
    if with_pole_mask is not None:
        weights = np.where(with_pole_mask, 0.0, weights)
    first = (weights[None, :] / (t[:, None] + 1j * ctx.c[None, :])).sum(axis=1)
    first = -(1j * t / TWO_PI) * np.exp(0.5j * t) * first

    w2 = ctx.chibar_pm * np.exp(-(1 + a) * ctx.c) / ctx.m
    second = (w2[None, :] / (t[:, None] - 1j * ctx.c[None, :])).sum(axis=1)
    x = chi.parity * cmath.exp(-1j * a * math.pi)
    alt = alternating_sum(x, t)
    K, _ = k_integral(t, a, p.quad, k_sheet)
    inv_t = (K - EULER_GAMMA - math.log(TWO_PI / N) + p.half_pi_sign * 0.5j * math.pi) / t
    bracket = 1j * t * second - 1j * t * alt + 1j * ctx.const - (1 + a) * math.pi / 2 + inv_t
    block = np.exp(-1j * (a + 0.5) * t) / TWO_PI * bracket

    ex = np.exp(1j * ctx.s_nodes[None, :] * t[:, None])
    contour = (ex * (ctx.s_logl * ctx.s_weights)[None, :]).sum(axis=1)
    contour = -(t / TWO_PI) * np.exp(-0.5j * t) * contour
    return first + block + contour


def l_continued(chi, t, params: CramerEvalParams):
    """The right-half-plane formula continued through the upper half plane.

    Agrees with l_explicit for Re t > 0 and gives l_chi on Re t < 0, Im t > 0
    without using the reflection identity, so it can test that identity.
    """
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    if np.any((t.real <= 0) & (t.imag <= 0)):
        raise ParameterError("continuation is only provided for Re t > 0 or Im t > 0")
    return _right_half(context(chi, params), t, params, k_sheet="upper")


def reflection_rhs(chi, t, zeros: ZeroList | None = None, side=-1):
    """Right side of l_chi(t) + l_{chi-bar}(-t) for Re t < 0 (side=-1) or Re t > 0 (side=+1)."""
    t = np.asarray(t, dtype=complex)
    eps = chi.parity
    if side < 0:
        val = -1j * np.exp(-eps * 0.5j * t) / (2 * np.sin(t))
    else:
        val = 1j * np.exp(eps * 0.5j * t) / (2 * np.sin(t))
    if zeros is not None:
        if zeros.mu_tau0:
            val = val - zeros.mu_tau0 * (np.exp(1j * zeros.tau0 * t) + np.exp(-1j * zeros.tau0 * t))
        val = val - zeros.mu0
    return val


def _left_form(chi, t, params, zeros=None, pole_mask=None):
    ctx_bar = context(chi.conjugate(), params)
    return -_right_half(ctx_bar, -np.asarray(t), params, with_pole_mask=pole_mask) + reflection_rhs(chi, t, zeros, -1)


def l_explicit(chi, t, params: CramerEvalParams, zeros: ZeroList | None = None, branch="auto"):
    """l_chi(t) from the explicit formulas.  branch: "auto", "i" (Re t > 0) or "ii"."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    if branch == "i":
        if np.any(t.real <= 0):
            raise ParameterError("right-half-plane form needs Re t > 0")
        out = _right_half(context(chi, params), t, params)
    elif branch == "ii":
        if np.any((t.real == 0) & (t.imag <= 0)):
            raise ParameterError("t on the cut along the negative imaginary axis")
        out = _left_form(chi, t, params, zeros)
    else:
        out = np.empty(t.shape, dtype=complex)
        right = t.real > 0
        if np.any(right):
            out[right] = _right_half(context(chi, params), t[right], params)
        if np.any(~right):
            out[~right] = l_explicit(chi, t[~right], params, zeros, "ii")
    return complex(out[0]) if scalar else out


def l_zero_sum(t, zeros: ZeroList, T=None):
    """Truncated sum_{0 < gamma <= T} e^{-gamma t}; returns (value, tail_bound)."""
    T = zeros.height if T is None else T
    g = zeros.upto(T)
    t = complex(t)
    if t.real <= 0:
        raise ParameterError("zero sum needs Re t > 0")
    terms = np.exp(-g * t)
    val = complex(math.fsum(terms.real), math.fsum(terms.imag))
    return val, zero_sum_tail(t.real, T, int(zeros.label.split(".")[0]))


def zero_sum_tail(sigma, T, N):
    """Bound for sum_{gamma > T} e^{-gamma sigma} from the zero-counting density plus slack."""
    dens = lambda x: np.log(np.maximum(N * x / TWO_PI, 2.0)) / TWO_PI + 1.0 / np.maximum(x, 1.0)
    val, _ = quad_half_line(lambda u: dens(T + u) * np.exp(-sigma * u), 0.0, QuadratureSpec(1e-14, 1e-8, 9, sigma))
    return float(abs(val) * math.exp(-sigma * T) + 2 * math.exp(-sigma * T))


# ---------------------------------------------------------------- the I and J functions

def i_function(t, parity, quad: QuadratureSpec = DEFAULT_QUAD, route="auto"):
    """I(t) = (1/t) int_0^inf u e^{k u} ((u/2) cos(t/2) - t sin(t/2)) / ((e^u - 1)(u^2 + 4 t^2)) du,
    k = (1 + chi(-1))/4, continued to Re t < 0 through the upper half plane.

    route="real" integrates on the real u-axis and adds the pole term for
    Re t < 0; route="ray" integrates along a ray rotated past the pole
    u = -2it, which needs no correction.  "auto" picks the ray when that
    pole sits within 0.3 rad of the positive real axis.
    """
    t = complex(t)
    if t.real == 0 and t.imag <= 0:
        raise ParameterError("I is not defined on the ray i R_{<=0}")
    k = (1 + parity) / 4
    pole = -2j * t
    near = pole.real > 0 and abs(cmath.phase(pole)) < 0.3
    if route == "auto":
        route = "ray" if near else "real"
    if route == "ray":
        if not (pole.real > 0 or pole.imag > 0):
            raise ParameterError("ray route needs the pole u = -2it in the right half plane")
        ang = cmath.phase(pole)
        # above the pole, but short of pi/2 where 1/(e^u - 1) stops decaying
        phi = ang + min(0.25, (math.pi / 2 - ang) / 2)
    else:
        phi = 0.0
    rot = cmath.exp(1j * phi)
    c2, s2 = cmath.cos(t / 2), cmath.sin(t / 2)

    def f(r):
        u = r * rot
        ue = u / np.expm1(u)
        return ue * np.exp(k * u) * ((u / 2) * c2 - t * s2) / (u * u + 4 * t * t) * rot

    val, _ = quad_half_line(f, 0.0, quad.with_decay((1 - k) * math.cos(phi)))
    val = complex(val) / t
    if route == "real" and t.real < 0:
        val += -1j * math.pi * cmath.exp(-parity * 0.5j * t) / (2 * cmath.sin(t))
    return val


def principal_log(t):
    """log t with arg t in (-pi/2, 3pi/2)."""
    t = complex(t)
    ang = cmath.phase(t)
    if ang <= -math.pi / 2:
        ang += 2 * math.pi
    return complex(math.log(abs(t)), ang)


def j_function(t, parity, quad: QuadratureSpec = DEFAULT_QUAD):
    t = complex(t)
    return i_function(t, parity, quad) + principal_log(t) / (4 * cmath.sin(t / 2))


def j_reflection_rhs(t, parity, constant="corrected"):
    """Right side of J(t) + J(-t) for Re t < 0.

    With log(-t) = log t - pi i on the (-pi/2, 3pi/2) branch the log terms
    leave +i pi/(4 sin(t/2)); constant="alt" gives the opposite sign.
    """
    t = complex(t)
    sign = 1.0 if constant == "corrected" else -1.0
    return -1j * math.pi * cmath.exp(-parity * 0.5j * t) / (2 * cmath.sin(t)) + sign * 1j * math.pi / (4 * cmath.sin(t / 2))


# ---------------------------------------------------------------- poles

def pole_residue_probe(chi, p, m, params: CramerEvalParams, radius=0.05, n=64, zeros=None):
    """(1/2 pi i) times the contour integral of l_chi around t = i m log p."""
    t0 = 1j * m * math.log(p)
    ang = 2 * math.pi * np.arange(n) / n
    pts = t0 + radius * np.exp(1j * ang)
    vals = l_explicit(chi, pts, params, zeros, branch="ii")
    return complex(np.mean(vals * radius * np.exp(1j * ang)))


def pole_residue_formula(chi, p, m):
    """Residue of l_chi at t = i m log p: -chi-bar(p^m) log p p^{-m/2} / (2 pi)."""
    val = np.conj(chi.values[(p**m) % chi.modulus])
    return complex(-val * math.log(p) * p ** (-m / 2) / TWO_PI)


def residue_on_circle(fn, center, radius, n=64):
    ang = 2 * math.pi * np.arange(n) / n
    pts = center + radius * np.exp(1j * ang)
    vals = np.array([fn(z) for z in pts])
    return complex(np.mean(vals * radius * np.exp(1j * ang)))
