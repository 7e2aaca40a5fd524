"""Gamma-family functions, Hurwitz zeta and double-exponential quadrature.

Everything accepts complex scalars or numpy arrays.  The log-gamma branch is
the principal one: analytic on C minus (-inf, 0], real on the positive axis.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.57721566490153286060651209

# B_2, B_4, ..., B_30
_BERNOULLI_EVEN = [
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
    43867 / 798, -174611 / 330, 854513 / 138, -236364091 / 2730,
    8553103 / 6, -23749461029 / 870, 8615841276005 / 14322,
]

_STIRLING_SHIFT = 17.0
_STIRLING_TERMS = 9
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


class PoleError(ValueError):
    """Raised when a function is evaluated exactly at one of its poles."""


class AccuracyError(RuntimeError):
    """Quadrature failed to meet its tolerance.  `.value` keeps the best estimate."""

    def __init__(self, msg, value=None, error=None):
        super().__init__(msg)
        self.value = value
        self.error = error


def euler_gamma() -> float:
    return EULER_GAMMA


def _as_complex(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _check_poles(z):
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(bad):
        raise PoleError(f"gamma pole at {z[bad].ravel()[0].real:g}")


def _shift_counts(z):
    return np.maximum(0, np.ceil(_STIRLING_SHIFT - z.real)).astype(int)


def log_gamma(z):
    """Principal branch of log Gamma(z)."""
    z, scalar = _as_complex(z)
    _check_poles(z)
    n = _shift_counts(z)
    acc = np.zeros_like(z)
    for k in range(int(n.max(initial=0))):
        mask = k < n
        acc = acc - np.where(mask, np.log(np.where(mask, z + k, 1.0)), 0.0)
    x = z + n
    inv = 1.0 / x
    inv2 = inv * inv
    series = np.zeros_like(x)
    p = inv
    for k in range(1, _STIRLING_TERMS + 1):
        series = series + _BERNOULLI_EVEN[k - 1] / (2 * k * (2 * k - 1)) * p
        p = p * inv2
    out = (x - 0.5) * np.log(x) - x + _HALF_LOG_2PI + series + acc
    return out[()] if scalar else out


def gamma(z):
    return np.exp(log_gamma(z))


def digamma(z):
    z, scalar = _as_complex(z)
    _check_poles(z)
    n = _shift_counts(z)
    acc = np.zeros_like(z)
    for k in range(int(n.max(initial=0))):
        mask = k < n
        acc = acc - np.where(mask, 1.0 / np.where(mask, z + k, 1.0), 0.0)
    x = z + n
    inv2 = 1.0 / (x * x)
    series = np.zeros_like(x)
    p = inv2
    for k in range(1, _STIRLING_TERMS + 1):
        series = series + _BERNOULLI_EVEN[k - 1] / (2 * k) * p
        p = p * inv2
    out = np.log(x) - 0.5 / x - series + acc
    return out[()] if scalar else out


def _hurwitz_parts(w, a, want_derivative):
    w = np.asarray(w, dtype=complex)
    a = np.asarray(a, dtype=complex)
    w, a = np.broadcast_arrays(w, a)
    scalar = w.ndim == 0
    w = np.atleast_1d(w).ravel()
    a = np.atleast_1d(a).ravel()
    if np.any((a.imag == 0) & (a.real <= 0) & (a.real == np.round(a.real))):
        raise PoleError("hurwitz zeta: a must avoid non-positive integers")
    if np.any(w == 1):
        raise PoleError("hurwitz zeta pole at w = 1")
    J = 14
    # keep |a + M| comfortably above |w + 2J| / (2 pi)
    M = int(max(16.0, 0.35 * float(np.max(np.abs(w))) + 16.0) - min(0.0, float(np.min(a.real))))
    k = np.arange(M)
    base = a[:, None] + k[None, :]
    logb = np.log(base)
    terms = np.exp(-w[:, None] * logb)
    val = terms.sum(axis=1)
    dval = -(logb * terms).sum(axis=1) if want_derivative else None

    x = a + M
    lx = np.log(x)
    xw = np.exp(-w * lx)
    val = val + x * xw / (w - 1) + 0.5 * xw
    if want_derivative:
        dval = dval - lx * x * xw / (w - 1) - x * xw / (w - 1) ** 2 - 0.5 * lx * xw
    rising = w.copy()          # w (w+1) ... (w+2j-2)
    drising = np.ones_like(w)
    xpow = xw / x              # x^{-w-1}
    fact = 2.0                 # (2j)!
    for j in range(1, J + 1):
        coef = _BERNOULLI_EVEN[j - 1] / fact
        val = val + coef * rising * xpow
        if want_derivative:
            dval = dval + coef * (drising - rising * lx) * xpow
        for step in (2 * j - 1, 2 * j):
            drising = drising * (w + step) + rising
            rising = rising * (w + step)
        xpow = xpow / (x * x)
        fact *= (2 * j + 1) * (2 * j + 2)
    return val, dval, scalar


def hurwitz_zeta(w, a):
    """zeta(w, a) = sum_{k>=0} (a+k)^{-w} by Euler-Maclaurin, principal powers."""
    val, _, scalar = _hurwitz_parts(w, a, False)
    return val[0] if scalar else val


def hurwitz_zeta_with_derivative(w, a):
    """(zeta(w, a), d/dw zeta(w, a))."""
    val, dval, scalar = _hurwitz_parts(w, a, True)
    if scalar:
        return val[0], dval[0]
    return val, dval


# ---------------------------------------------------------------- quadrature

@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_refinements: int = 9
    decay_hint: float | None = None

    def with_decay(self, decay):
        return QuadratureSpec(self.abs_tol, self.rel_tol, self.max_refinements, decay)


DEFAULT_QUAD = QuadratureSpec()


def _tolerance(spec, value):
    return max(spec.abs_tol, spec.rel_tol * abs(value))


def _de_levels(nodes_fn, f, spec, initial_h=0.5, extent=4.0):
    """Run a double-exponential rule, halving h until two levels agree.

    `nodes_fn(t)` maps a grid of t values to (x, dx/dt).  `f` may return a
    trailing batch dimension; convergence is judged on the worst component.
    """
    h = initial_h
    t = np.arange(-extent, extent + h / 2, h)
    x, dx = nodes_fn(t)
    fx = f(x)
    total = np.tensordot(dx, fx, axes=(0, 0)) if fx.ndim > 1 else np.dot(dx, fx)
    prev = total * h
    for _ in range(spec.max_refinements):
        h /= 2
        t = np.arange(-extent + h, extent, 2 * h)
        x, dx = nodes_fn(t)
        fx = f(x)
        total = total + (np.tensordot(dx, fx, axes=(0, 0)) if fx.ndim > 1 else np.dot(dx, fx))
        cur = total * h
        err = np.max(np.abs(cur - prev))
        scale = np.max(np.abs(cur))
        if err <= max(spec.abs_tol, spec.rel_tol * scale):
            return cur, float(err)
        prev = cur
    raise AccuracyError(f"double-exponential rule did not converge (err={err:.3g})", cur, float(err))


def _clean(fn):
    def wrapped(x):
        with np.errstate(all="ignore"):
            v = np.asarray(fn(x), dtype=complex)
        return np.where(np.isfinite(v), v, 0.0)
    return wrapped


def quad_interval(f, a, b, spec: QuadratureSpec = DEFAULT_QUAD):
    """Integrate f over [a, b] (real endpoints) with tanh-sinh.  Returns (value, error)."""
    c, r = 0.5 * (a + b), 0.5 * (b - a)

    def nodes(t):
        s = 0.5 * math.pi * np.sinh(t)
        # distances to the nearer endpoint without cancellation
        near = 2 * r / (1 + np.exp(2 * np.abs(s)))
        x = np.where(s < 0, a + near, b - near)
        dx = r * 0.5 * math.pi * np.cosh(t) / np.cosh(s) ** 2
        return x, dx

    return _de_levels(nodes, _clean(f), spec, extent=3.5)


def quad_half_line(f, a=0.0, spec: QuadratureSpec = DEFAULT_QUAD):
    """Integrate f over [a, inf) with the exp-sinh rule.  Returns (value, error).

    `spec.decay_hint` (rate of exponential decay of f) rescales the variable so
    that slowly decaying integrands still land on the rule's sweet spot.
    """
    scale = 1.0 if not spec.decay_hint else 1.0 / spec.decay_hint

    def nodes(t):
        e = np.exp(0.5 * math.pi * np.sinh(t))
        return a + scale * e, scale * 0.5 * math.pi * np.cosh(t) * e

    return _de_levels(nodes, _clean(f), spec, extent=4.5)


def quad_path(f, path, dpath, spec: QuadratureSpec = DEFAULT_QUAD):
    """Integrate f(z) dz along z = path(x), x in [0, 1]."""
    return quad_interval(lambda x: f(path(x)) * dpath(x), 0.0, 1.0, spec)


def gauss_legendre(n, a=0.0, b=1.0):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def fsum_complex(values) -> complex:
    """Correctly rounded sum of a complex array (real and imaginary parts separately)."""
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


def quad_semi_infinite(f, spec: QuadratureSpec = DEFAULT_QUAD):
    """Integrate f over [0, inf).  Returns (value, error)."""
    return quad_half_line(f, 0.0, spec)


def quad_ray(f, psi, spec: QuadratureSpec = DEFAULT_QUAD):
    """Integrate f(z) dz along the ray z = r e^{i psi}, r in (0, inf)."""
    rot = cmath.exp(1j * psi)
    return quad_half_line(lambda r: f(r * rot) * rot, 0.0, spec)


def ray_gamma(w, nu, psi, spec: QuadratureSpec = DEFAULT_QUAD):
    """int_0^{inf e^{i psi}} e^{-nu t} t^{w-1} dt by quadrature; equals Gamma(w) nu^{-w}
    when |psi| < pi/2, Re(nu e^{i psi}) > 0 and Re w > 0."""
    w, nu = complex(w), complex(nu)
    if not abs(psi) < math.pi / 2 or (nu * cmath.exp(1j * psi)).real <= 0 or w.real <= 0:
        raise ValueError("ray integral diverges for these (w, nu, psi)")
    decay = (nu * cmath.exp(1j * psi)).real
    return quad_ray(lambda t: np.exp(-nu * t + (w - 1) * np.log(t)), psi, spec.with_decay(decay))
