"""Zero side versus prime side of the key equations for one and two characters.

r = 1:  sum_rho (s - rho)^{-w} + trivial ladder + exceptional terms
        = -(1/Gamma(w)) sum chi(p^m) p^{-ms} (m log p)^{w-1} log p
r = 2:  the fourteen families of sums over pairs of zeros and ladders
        = -(1/Gamma(w)) sum_k E_k(w, s)

Zero sums are truncated at the height T.  The part above T is replaced by an
integral against the smooth zero density (1/2pi) log(N x / 2pi), started half
a mean spacing above the last zero, and the size of that correction is what
gets reported as the zero tail.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .cramer import ParameterError
from .lfunctions import ZeroList, l_value
from .primesums import von_mangoldt_sum
from .special import QuadratureSpec, fsum_complex, gamma, hurwitz_zeta, quad_interval
from . import tensor as _tensor

TWO_PI = 2 * math.pi
_TAIL_QUAD = QuadratureSpec(1e-15, 1e-11, 9)


class BranchError(ValueError):
    """A power (s - a)^{-w} would need an argument outside (-pi/2, pi/2)."""


@dataclass(frozen=True)
class KeyEqParams:
    theta: float = 0.05
    epsilon: float = 0.06
    tau0: float = 0.25
    T: float = 150.0
    P: int = 1_000_000
    tol: float = 1e-3
    continued: bool = False
    alpha: float = 0.5


@dataclass
class ResidualReport:
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    zero_tail: float
    prime_tail: float
    quad_error: float
    tolerance: float
    params: dict = field(default_factory=dict)

    @property
    def combined_tail(self):
        return (self.zero_tail + self.prime_tail + self.quad_error) / max(abs(self.lhs) + abs(self.rhs), 1e-300)

    @property
    def passed(self):
        return self.rel_residual < self.tolerance + self.combined_tail

    def to_dict(self):
        d = asdict(self)
        for k in ("lhs", "rhs"):
            d[k] = [d[k].real, d[k].imag]
        d["pass"] = self.passed
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d.pop("pass", None)
        for k in ("lhs", "rhs"):
            d[k] = complex(*d[k])
        return cls(**d)

    def summary(self):
        word = "PASS" if self.passed else "FAIL"
        return (f"{word} rel_residual={self.rel_residual:.3e} tol={self.tolerance:g} "
                f"zero_tail={self.zero_tail:.2e} prime_tail={self.prime_tail:.2e}")


def _report(lhs, rhs, zero_tail, prime_tail, quad_error, tol, params):
    diff = abs(lhs - rhs)
    return ResidualReport(complex(lhs), complex(rhs), float(diff), float(diff / (abs(lhs) + abs(rhs))),
                          float(zero_tail), float(prime_tail), float(quad_error), float(tol), params)


# ---------------------------------------------------------------- region

def region_check(w, s, r, params: KeyEqParams) -> bool:
    """The slanted-strip, half-plane and Re w conditions under which the identity is proved."""
    w, s = complex(w), complex(s)
    tn = math.tan(params.theta)
    slant = s.real * tn - s.imag
    lower = (r / 2 + r * params.tau0) * tn
    return bool(lower < slant < r * tn and s.real > r * (1 + params.epsilon) and w.real > r)


def _require_region(w, s, r, params):
    if not region_check(w, s, r, params) and not params.continued:
        raise ParameterError(f"(w, s) = ({w}, {s}) lies outside the proved region for r = {r}; "
                             "pass continued=True to use the analytic continuation")


# ---------------------------------------------------------------- helpers

def _power(z, w):
    z = np.asarray(z, dtype=complex)
    if np.any(z.real <= 0):
        raise BranchError("power base must have positive real part")
    return np.exp(-w * np.log(z))


def _density(N):
    return lambda x: np.log(N * x / TWO_PI) / TWO_PI


def _tail_start(zl: ZeroList, T, N):
    g = zl.upto(T)
    last = float(g[-1]) if len(g) else T
    return max(last, 1.0) + math.pi / math.log(max(N * last / TWO_PI, math.e))


def _integrate_beyond(fn, start):
    """int_start^inf fn(x) dx for algebraically decaying fn, through x = start / v.

    fn may return a trailing batch dimension."""
    def g(v):
        with np.errstate(all="ignore"):
            x = start / v
            jac = start / (v * v)
            vals = fn(x)
        return vals * jac.reshape(jac.shape + (1,) * (np.ndim(vals) - 1))
    return quad_interval(g, 0.0, 1.0, _TAIL_QUAD)


def ladder(w, shift):
    """sum_{n>=1} (shift + 2n)^{-w} = 2^{-w} zeta(w, shift/2 + 1)."""
    return 2.0 ** (-w) * hurwitz_zeta(w, np.asarray(shift, dtype=complex) / 2 + 1)


def double_ladder(w, shift):
    """sum_{n1, n2 >= 1} (shift + 2 n1 + 2 n2)^{-w}, through sum_{k>=2} (k-1)(shift + 2k)^{-w}."""
    b = complex(shift) / 2
    return complex(2.0 ** (-w) * (hurwitz_zeta(w - 1, b + 2) - (b + 1) * hurwitz_zeta(w, b + 2)))


def _ordinates(zl, T):
    return np.asarray(zl.upto(T), dtype=float)


# ---------------------------------------------------------------- r = 1

def zero_side_r1(w, s, chi, zeros: ZeroList, zeros_bar: ZeroList | None = None, T=None, tail_correction=True):
    """Returns (value, tail).  Zeros below the axis are reflected ordinates of the conjugate character."""
    w, s = complex(w), complex(s)
    zeros_bar = zeros if zeros_bar is None else zeros_bar
    T = zeros.height if T is None else T
    N = chi.modulus
    up = _ordinates(zeros, T)
    down = _ordinates(zeros_bar, T)
    total = fsum_complex(_power(s - 0.5 - 1j * up, w)) + fsum_complex(_power(s - 0.5 + 1j * down, w))
    total += complex(ladder(w, s - (3 + chi.parity) / 2))
    mu0, mut, tau0 = zeros.mu0, zeros.mu_tau0, zeros.tau0
    if mut:
        total += mut * complex(_power(s - 0.5 - tau0, w) + _power(s - 0.5 + tau0, w))
    if mu0:
        total += mu0 * complex(_power(s - 0.5, w))
    d = _density(N)
    tail_val = 0j
    fluct = 0.0
    for zl, sign in ((zeros, -1), (zeros_bar, 1)):
        start = _tail_start(zl, T, N)
        f = lambda x, sign=sign: d(x) * _power(s - 0.5 + sign * 1j * x, w)
        v, _ = _integrate_beyond(f, start)
        tail_val += complex(v)
        fluct += 0.5 * abs(complex(_power(s - 0.5 + sign * 1j * start, w)))
    if tail_correction:
        total += tail_val
    return total, abs(tail_val) * 0.05 + fluct


def prime_side_r1(w, s, chi, P):
    val, tail = von_mangoldt_sum(chi, s, w, P)
    g = complex(gamma(complex(w)))
    return -val / g, tail / abs(g)


def verify_r1(w, s, chi, zeros: ZeroList, params: KeyEqParams = KeyEqParams(), zeros_bar=None) -> ResidualReport:
    _require_region(w, s, 1, params)
    lhs, zt = zero_side_r1(w, s, chi, zeros, zeros_bar, params.T)
    rhs, pt = prime_side_r1(w, s, chi, params.P)
    info = {"r": 1, "label": chi.label, "w": str(complex(w)), "s": str(complex(s)), "T": params.T,
            "P": params.P, "continued": params.continued, "in_region": region_check(w, s, 1, params)}
    return _report(lhs, rhs, zt, pt, 1e-14, params.tol, info)


def hadamard_w2(s, chi, zeros: ZeroList, zeros_bar=None, T=None, radius=0.25, n=32):
    """Zero side at w = 2 against -(d/ds)^2 log L(s, chi), the latter from a circle rule.

    Returns (zero_side, log_derivative_side, zero_tail)."""
    s = complex(s)
    ang = 2 * math.pi * np.arange(n) / n
    pts = s + radius * np.exp(1j * ang)
    logl = np.log(np.asarray(l_value(chi, pts, method="hurwitz")))
    second = 2 * np.mean(logl * np.exp(-2j * ang)) / radius**2
    z, tail = zero_side_r1(2.0, s, chi, zeros, zeros_bar, T)
    return z, complex(-second), tail


# ---------------------------------------------------------------- r = 2

def _pair_block(w, s_shift, g1, g2, sign):
    """sum over pairs of (s_shift + sign i (g1 + g2))^{-w}."""
    tot = np.add.outer(g1, g2)
    return fsum_complex(_power(s_shift + sign * 1j * tot, w))


def _pair_tail(w, s_shift, g1, g2, start1, start2, d1, d2, sign):
    """Density completion of a pair block beyond the truncation heights."""
    f = lambda G: _power(s_shift + sign * 1j * G, w)
    # one zero below T, the other above
    v1, _ = _integrate_beyond(lambda y: d2(y)[:, None] * f(y[:, None] + g1[None, :]), start2)
    v2, _ = _integrate_beyond(lambda x: d1(x)[:, None] * f(x[:, None] + g2[None, :]), start1)
    # both above
    def inner(x):
        v, _ = _integrate_beyond(lambda y: d2(y)[:, None] * f(y[:, None] + x[None, :]), start2)
        return d1(x) * np.asarray(v)
    v3, _ = _integrate_beyond(inner, start1)
    return complex(np.sum(v1) + np.sum(v2) + v3)


def zero_side_r2(w, s, chi1, chi2, zeros1, zeros2, zeros1_bar=None, zeros2_bar=None, T=None, tail_correction=True):
    """Returns (value, tail) for the zero side of the two-character key equation."""
    w, s = complex(w), complex(s)
    chis = (chi1, chi2)
    zs = (zeros1, zeros2)
    zbs = (zeros1_bar or zeros1, zeros2_bar or zeros2)
    T = min(zeros1.height, zeros2.height) if T is None else T
    Ns = [c.modulus for c in chis]
    ds = [_density(N) for N in Ns]
    up = [_ordinates(z, T) for z in zs]
    down = [_ordinates(z, T) for z in zbs]
    s1 = s - 1
    total = -_pair_block(w, s1, down[0], down[1], +1) + _pair_block(w, s1, up[0], up[1], -1)
    tail = 0j
    fluct = 0.0
    st_up = [_tail_start(z, T, N) for z, N in zip(zs, Ns)]
    st_dn = [_tail_start(z, T, N) for z, N in zip(zbs, Ns)]
    tail -= _pair_tail(w, s1, down[0], down[1], st_dn[0], st_dn[1], ds[0], ds[1], +1)
    tail += _pair_tail(w, s1, up[0], up[1], st_up[0], st_up[1], ds[0], ds[1], -1)
    for ia, ib in ((0, 1), (1, 0)):
        kappa = (3 + chis[ib].parity) / 2
        shift = s - 0.5 - 1j * up[ia] - kappa
        total += fsum_complex(ladder(w, shift))
        f = lambda x, ia=ia, kappa=kappa: ds[ia](x) * ladder(w, s - 0.5 - 1j * x - kappa)
        v, _ = _integrate_beyond(f, st_up[ia])
        tail += complex(v)
        # exceptional-zero families
        mu0_a, mut_a, tau_a = zs[ia].mu0, zs[ia].mu_tau0, zs[ia].tau0
        rho_b = 0.5 + 1j * up[ib]
        if mut_a:
            total += mut_a * (fsum_complex(_power(s - rho_b - 0.5 - tau_a, w)) + fsum_complex(_power(s - rho_b - 0.5 + tau_a, w)))
            total += mut_a * complex(ladder(w, s - 2 - chis[ib].parity / 2 - tau_a) + ladder(w, s - 2 - chis[ib].parity / 2 + tau_a))
        if mu0_a:
            total += mu0_a * fsum_complex(_power(s - rho_b - 0.5, w))
            total += mu0_a * complex(ladder(w, s - 2 - chis[ib].parity / 2))
        mu0_b = zs[ib].mu0
        if mut_a and mu0_b:
            total += mut_a * mu0_b * complex(_power(s - 1 - tau_a, w) + _power(s - 1 + tau_a, w))
    total += double_ladder(w, s - 3 - (chi1.parity + chi2.parity) / 2)
    m1, m2 = zs[0].mu_tau0, zs[1].mu_tau0
    if m1 and m2:
        t1, t2 = zs[0].tau0, zs[1].tau0
        for e1 in (-1, 1):
            for e2 in (-1, 1):
                total += m1 * m2 * complex(_power(s - 1 + e1 * t1 + e2 * t2, w))
    if zs[0].mu0 and zs[1].mu0:
        total += zs[0].mu0 * zs[1].mu0 * complex(_power(s - 1, w))
    # a miscounted zero near T shifts each single sum by about one boundary term
    for g, start in zip(up + down, st_up + st_dn):
        fluct += 0.5 * float(np.sum(np.abs(_power(s1 - 1j * (start + np.append(g, 0.0)), w))))
    if tail_correction:
        total += tail
    return total, abs(tail) * 0.05 + fluct


def prime_side_r2(w, s, chi1, chi2, tparams):
    tv = _tensor.e_terms(w, s, chi1, chi2, tparams)
    g = complex(gamma(complex(w)))
    return -tv.total / g, tv.error / abs(g)


def verify_r2(w, s, chi1, chi2, zeros1, zeros2, params: KeyEqParams = KeyEqParams(P=100_000, tol=1e-2),
              zeros1_bar=None, zeros2_bar=None, tparams=None) -> ResidualReport:
    _require_region(w, s, 2, params)
    lhs, zt = zero_side_r2(w, s, chi1, chi2, zeros1, zeros2, zeros1_bar, zeros2_bar, params.T)
    if tparams is None:
        tparams = _tensor.tensor_params(zeros1, zeros2, zeros1_bar, zeros2_bar, P=params.P, alpha=params.alpha, T=params.T)
    rhs, pt = prime_side_r2(w, s, chi1, chi2, tparams)
    info = {"r": 2, "labels": [chi1.label, chi2.label], "w": str(complex(w)), "s": str(complex(s)),
            "T": params.T, "P": params.P, "continued": params.continued, "in_region": region_check(w, s, 2, params)}
    return _report(lhs, rhs, zt, pt, 1e-12, params.tol, info)
