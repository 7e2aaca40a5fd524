"""Dirichlet L-functions: values, completed function, zeros, and log L along paths."""
from __future__ import annotations

import cmath
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .characters import DirichletCharacter, character_from_label
from .primesums import dirichlet_log_sum
from .special import PoleError, hurwitz_zeta, hurwitz_zeta_with_derivative, log_gamma

log = logging.getLogger(__name__)

SERIES_THRESHOLD = 1.2


class ZeroCountMismatch(RuntimeError):
    pass


class CacheMismatch(ValueError):
    pass


def _kappa(chi):
    return 0 if chi.parity == 1 else 1


# ---------------------------------------------------------------- values

def _l_hurwitz_raw(chi, s):
    N = chi.modulus
    out = np.zeros(s.shape, dtype=complex)
    for a in range(1, N + 1):
        c = chi.values[a % N]
        if c != 0:
            out = out + c * hurwitz_zeta(s, a / N)
    return np.exp(-s * math.log(N)) * out


def _l_hurwitz(chi, s):
    s = np.asarray(s, dtype=complex)
    near = np.abs(s - 1) < 1e-3
    if not np.any(near):
        return _l_hurwitz_raw(chi, s)
    # the a-wise poles at s = 1 cancel; use Cauchy's formula on a small circle
    out = np.empty(s.shape, dtype=complex)
    if np.any(~near):
        out[~near] = _l_hurwitz_raw(chi, s[~near])
    r, n = 0.05, 32
    ring = r * np.exp(2j * np.pi * np.arange(n) / n)
    fr = _l_hurwitz_raw(chi, 1 + ring)
    d = (s[near] - 1)[:, None]
    out[near] = np.mean(fr[None, :] * ring[None, :] / (ring[None, :] - d), axis=1)
    return out


def _l_series(chi, s):
    """Dirichlet series summed directly up to K*N, with the remaining blocks
    expanded in powers of a/(kN) and summed against zeta tails."""
    s = complex(s)
    N = chi.modulus
    K = int(max(40, 2 * abs(s)))
    n = np.arange(1, K * N)
    head = np.sum(chi.values[n % N] * np.exp(-s * np.log(n)))
    a = np.arange(1, N + 1)
    chis = chi.values[a % N]
    ratio = a / N
    tail = 0j
    binom = 1 + 0j          # binom(-s, j)
    powers = np.ones(N)
    for j in range(0, 200):
        moment = np.sum(chis * powers)
        if moment != 0:
            term = binom * moment * hurwitz_zeta(s + j, K)
            tail += term
            if j > 4 and abs(term) < 1e-18 * max(1.0, abs(tail)):
                break
        binom *= (-s - j) / (j + 1)
        powers = powers * ratio
    return head + tail * cmath.exp(-s * math.log(N))


def l_value(chi: DirichletCharacter, s, method="auto"):
    """L(s, chi).  `method`: "auto", "series" (Re s > 1 region) or "hurwitz"."""
    arr = np.asarray(s, dtype=complex)
    if method == "hurwitz" or (method == "auto" and (arr.ndim > 0 or arr.real <= SERIES_THRESHOLD)):
        if method == "auto" and arr.ndim > 0:
            return _l_hurwitz(chi, arr)
        out = _l_hurwitz(chi, arr)
        return complex(out) if arr.ndim == 0 else out
    if arr.ndim > 0:
        return np.array([_l_series(chi, z) for z in arr.ravel()]).reshape(arr.shape)
    return _l_series(chi, complex(arr))


def l_log_derivative(chi, s):
    """L'/L(s, chi) from the Hurwitz decomposition and its w-derivative."""
    s = np.asarray(s, dtype=complex)
    N = chi.modulus
    val = np.zeros(s.shape, dtype=complex)
    der = np.zeros(s.shape, dtype=complex)
    for a in range(1, N + 1):
        c = chi.values[a % N]
        if c != 0:
            z, dz = hurwitz_zeta_with_derivative(s, a / N)
            val = val + c * z
            der = der + c * dz
    out = der / val - math.log(N)
    return complex(out) if out.ndim == 0 else out


def _log_gamma_factor(chi, s):
    k = _kappa(chi)
    z = (np.asarray(s, dtype=complex) + k) / 2
    return -z * math.log(math.pi / chi.modulus) + log_gamma(z)


def completed_l(chi, s):
    """(pi/N)^{-(s+kappa)/2} Gamma((s+kappa)/2) L(s, chi), kappa = (1 - chi(-1))/2."""
    return np.exp(_log_gamma_factor(chi, s)) * l_value(chi, s, method="hurwitz")


def xi(chi, s):
    return completed_l(chi, np.asarray(s, dtype=complex) + 0.5)


def root_number(chi) -> complex:
    k = _kappa(chi)
    return chi.gauss_sum() / (1j**k * math.sqrt(chi.modulus))


def functional_equation_rhs(chi, s):
    s = complex(s)
    N = chi.modulus
    G = chi.gauss_sum()
    eps = chi.parity
    pre = cmath.exp(-s * math.log(N) + (s - 1) * math.log(2 * math.pi) + complex(log_gamma(1 - s)))
    trig = cmath.exp(-0.5j * math.pi * (1 - s)) + eps * cmath.exp(0.5j * math.pi * (1 - s))
    return pre * G * trig * complex(l_value(chi.conjugate(), 1 - s, method="hurwitz"))


def functional_equation_residual(chi, s) -> float:
    """Relative mismatch of the functional equation at s.

    At s = 1, 2, ... the Gamma(1 - s) pole cancels against the trig factor and
    the identity is checked a distance 1e-4 off the real axis instead."""
    s = complex(s)
    try:
        rhs = functional_equation_rhs(chi, s)
    except PoleError:
        s += 1e-4j
        rhs = functional_equation_rhs(chi, s)
    lhs = complex(l_value(chi, s, method="hurwitz"))
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def hardy_z(chi, t):
    """Real-valued rotation of L(1/2 + it): e^{i theta(t)} L with |.| = |L|."""
    t = np.asarray(t, dtype=float)
    s = 0.5 + 1j * t
    phase = np.imag(_log_gamma_factor(chi, s)) - 0.5 * cmath.phase(root_number(chi))
    vals = np.exp(1j * phase) * l_value(chi, s, method="hurwitz")
    return vals


# ---------------------------------------------------------------- zeros

@dataclass
class ZeroList:
    label: str
    height: float
    ordinates: np.ndarray
    mu0: int = 0
    mu_tau0: int = 0
    tau0: float = 0.25
    meta: dict = field(default_factory=dict)

    def upto(self, T):
        return self.ordinates[self.ordinates <= T]

    @property
    def first(self):
        return float(self.ordinates[0]) if len(self.ordinates) else math.inf


def _scan_roots(chi, a, b, h):
    ts = np.arange(a, b + h, h)
    ts = ts[ts <= b] if ts[-1] > b else ts
    if ts[-1] < b:
        ts = np.append(ts, b)
    z = hardy_z(chi, ts)
    zr = z.real
    roots = []
    f = lambda x: complex(hardy_z(chi, np.array([x]))[0]).real
    for i in np.flatnonzero(np.sign(zr[:-1]) * np.sign(zr[1:]) < 0):
        roots.append(brentq(f, ts[i], ts[i + 1], xtol=1e-13, rtol=1e-15, maxiter=200))
    roots.extend(ts[np.flatnonzero(zr == 0.0)].tolist())
    return sorted(roots), float(np.max(np.abs(z.imag) / np.maximum(1.0, np.abs(z))))


def _arg_increments(fn, z0, z1, max_step, depth=0):
    """Accumulated arg change of fn along the segment [z0, z1]."""
    n = max(4, int(math.ceil(abs(z1 - z0) / max_step)))
    zs = z0 + (z1 - z0) * np.linspace(0, 1, n + 1)
    vals = fn(zs)
    total = 0.0
    for i in range(n):
        d = cmath.phase(vals[i + 1] / vals[i])
        if abs(d) > 0.4 and depth < 30:
            total += _arg_increments(fn, zs[i], zs[i + 1], abs(zs[i + 1] - zs[i]) / 8, depth + 1)
        else:
            total += d
    return total


def count_zeros_rectangle(chi, T, left=-0.5, right=1.5) -> float:
    """(1/2 pi) * change of arg of the completed function around [left, right] x [0, T]."""
    k = _kappa(chi)

    def fn(z):
        z = np.asarray(z, dtype=complex)
        # nudge points sitting on a pole of the gamma factor (cancelled by a trivial zero)
        w = (z + k) / 2
        near = (np.abs(w - np.round(w.real)) < 1e-9) & (w.real <= 0)
        z = np.where(near, z + 1e-7j, z)
        lg = _log_gamma_factor(chi, z)
        lv = l_value(chi, z, method="hurwitz")
        # normalise magnitude to keep ratios finite; only the phase is used
        return np.exp(1j * lg.imag) * lv

    corners = [complex(left, 0), complex(right, 0), complex(right, T), complex(left, T), complex(left, 0)]
    total = sum(_arg_increments(fn, corners[i], corners[i + 1], 0.05) for i in range(4))
    return total / (2 * math.pi)


def mu_data(chi, tol=1e-8):
    """(mu0, mu_tau0, tau0): multiplicity of the zero at s = 1/2 and of a real
    zero off the critical point.  Real zeros are searched for real characters only."""
    mu0 = 1 if abs(complex(l_value(chi, 0.5, method="hurwitz"))) < tol else 0
    if not chi.is_real:
        return mu0, 0, 0.25
    sig = np.linspace(0.501, 0.999, 499)
    vals = np.real(l_value(chi, sig.astype(complex), method="hurwitz"))
    idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if len(idx):
        f = lambda x: complex(l_value(chi, x, method="hurwitz")).real
        beta = brentq(f, sig[idx[0]], sig[idx[0] + 1])
        return mu0, 1, beta - 0.5
    return mu0, 0, 0.25


def find_zeros(chi, T, step=0.05, check_count=True) -> ZeroList:
    """Ordinates 0 < gamma <= T of zeros of L(s, chi) on the critical line."""
    roots, imag_leak = _scan_roots(chi, 1e-6, T, step)
    if imag_leak > 1e-8:
        log.warning("rotated L-function not real to 1e-8 (leak %.2e)", imag_leak)
    if check_count:
        expected = count_zeros_rectangle(chi, T)
        n_exp = int(round(expected))
        if abs(expected - n_exp) > 0.1:
            raise ZeroCountMismatch(f"{chi.label}: non-integral winding {expected:.4f}; is T on a zero?")
        if n_exp != len(roots):
            log.info("%s: %d sign changes vs %d zeros, rescanning finer", chi.label, len(roots), n_exp)
            roots, _ = _scan_roots(chi, 1e-6, T, step / 8)
        if n_exp != len(roots):
            raise ZeroCountMismatch(
                f"{chi.label}: argument principle gives {n_exp} zeros up to {T}, scan found {len(roots)}")
    mu0, mu1, tau0 = mu_data(chi)
    return ZeroList(chi.label, float(T), np.array(roots), mu0, mu1, tau0)


def verify_zero_count(chi, T) -> int:
    return int(round(count_zeros_rectangle(chi, T)))


# ---------------------------------------------------------------- cache files

def save_zeros(zl: ZeroList, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"label={zl.label} T={zl.height!r} mu0={zl.mu0} mu_tau0={zl.mu_tau0} tau0={zl.tau0!r}"]
    lines += [repr(float(g)) for g in zl.ordinates]
    path.write_text("\n".join(lines) + "\n")


def _parse_header(line):
    fields = dict(item.split("=", 1) for item in line.split())
    return (fields["label"], float(fields["T"]), int(fields["mu0"]),
            int(fields["mu_tau0"]), float(fields["tau0"]))


def load_zeros(path) -> ZeroList:
    text = Path(path).read_text().splitlines()
    label, T, mu0, mu1, tau0 = _parse_header(text[0])
    ords = np.array([float(x) for x in text[1:] if x.strip()])
    return ZeroList(label, T, ords, mu0, mu1, tau0)


def ingest_zeros(chi, path, zero_tol=1e-8, value_tol=1e-7) -> ZeroList:
    """Load an external ordinate list and check it: sorted, each ordinate a
    zero, and the count matching the argument principle.

    |completed L| is exponentially small high up the critical line, so each
    ordinate is also checked against |L(1/2 + i gamma)| < value_tol.
    """
    zl = load_zeros(path)
    if zl.label != chi.label:
        raise CacheMismatch(f"file is for {zl.label}, not {chi.label}")
    g = zl.ordinates
    if np.any(np.diff(g) <= 0):
        raise CacheMismatch("ordinates are not strictly increasing")
    s = 0.5 + 1j * g
    lam = np.abs(completed_l(chi, s))
    lv = np.abs(l_value(chi, s, method="hurwitz"))
    bad = np.flatnonzero((lam >= zero_tol) | (lv >= value_tol))
    if len(bad):
        raise CacheMismatch(f"ordinate {g[bad[0]]!r} is not a zero (|L| = {lv[bad[0]]:.3g})")
    n = verify_zero_count(chi, zl.height)
    if n != len(g[g <= zl.height]):
        raise CacheMismatch(f"argument principle gives {n} zeros up to {zl.height}, file has {len(g)}")
    return zl


def default_cache_dir():
    return Path(os.environ.get("LTENSOR_CACHE_DIR", Path.home() / ".cache" / "ltensor"))


_MEMO: dict = {}


def zeros_for(chi, T, cache_dir=None) -> ZeroList:
    """Zeros up to height T, reusing an on-disk cache when it reaches that high."""
    key = (chi.label, float(T))
    for (lab, h), zl in _MEMO.items():
        if lab == chi.label and h >= T:
            return zl
    cdir = Path(cache_dir) if cache_dir else default_cache_dir()
    path = cdir / f"zeros_{chi.label}.txt"
    if path.exists():
        try:
            zl = load_zeros(path)
            if zl.label == chi.label and zl.height >= T:
                _MEMO[(zl.label, zl.height)] = zl
                return zl
        except (OSError, ValueError, KeyError):
            log.warning("ignoring unreadable zero cache %s", path)
    zl = find_zeros(chi, T)
    try:
        save_zeros(zl, path)
    except OSError:
        log.warning("could not write zero cache %s", path)
    _MEMO[key] = zl
    return zl


# ---------------------------------------------------------------- log L on paths

@dataclass
class BranchedLogSamples:
    nodes: np.ndarray
    values: np.ndarray


def _track(chi, z_from, z_to, log_from, max_step=0.05):
    n = max(2, int(math.ceil(abs(z_to - z_from) / max_step)))
    zs = z_from + (z_to - z_from) * np.linspace(0, 1, n + 1)
    lv = l_value(chi, zs, method="hurwitz")
    cur = log_from
    prev = lv[0]
    for v in lv[1:]:
        d = cmath.log(v / prev)
        if abs(d.imag) > 0.5:
            raise RuntimeError("log L tracking step too large; L nearly vanishes on the path")
        cur += d
        prev = v
    return cur


def anchored_log_l(chi, z, limit=100_000) -> complex:
    """log L at a point with Re z >= 1: principal log of L(z), shifted by the
    multiple of 2 pi i picked out by the prime sum at 2 + i Im z."""
    z = complex(z)
    if z.real < 1:
        raise ValueError("anchor must have Re >= 1")
    a = complex(2.0, z.imag)
    est, _ = dirichlet_log_sum(chi, a, limit)
    la = cmath.log(complex(l_value(chi, a, method="hurwitz")))
    k = round((est - la).imag / (2 * math.pi))
    la += 2j * math.pi * k
    return _track(chi, a, z, la) if z != a else la


def log_l_along_path(chi, nodes) -> BranchedLogSamples:
    """Continuous log L at an ordered sequence of points; nodes[0] must have Re >= 1."""
    nodes = np.asarray(nodes, dtype=complex)
    vals = np.empty(len(nodes), dtype=complex)
    vals[0] = anchored_log_l(chi, nodes[0])
    for i in range(1, len(nodes)):
        step = max(0.01, min(0.05, abs(nodes[i] - nodes[i - 1]) / 4))
        vals[i] = _track(chi, nodes[i - 1], nodes[i], vals[i - 1], max_step=step)
    return BranchedLogSamples(nodes, vals)


def load_character(label) -> DirichletCharacter:
    chi = character_from_label(label)
    if not chi.is_primitive or chi.is_principal:
        raise ValueError(f"{label} is not a primitive non-principal character")
    return chi
