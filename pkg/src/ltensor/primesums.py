"""Prime sieving, prime-power tables and weighted sums over prime powers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc, gamma as _real_gamma

from .special import fsum_complex

SEGMENT = 1 << 18


class TruncationError(ValueError):
    """A truncated prime sum was requested outside its convergence region."""


@dataclass(frozen=True)
class PrimePowerTerm:
    p: int
    m: int
    value: int
    log_p: float


@dataclass(frozen=True)
class PrimePowerTable:
    """Column arrays for all prime powers p^m <= limit, sorted by value."""
    limit: int
    p: np.ndarray
    m: np.ndarray
    value: np.ndarray
    log_p: np.ndarray

    def __len__(self):
        return len(self.p)

    @property
    def log_value(self):
        return self.m * self.log_p

    def restrict(self, limit):
        k = int(np.searchsorted(self.value, limit, side="right"))
        return PrimePowerTable(limit, self.p[:k], self.m[:k], self.value[:k], self.log_p[:k])

    def character_values(self, chi):
        return chi.values[np.mod(self.value, chi.modulus)]


def _base_primes(limit):
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit with a segmented sieve of Eratosthenes."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    root = int(math.isqrt(limit))
    base = _base_primes(root)
    chunks = [base]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            seg[start - lo :: p] = False
        chunks.append(np.flatnonzero(seg) + lo)
        lo = hi
    return np.concatenate(chunks).astype(np.int64)


@lru_cache(maxsize=8)
def prime_power_table(limit: int) -> PrimePowerTable:
    primes = primes_upto(limit)
    ps, ms, vals = [primes], [np.ones_like(primes)], [primes.copy()]
    m = 2
    while True:
        if 2**m > limit:
            break
        small = primes[primes <= int(round(limit ** (1.0 / m))) + 1]
        small = small[small**m <= limit]
        ps.append(small)
        ms.append(np.full_like(small, m))
        vals.append(small**m)
        m += 1
    p = np.concatenate(ps)
    mm = np.concatenate(ms)
    v = np.concatenate(vals)
    order = np.argsort(v, kind="stable")
    p, mm, v = p[order], mm[order], v[order]
    return PrimePowerTable(limit, p, mm, v, np.log(p.astype(float)))


def prime_powers(limit: int):
    """Iterate PrimePowerTerm(p, m, p^m, log p) with p^m <= limit, increasing."""
    t = prime_power_table(int(limit))
    for p, m, v, lp in zip(t.p.tolist(), t.m.tolist(), t.value.tolist(), t.log_p.tolist()):
        yield PrimePowerTerm(p, m, v, lp)


def tail_estimate(s, w, limit) -> float:
    """Bound for sum_{n > limit} n^{-Re s} (log n)^{Re w}, an envelope of the
    von Mangoldt sum tail (|chi| <= 1, Lambda(n) <= log n)."""
    sigma = complex(s).real
    a = complex(w).real
    if sigma <= 1:
        return math.inf
    L = float(limit)
    lam = sigma - 1.0
    x0 = lam * math.log(L)
    if a + 1 > 0 and math.log(L) > max(a, 0.0) / sigma:
        # int_L^inf x^{-sigma} (log x)^a dx = Gamma(a+1, x0) / lam^{a+1}
        return float(gammaincc(a + 1, x0) * _real_gamma(a + 1) / lam ** (a + 1))
    # crude monotone bound with a shifted start
    return float(max(math.log(L), 1.0) ** max(a, 0.0) * L ** (1 - sigma) / lam * 2.0)


def von_mangoldt_sum(chi, s, w, limit, force=False):
    """sum_{p^m <= limit} chi(p^m) p^{-m s} (m log p)^{w-1} log p.

    Returns (value, tail_bound).  Raises TruncationError when Re s <= 1 unless
    `force` is set (conditional convergence for non-principal characters).
    """
    s = complex(s)
    w = complex(w)
    if s.real <= 1 and not force:
        raise TruncationError(f"Re s = {s.real} <= 1: prime sum does not converge absolutely")
    t = prime_power_table(int(limit))
    c = t.log_value
    terms = t.character_values(chi) * np.exp(-s * c) * np.exp((w - 1) * np.log(c)) * t.log_p
    return fsum_complex(terms), tail_estimate(s, w, limit)


def dirichlet_log_sum(chi, s, limit, force=False):
    """sum_{p^m <= limit} chi(p^m) p^{-m s} / m, a truncation of log L(s, chi)."""
    s = complex(s)
    if s.real <= 1 and not force:
        raise TruncationError(f"Re s = {s.real} <= 1: prime sum does not converge absolutely")
    t = prime_power_table(int(limit))
    terms = t.character_values(chi) * np.exp(-s * t.log_value) / t.m
    return fsum_complex(terms), tail_estimate(s, 1.0, limit)
