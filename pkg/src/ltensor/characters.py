"""Dirichlet characters modulo N, built from primitive roots via CRT.

Labels are "N.k": k indexes the characters mod N in lexicographic order of
their exponent vectors (the principal character is N.0).  Components are
ordered by prime; the 2-part of a modulus 2^e with e >= 3 contributes two
generators, -1 and 5, in that order.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _smallest_primitive_root(p: int, e: int) -> int:
    mod = p**e
    phi = p ** (e - 1) * (p - 1)
    qs = [q for q, _ in factorize(phi)]
    for g in range(2, mod):
        if math.gcd(g, p) == 1 and all(pow(g, phi // q, mod) != 1 for q in qs):
            return g
    return 1


def _components(N: int):
    """List of (modulus, generator, order) for the cyclic factors of (Z/N)^*."""
    comps = []
    for p, e in factorize(N):
        q = p**e
        if p == 2:
            if e == 2:
                comps.append((q, q - 1, 2))
            elif e >= 3:
                comps.append((q, q - 1, 2))
                comps.append((q, 5, 2 ** (e - 2)))
        else:
            comps.append((q, _smallest_primitive_root(p, e), p ** (e - 1) * (p - 1)))
    return comps


def _discrete_logs(N: int, comps):
    """Array logs[c, n] = exponent of component c's generator at unit n mod N, -1 on non-units."""
    logs = -np.ones((len(comps), N), dtype=np.int64)
    units = [n for n in range(N) if math.gcd(n, N) == 1]
    i = 0
    while i < len(comps):
        q, g, order = comps[i]
        if q % 8 == 0 and g == q - 1:
            # 2-part with two generators: n = (-1)^a 5^b mod q
            five = {pow(5, b, q): b for b in range(comps[i + 1][2])}
            for n in units:
                r = n % q
                a = 0 if r % 4 == 1 else 1
                logs[i, n] = a
                logs[i + 1, n] = five[r if a == 0 else (q - r) % q]
            i += 2
            continue
        table = {pow(g, b, q): b for b in range(order)}
        for n in units:
            logs[i, n] = table[n % q]
        i += 1
    return logs


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    index: int
    exponents: tuple[int, ...]
    orders: tuple[int, ...]
    values: np.ndarray = field(repr=False, compare=False)

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    def __call__(self, n):
        n = np.asarray(n)
        out = self.values[np.mod(n, self.modulus)]
        return out[()] if out.ndim == 0 else out

    @property
    def parity(self) -> int:
        return int(round(self.values[self.modulus - 1].real)) if self.modulus > 1 else 1

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.values.imag) < 1e-12))

    @property
    def is_principal(self) -> bool:
        return all(a == 0 for a in self.exponents)

    @property
    def conductor(self) -> int:
        return conductor(self)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def conjugate(self) -> "DirichletCharacter":
        return conjugate(self)

    def gauss_sum(self) -> complex:
        return gauss_sum(self)


def _build(N, exps, comps, logs):
    vals = np.zeros(N, dtype=complex)
    units = logs[0] >= 0 if len(comps) else np.array([math.gcd(n, N) == 1 for n in range(N)])
    phase = np.zeros(N, dtype=float)
    for c, ((_, _, order), a) in enumerate(zip(comps, exps)):
        phase += (a * logs[c] % order) / order
    phase %= 1.0
    vals[units] = np.exp(2j * np.pi * phase[units])
    # snap to exact values on the real and imaginary axes
    vals.real[np.abs(vals.real) < 1e-15] = 0.0
    vals.imag[np.abs(vals.imag) < 1e-15] = 0.0
    return vals


def enumerate_characters(N: int) -> list[DirichletCharacter]:
    if N < 1:
        raise ValueError("modulus must be positive")
    if N == 1:
        return [DirichletCharacter(1, 0, (), (), np.ones(1, dtype=complex))]
    comps = _components(N)
    logs = _discrete_logs(N, comps)
    orders = tuple(o for _, _, o in comps)
    out = []
    for idx, exps in enumerate(itertools.product(*[range(o) for o in orders])):
        out.append(DirichletCharacter(N, idx, tuple(exps), orders, _build(N, exps, comps, logs)))
    return out


def character_from_label(label: str) -> DirichletCharacter:
    try:
        n_str, k_str = label.split(".")
        N, k = int(n_str), int(k_str)
    except ValueError:
        raise ValueError(f"bad character label {label!r}; expected N.k") from None
    chars = enumerate_characters(N)
    if not 0 <= k < len(chars):
        raise ValueError(f"label {label!r}: index out of range (mod {N} has {len(chars)} characters)")
    return chars[k]


def conductor(chi: DirichletCharacter) -> int:
    N = chi.modulus
    for d in sorted(d for d in range(1, N + 1) if N % d == 0):
        ok = True
        for n in range(1, N, d):
            if math.gcd(n, N) == 1 and abs(chi.values[n] - 1) > 1e-9:
                ok = False
                break
        if ok:
            return d
    return N


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    exps = tuple((-a) % o for a, o in zip(chi.exponents, chi.orders))
    idx = 0
    for a, o in zip(exps, chi.orders):
        idx = idx * o + a
    return DirichletCharacter(chi.modulus, idx, exps, chi.orders, np.conj(chi.values))


def gauss_sum(chi: DirichletCharacter) -> complex:
    N = chi.modulus
    terms = [chi.values[a % N] * cmath.exp(2j * math.pi * a / N) for a in range(1, N + 1)]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def character_invariants(chi: DirichletCharacter) -> dict:
    return {
        "label": chi.label,
        "modulus": chi.modulus,
        "conductor": chi.conductor,
        "primitive": chi.is_primitive,
        "parity": chi.parity,
        "real": chi.is_real,
        "gauss_sum": chi.gauss_sum(),
    }


def primitive_characters(N: int) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(N) if c.is_primitive]
