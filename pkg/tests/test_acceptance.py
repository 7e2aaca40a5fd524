"""The nine acceptance criteria, one PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -s` or `python3 tests/test_acceptance.py`.
"""
import cmath
import math
import os
import tempfile
import time
from dataclasses import replace

import numpy as np
import pytest

os.environ.setdefault("LTENSOR_CACHE_DIR", os.path.join(tempfile.gettempdir(), "ltensor-test-cache"))

from ltensor.characters import character_from_label, conjugate, enumerate_characters, gauss_sum, primitive_characters  # noqa: E402
from ltensor.cramer import (  # noqa: E402
    default_params,
    j_function,
    j_reflection_rhs,
    l_continued,
    l_explicit,
    l_small_t_remainder,
    l_zero_sum,
    pole_residue_formula,
    pole_residue_probe,
    reflection_rhs,
)
from ltensor.keyeq import KeyEqParams, hadamard_w2, verify_r1, verify_r2  # noqa: E402
from ltensor.lfunctions import find_zeros, functional_equation_residual, l_value, verify_zero_count, zeros_for  # noqa: E402
from ltensor.primesums import primes_upto  # noqa: E402
from ltensor.special import digamma, gamma, hurwitz_zeta, log_gamma, ray_gamma  # noqa: E402
from ltensor.tensor import e6_prime_route, e_term, residue_contribution, tensor_params, tensor_square  # noqa: E402


def _chi(label):
    return character_from_label(label)


def _zeros(label, T=150.0):
    return zeros_for(_chi(label), T)


def criterion_1():
    worst_g = worst_o = 0.0
    for N in range(1, 51):
        chars = enumerate_characters(N)
        tables = np.array([c.values for c in chars])
        phi = sum(1 for a in range(1, N + 1) if math.gcd(a, N) == 1)
        worst_o = max(worst_o, float(np.max(np.abs(tables @ tables.conj().T - phi * np.eye(len(chars))))))
        # second relation: sum over characters at fixed a
        cols = tables.conj().T @ tables
        units = np.array([math.gcd(a, N) == 1 for a in range(N)])
        worst_o = max(worst_o, float(np.max(np.abs(cols - phi * np.diag(units)))))
        for c in primitive_characters(N):
            worst_g = max(worst_g, abs(abs(gauss_sum(c)) ** 2 - N))
    return worst_g < 1e-10 and worst_o < 1e-10, f"max ||G|^2-N|={worst_g:.1e} max orthogonality={worst_o:.1e}", 1.0


def criterion_2():
    labels = ("3.1", "4.1", "5.1")
    grid = [complex(sig, t) for sig in np.linspace(1.5, 3.0, 5) for t in (-9.0, -1.5, 2.0, 12.5)]
    series = max(abs(l_value(_chi(l), s, "series") - l_value(_chi(l), s, "hurwitz")) for l in labels for s in grid)
    # literal truncated Euler product where its P^{-2} truncation error is below 1e-10
    primes = primes_upto(200_000).astype(float)
    euler = 0.0
    for l in labels:
        chi = _chi(l)
        cp = np.array([chi(int(p)) for p in primes])
        for s in (3.0, 3.0 + 4j, 3.5 - 2j, 4.0 + 7j):
            prod = np.prod(1 / (1 - cp * primes ** (-s)))
            euler = max(euler, abs(prod - l_value(chi, s, "hurwitz")))
    strip = [complex(sig, t) for sig in np.linspace(-0.5, 1.5, 5) for t in (-20.0, 0.7, 6.3, 25.0)]
    fe = max(functional_equation_residual(_chi(l), s) for l in labels for s in strip)
    ok = series < 1e-10 and euler < 1e-10 and fe < 1e-8
    return ok, f"series-vs-hurwitz={series:.1e} euler(Re s>=3)-vs-hurwitz={euler:.1e} fe={fe:.1e}", 10.0


def criterion_3():
    parts, ok = [], True
    for label in ("4.1", "3.1"):
        chi = _chi(label)
        a = find_zeros(chi, 100.0)
        b = find_zeros(chi, 100.0, step=0.025)
        count = verify_zero_count(chi, 100.0)
        n = len(a.ordinates)
        ok &= n == count == len(b.ordinates)
        drift = float(np.max(np.abs(a.ordinates - b.ordinates))) if n == len(b.ordinates) else math.inf
        ok &= drift < 1e-6
        parts.append(f"{label}: {n} zeros, count {count}, halving drift {drift:.1e}")
    return ok, "; ".join(parts), 120.0


def criterion_4():
    chi = _chi("4.1")
    z, zb = _zeros("4.1"), _zeros("4.1")
    p = default_params(z, zb)
    explicit = max(abs(l_explicit(chi, t, p, z) - l_zero_sum(t, z)[0]) - l_zero_sum(t, z)[1]
                   for t in (0.5, 1.0, 1.0 + 0.3j, 1.7 - 0.4j, 3.0))
    refl = 0.0
    for t in (-0.8 + 0.4j, -1.5 + 0.2j, -0.6 + 1.1j):
        refl = max(refl, abs(l_continued(chi, t, p)[0] + l_zero_sum(-t, zb)[0] - reflection_rhs(chi, t, z, -1)))
    for t in (0.8 - 0.4j, 1.5 - 0.2j, 0.6 - 1.1j):
        refl = max(refl, abs(l_zero_sum(t, z)[0] + l_continued(chi.conjugate(), -t, p)[0] - reflection_rhs(chi, t, z, +1)))
    j = max(abs(j_function(t, par) + j_function(-t, par) - j_reflection_rhs(t, par))
            for t in (-1 + 0.5j, -0.7 + 1.3j, -2.2 + 0.2j) for par in (-1, 1))
    ray = [10.0**-k * cmath.exp(0.25j * math.pi) for k in (2, 3, 4)]
    small = [abs(l_small_t_remainder(chi, t, p, z)) for t in ray]
    ok = explicit < 1e-4 and refl < 1e-4 and j < 1e-8 and max(small) < 1.0
    return ok, (f"explicit-minus-tail={explicit:.1e} reflection={refl:.1e} J={j:.1e} "
                f"small-t max={max(small):.3f}"), 300.0


def criterion_5():
    chi = _chi("4.1")
    z = _zeros("4.1")
    p = default_params(z, z)
    single = max(abs(pole_residue_probe(chi, q, 1, p, zeros=z) - pole_residue_formula(chi, q, 1)) / abs(pole_residue_formula(chi, q, 1))
                 for q in (3, 5))
    c3, c4 = _chi("3.1"), chi
    tp = tensor_params(_zeros("3.1"), z, P=100_000)
    pair = 0.0
    for q in (3, 5):
        formula, probe = residue_contribution(q, 1, 3, 5 + 0.16j, c3, c4, tp)
        pair = max(pair, abs(formula - probe) / abs(probe))
    return single < 1e-5 and pair < 1e-5, f"single-L rel={single:.1e} tensor rel={pair:.1e}", 300.0


def criterion_6():
    chi, z = _chi("4.1"), _zeros("4.1")
    rep = verify_r1(3, 4 + 0.155j, chi, z, KeyEqParams(T=150.0, P=1_000_000))
    zs, ls, _ = hadamard_w2(3.0, chi, z, T=150.0)
    had = abs(zs - ls) / abs(ls)
    return rep.rel_residual < 1e-3 and had < 1e-3, f"r=1 rel_residual={rep.rel_residual:.1e} hadamard={had:.1e}", 60.0


def criterion_7():
    c3, c4 = _chi("3.1"), _chi("4.1")
    z3, z4 = _zeros("3.1"), _zeros("4.1")
    res = {w: verify_r2(w, 5 + 0.16j, c3, c4, z3, z4, KeyEqParams(T=150.0, P=100_000, tol=1e-2)).rel_residual
           for w in (3, 4)}
    return res[3] < 1e-2 and res[4] < 1e-3, f"w=3 rel_residual={res[3]:.1e} w=4 rel_residual={res[4]:.1e}", 600.0


def criterion_8():
    c3, c4 = _chi("3.1"), _chi("4.1")
    base = tensor_params(_zeros("3.1"), _zeros("4.1"), P=100_000)
    ref = tensor_square(3, c3, c4, base).value
    spread = 0.0
    for p in [replace(base, alpha=a) for a in (0.3, 0.6)] + [replace(base, epsilons=(e, e)) for e in (0.4, 0.8)]:
        spread = max(spread, abs(tensor_square(3, c3, c4, p).value - ref) / abs(ref))
    e6 = abs(e_term(6, 0, 3, c3, c4, base) - e6_prime_route(3, (c3, c4), base, 1_000_000))
    return spread < 1e-6 and e6 < 1e-8, f"alpha/epsilon rel spread={spread:.1e} E6 routes={e6:.1e}", 600.0


def criterion_9():
    xs = np.linspace(-6.3, 7.1, 23)
    ys = np.linspace(-9.0, 9.0, 19)
    z = (xs[:, None] + 1j * ys[None, :]).ravel()
    z = z[(np.abs(z.imag) > 1e-3) | (z.real > 0)]
    g = np.asarray(gamma(z + 1))
    rec = float(np.max(np.abs(g - z * np.asarray(gamma(z))) / np.abs(g)))
    z = z[(z.real > 0.2) | (np.abs(z.imag) > 0.5)]
    h = 1e-4
    fd = (np.asarray(log_gamma(z + h)) - np.asarray(log_gamma(z - h))) / (2 * h)
    fd = fd.real + 1j * (fd.imag - np.round(fd.imag * h / math.pi) * math.pi / h)
    dg = np.asarray(digamma(z))
    dig = float(np.max(np.abs(dg - fd) / np.maximum(1.0, np.abs(dg))))
    hz = 0.0
    for w in (0.5 + 3j, 2.0, 3.5 - 1j, 7.0 + 10j):
        for a in (0.2, 0.75 + 0.4j, 2.5 - 1j):
            full = complex(hurwitz_zeta(w, a))
            err = abs(full - cmath.exp(-w * cmath.log(a)) - complex(hurwitz_zeta(w, a + 1)))
            hz = max(hz, err / max(1.0, abs(full)))
    ray = max(abs(ray_gamma(w, nu, psi)[0] - gamma(w) * nu ** (-w)) / abs(gamma(w) * nu ** (-w))
              for w, nu, psi in ((2, 1, math.pi / 4), (2.5 + 1j, 1 - 0.5j, 0.7), (1.3, 2.0, -1.2)))
    ok = rec < 1e-12 and dig < 1e-6 and hz < 1e-11 and ray < 1e-10
    return ok, f"gamma rec={rec:.1e} digamma fd={dig:.1e} hurwitz shift={hz:.1e} ray gamma={ray:.1e}", 10.0


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def run(fn):
    t0 = time.perf_counter()
    ok, detail, budget = fn()
    dt = time.perf_counter() - t0
    ok = bool(ok) and dt < budget
    n = fn.__name__.split("_")[1]
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} ({dt:.1f}s of {budget:g}s)"


@pytest.mark.parametrize("fn", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(fn, capsys):
    ok, line = run(fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(fn) for fn in CRITERIA]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
