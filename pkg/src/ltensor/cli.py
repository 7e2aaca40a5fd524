"""Command-line front end: characters, zeros, L-values, l_chi tables, the
tensor square and key-equation checks.

Settings come from built-in defaults, then an optional key=value config file,
then command-line flags.  LTENSOR_CACHE_DIR names the zero cache directory.
Exit codes: 0 success/PASS, 1 FAIL, 2 bad input.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import click
import numpy as np

from .characters import character_from_label, character_invariants, enumerate_characters
from .cramer import CramerEvalParams, ParameterError, l_explicit, l_zero_sum
from .keyeq import BranchError, KeyEqParams, ResidualReport, hadamard_w2, verify_r1, verify_r2
from .lfunctions import completed_l, default_cache_dir, functional_equation_residual, l_value, load_character, zeros_for
from .primesums import TruncationError
from .tensor import TensorEvalParams, tensor_params, tensor_square

TENSOR_CSV_HEADER = (["s_re", "s_im", "value_re", "value_im", "log_re", "log_im"]
                     + [f"E{k}_{part}" for k in range(1, 11) for part in ("re", "im")] + ["error"])
THETA_CSV_HEADER = ["t_re", "t_im", "method", "value_re", "value_im", "tail"]
CHARS_CSV_HEADER = ["label", "modulus", "conductor", "primitive", "parity", "real", "gauss_re", "gauss_im"]

_NUMBER_CHARS = re.compile(r"^[0-9.e+\-i]+$")


class InputError(click.ClickException):
    exit_code = 2


def parse_complex(text: str) -> complex:
    """Parse the literal form a+bi (also a, bi, a-bi, i, -i); no spaces."""
    t = (text or "").strip().lower()
    bad = InputError(f"malformed complex number {text!r}; expected a+bi")
    if not t or not _NUMBER_CHARS.match(t) or t.count("i") > 1 or ("i" in t and not t.endswith("i")):
        raise bad
    if not t.endswith("i"):
        re_txt, im_txt = t, None
    else:
        body = t[:-1]
        cut = max((k for k in range(1, len(body)) if body[k] in "+-" and body[k - 1] != "e"), default=0)
        re_txt, im_txt = (body[:cut], body[cut:]) if cut else (None, body)
    try:
        re_part = float(re_txt) if re_txt is not None else 0.0
        if im_txt is None:
            im_part = 0.0
        elif im_txt in ("", "+", "-"):
            im_part = -1.0 if im_txt == "-" else 1.0
        else:
            im_part = float(im_txt)
    except ValueError:
        raise bad from None
    return complex(re_part, im_part)


def parse_grid(text: str) -> list[float]:
    """start:stop:step, inclusive of stop up to rounding."""
    try:
        a, b, h = (float(x) for x in text.split(":"))
    except ValueError:
        raise InputError(f"malformed grid {text!r}; expected start:stop:step") from None
    if h <= 0 or b < a:
        raise InputError(f"grid {text!r} needs step > 0 and stop >= start")
    n = int(math.floor((b - a) / h + 1e-9))
    return [a + k * h for k in range(n + 1)]


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class Config:
    cache_dir: str = ""
    alpha: float = 0.5
    epsilon: float | None = None
    theta: float | None = None
    # None: each command picks its own default
    prime_limit: int | None = None
    zero_height: float = 150.0
    tol: float | None = None
    continued: bool = False
    format: str = "csv"

    def validate(self):
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha = {self.alpha} must lie in (0, 1)")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ParameterError("epsilon must be positive")
        if self.theta is not None and not 0 < self.theta < math.pi / 2:
            raise ParameterError("theta must lie in (0, pi/2)")
        if self.prime_limit is not None and self.prime_limit < 2:
            raise ParameterError("prime limit must be at least 2")
        if not self.zero_height > 0:
            raise ParameterError("zero height must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ParameterError("tolerance must be positive")
        if self.format not in ("csv", "json"):
            raise ParameterError(f"unknown format {self.format!r}")
        # the analytic parameter sets re-check their own constraints
        CramerEvalParams(alpha=self.alpha, epsilon=self.epsilon or 0.5, theta=self.theta,
                         T=self.zero_height).validate()
        return self

    def with_defaults(self, **kw):
        """Fill unset fields (None) with command-specific defaults."""
        return replace(self, **{k: v for k, v in kw.items() if getattr(self, k) is None})

    @property
    def cache_path(self):
        return Path(self.cache_dir) if self.cache_dir else default_cache_dir()


def _coerce(name, raw):
    kind = {f.name: f.type for f in fields(Config)}[name]
    if raw in ("", "none", "None") and "None" in str(kind):
        return None
    if name == "continued":
        if raw.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(raw)
        return raw.lower() in ("true", "1", "yes")
    if name == "prime_limit":
        return int(float(raw))
    if name in ("cache_dir", "format"):
        return raw
    return float(raw)


def load_config(path) -> Config:
    """Line-based key=value file; '#' starts a comment.  Keys use '_' or '-'."""
    values = {}
    known = {f.name for f in fields(Config)}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{n}: expected key=value")
        key, raw = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise InputError(f"{path}:{n}: unknown config key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError:
            raise InputError(f"{path}:{n}: bad value {raw!r} for {key}") from None
    return _validated(Config(**values))


def _validated(cfg):
    try:
        return cfg.validate()
    except ParameterError as exc:
        raise InputError(f"constraint violation: {exc}") from None


def _config_from(opts, **defaults) -> Config:
    cfg = load_config(opts["config"]) if opts.get("config") else Config()
    over = {k: v for k, v in opts.items() if k in {f.name for f in fields(Config)} and v is not None}
    if opts.get("continued"):
        over["continued"] = True
    else:
        over.pop("continued", None)
    return _validated(replace(cfg, **over).with_defaults(**defaults))


def common_options(fn):
    opts = [
        click.option("--config", type=click.Path(exists=True, dir_okay=False), help="key=value config file."),
        click.option("--cache-dir", "cache_dir", default=None, help="Zero cache directory."),
        click.option("--alpha", type=float, default=None, help="Contour parameter alpha in (0, 1)."),
        click.option("--epsilon", type=float, default=None, help="Contour height (verify: region epsilon)."),
        click.option("--theta", type=float, default=None, help="Ray angle (verify: region theta)."),
        click.option("--prime-limit", "prime_limit", type=int, default=None, help="Prime-power cutoff P."),
        click.option("--zero-height", "zero_height", type=float, default=None, help="Zero height T."),
        click.option("--tol", type=float, default=None, help="Pass tolerance."),
        click.option("--continued", is_flag=True, default=False, help="Allow points outside the proved region."),
        click.option("--format", "format", type=click.Choice(["csv", "json"]), default=None),
    ]
    for o in reversed(opts):
        fn = o(fn)
    return fn


def _character(label):
    try:
        return load_character(label)
    except ValueError as exc:
        raise InputError(f"unknown label: {exc}") from None


def _zeros(chi, cfg):
    return zeros_for(chi, cfg.zero_height, cfg.cache_path)


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o).__name__)


def _dumps(obj):
    return json.dumps(obj, default=_json_default, sort_keys=True)


# ---------------------------------------------------------------- tensor records

def tensor_record(tv) -> dict:
    p = tv.params
    return {"s": tv.s, "value": tv.value, "log_value": tv.log_value, "per_term": list(tv.per_term),
            "error_estimate": tv.error_estimate,
            "params": {"alpha": p.alpha, "epsilons": list(p.epsilons), "thetas": list(p.thetas),
                       "P": p.P, "T": p.T, "inner": p.inner, "e6_route": p.e6_route,
                       "mu": [list(m) for m in p.mu]}}


def tensor_record_from_dict(d) -> dict:
    """Re-parse an emitted tensor record and re-validate its parameters."""
    out = {k: complex(*d[k]) for k in ("s", "value", "log_value")}
    out["per_term"] = [complex(*v) for v in d["per_term"]]
    if len(out["per_term"]) != 10:
        raise ValueError("expected ten terms")
    out["error_estimate"] = float(d["error_estimate"])
    p = d["params"]
    out["params"] = TensorEvalParams(alpha=p["alpha"], epsilons=tuple(p["epsilons"]), thetas=tuple(p["thetas"]),
                                     P=int(p["P"]), T=float(p["T"]), inner=p["inner"], e6_route=p["e6_route"],
                                     mu=tuple(tuple(m) for m in p["mu"])).validate()
    return out


def _tensor_row(tv):
    row = [tv.s.real, tv.s.imag, tv.value.real, tv.value.imag, tv.log_value.real, tv.log_value.imag]
    for e in tv.per_term:
        row += [e.real, e.imag]
    return row + [tv.error_estimate]


# ---------------------------------------------------------------- commands

class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (ParameterError, BranchError, TruncationError) as exc:
            raise InputError(f"constraint violation: {exc}") from None


@click.group(cls=_Group)
def main():
    """Dirichlet L-functions, the l_chi series, tensor squares and key equations."""


@main.command("chars")
@click.argument("modulus", type=int)
@common_options
def cmd_chars(modulus, **opts):
    """List the characters mod N with conductor, parity and Gauss sum."""
    cfg = _config_from(opts)
    if modulus < 1:
        raise InputError("modulus must be positive")
    rows = [character_invariants(c) for c in enumerate_characters(modulus)]
    if cfg.format == "json":
        click.echo(_dumps(rows))
        return
    click.echo(_csv([[r["label"], r["modulus"], r["conductor"], r["primitive"], r["parity"], r["real"],
                      r["gauss_sum"].real, r["gauss_sum"].imag] for r in rows], CHARS_CSV_HEADER), nl=False)


@main.command("zeros")
@click.argument("label")
@click.option("--show", type=int, default=10, help="How many ordinates to print.")
@common_options
def cmd_zeros(label, show, **opts):
    """Compute or load zeros up to the zero height and cache them."""
    cfg = _config_from(opts)
    chi = _character(label)
    zl = _zeros(chi, cfg)
    g = zl.upto(cfg.zero_height)
    first = [float(x) for x in g[:show]]
    if cfg.format == "json":
        click.echo(_dumps({"label": label, "height": cfg.zero_height, "count": len(g), "first": first}))
    else:
        click.echo(f"{label}: {len(g)} zeros with 0 < gamma <= {cfg.zero_height:g}")
        for x in first:
            click.echo(f"{x:.10f}")


@main.command("l-value")
@click.argument("label")
@click.option("--s", "s_text", required=True, help="Point a+bi.")
@common_options
def cmd_lvalue(label, s_text, **opts):
    """L(s), the completed function and the functional-equation residual."""
    cfg = _config_from(opts)
    chi = _character(label)
    s = parse_complex(s_text)
    L = complex(l_value(chi, s))
    Lh = complex(completed_l(chi, s))
    res = functional_equation_residual(chi, s)
    if cfg.format == "json":
        click.echo(_dumps({"label": label, "s": s, "L": L, "completed": Lh, "fe_residual": res}))
    else:
        click.echo(_csv([[label, s.real, s.imag, L.real, L.imag, Lh.real, Lh.imag, res]],
                        ["label", "s_re", "s_im", "L_re", "L_im", "completed_re", "completed_im", "fe_residual"]),
                   nl=False)


@main.command("theta")
@click.argument("label")
@click.option("--t-grid", "grid", required=True, help="Radii start:stop:step along the ray.")
@click.option("--phase", type=float, default=0.0, help="Ray argument in radians.")
@common_options
def cmd_theta(label, grid, phase, **opts):
    """l_chi(t) from the zero sum and from the explicit formula, as CSV."""
    cfg = _config_from(opts, prime_limit=1_000_000)
    chi = _character(label)
    zl = _zeros(chi, cfg)
    zb = _zeros(chi.conjugate(), cfg)
    eps = cfg.epsilon if cfg.epsilon is not None else min(1.0, min(zl.first, zb.first) / 2)
    params = CramerEvalParams(alpha=cfg.alpha, epsilon=eps, theta=cfg.theta, T=cfg.zero_height,
                              P=cfg.prime_limit).validate(zl.first, zb.first)
    rows = []
    rot = complex(math.cos(phase), math.sin(phase))
    for x in parse_grid(grid):
        t = x * rot
        if t.real > 0:
            v, tail = l_zero_sum(t, zl, cfg.zero_height)
            rows.append([t.real, t.imag, "zero_sum", v.real, v.imag, tail])
        v = complex(l_explicit(chi, t, params, zl))
        # the prime-power route carries no tail estimate: leave the cell empty
        rows.append([t.real, t.imag, "explicit", v.real, v.imag, None])
    if cfg.format == "json":
        click.echo(_dumps([dict(zip(THETA_CSV_HEADER, r)) for r in rows]))
    else:
        click.echo(_csv(rows, THETA_CSV_HEADER), nl=False)


def _tensor_setup(label1, label2, cfg):
    chi1, chi2 = _character(label1), _character(label2)
    zs = [_zeros(c, cfg) for c in (chi1, chi2, chi1.conjugate(), chi2.conjugate())]
    kw = {"alpha": cfg.alpha, "P": cfg.prime_limit, "T": cfg.zero_height}
    if cfg.epsilon is not None:
        kw["epsilons"] = (cfg.epsilon, cfg.epsilon)
    if cfg.theta is not None:
        kw["thetas"] = (cfg.theta, cfg.theta)
    params = tensor_params(zs[0], zs[1], zs[2], zs[3], **kw)
    params.validate(*(z.first for z in zs))
    return chi1, chi2, params


def _s_points(s_text, s_grid):
    if (s_text is None) == (s_grid is None):
        raise InputError("give exactly one of --s and --s-grid")
    return [parse_complex(s_text)] if s_text is not None else [complex(x) for x in parse_grid(s_grid)]


@main.command("tensor-eval")
@click.argument("label1")
@click.argument("label2")
@click.option("--s", "s_text", default=None, help="Point a+bi with Re s > 2.")
@click.option("--s-grid", "s_grid", default=None, help="Real s values start:stop:step.")
@common_options
def cmd_tensor(label1, label2, s_text, s_grid, **opts):
    """The tensor square and its ten terms at s or along a real grid."""
    cfg = _config_from(opts, prime_limit=100_000)
    pts = _s_points(s_text, s_grid)
    chi1, chi2, params = _tensor_setup(label1, label2, cfg)
    values = [tensor_square(s, chi1, chi2, params) for s in pts]
    if cfg.format == "json":
        click.echo(_dumps([tensor_record(v) for v in values]))
    else:
        click.echo(_csv([_tensor_row(v) for v in values], TENSOR_CSV_HEADER), nl=False)


main.add_command(cmd_tensor, "tensor")


def _emit_report(rep: ResidualReport, cfg, extra=None):
    if cfg.format == "json":
        d = rep.to_dict()
        if extra:
            d["checks"] = extra
        click.echo(_dumps(d))
    else:
        click.echo(rep.summary())
        for name, ok, val in extra or []:
            click.echo(f"{'PASS' if ok else 'FAIL'} {name}={val:.3e}")
    ok = rep.passed and all(ok for _, ok, _ in extra or [])
    sys.exit(0 if ok else 1)


def _keyeq_params(cfg, **defaults):
    kw = dict(defaults)
    kw.update(T=cfg.zero_height, continued=cfg.continued, alpha=cfg.alpha)
    for name in ("theta", "epsilon"):
        if getattr(cfg, name) is not None:
            kw[name] = getattr(cfg, name)
    kw.update(tol=cfg.tol, P=cfg.prime_limit)
    return KeyEqParams(**kw)


@main.command("verify-r1")
@click.argument("label")
@click.option("--w", "w_text", required=True, help="Exponent w, Re w > 1.")
@click.option("--s", "s_text", required=True, help="Point a+bi.")
@click.option("--hadamard-s", default=None, help="Also compare at w = 2 against -(log L)'' at this point.")
@common_options
def cmd_verify_r1(label, w_text, s_text, hadamard_s, **opts):
    """Zero side against prime side of the one-character key equation."""
    cfg = _config_from(opts, prime_limit=1_000_000, tol=1e-3)
    chi = _character(label)
    w, s = parse_complex(w_text), parse_complex(s_text)
    zl, zb = _zeros(chi, cfg), _zeros(chi.conjugate(), cfg)
    rep = verify_r1(w, s, chi, zl, _keyeq_params(cfg), zb)
    extra = []
    if hadamard_s is not None:
        lhs, rhs, tail = hadamard_w2(parse_complex(hadamard_s), chi, zl, zb, cfg.zero_height)
        rel = abs(lhs - rhs) / abs(rhs)
        extra.append(("hadamard_w2_rel", bool(rel < cfg.tol), rel))
    _emit_report(rep, cfg, extra)


@main.command("verify-r2")
@click.argument("label1")
@click.argument("label2")
@click.option("--w", "w_text", required=True, help="Exponent w, Re w > 2.")
@click.option("--s", "s_text", required=True, help="Point a+bi.")
@common_options
def cmd_verify_r2(label1, label2, w_text, s_text, **opts):
    """Pair-of-zeros side against the ten prime-power terms."""
    cfg = _config_from(opts, prime_limit=100_000, tol=1e-2)
    w, s = parse_complex(w_text), parse_complex(s_text)
    chi1, chi2, tparams = _tensor_setup(label1, label2, cfg)
    z = [_zeros(c, cfg) for c in (chi1, chi2, chi1.conjugate(), chi2.conjugate())]
    rep = verify_r2(w, s, chi1, chi2, z[0], z[1], _keyeq_params(cfg), z[2], z[3], tparams)
    _emit_report(rep, cfg)


@main.command("sweep")
@click.argument("label1")
@click.argument("label2")
@click.option("--s", "s_text", default="3", help="Point a+bi with Re s > 2.")
@click.option("--alphas", default="0.3,0.6", help="Comma-separated alpha values.")
@click.option("--epsilons", default="0.4,0.8", help="Comma-separated contour heights.")
@common_options
def cmd_sweep(label1, label2, s_text, alphas, epsilons, **opts):
    """Tensor square over an (alpha, epsilon) grid; FAIL if it moves more than --tol."""
    cfg = _config_from(opts, prime_limit=100_000, tol=1e-6)
    s = parse_complex(s_text)
    try:
        a_vals = [float(x) for x in alphas.split(",")]
        e_vals = [float(x) for x in epsilons.split(",")]
    except ValueError:
        raise InputError("alphas and epsilons must be comma-separated numbers") from None
    rows, logs = [], []
    for a in a_vals:
        for e in e_vals:
            sub = replace(cfg, alpha=a, epsilon=e)
            _validated(sub)
            chi1, chi2, params = _tensor_setup(label1, label2, sub)
            tv = tensor_square(s, chi1, chi2, params)
            logs.append(tv.log_value)
            rows.append([a, e] + _tensor_row(tv))
    ref = logs[0]
    spread = max(abs(v - ref) for v in logs) / abs(ref)
    if cfg.format == "json":
        click.echo(_dumps({"rows": [dict(zip(["alpha", "epsilon"] + TENSOR_CSV_HEADER, r)) for r in rows],
                           "max_rel_spread": spread, "pass": bool(spread < cfg.tol)}))
    else:
        click.echo(_csv(rows, ["alpha", "epsilon"] + TENSOR_CSV_HEADER), nl=False)
        click.echo(f"{'PASS' if spread < cfg.tol else 'FAIL'} max_rel_spread={spread:.3e}", err=True)
    sys.exit(0 if spread < cfg.tol else 1)
