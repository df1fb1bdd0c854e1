"""Command-line front end: ``bergman <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

import mpmath

from . import asymptotics, domains, faber, orthogonal, reconstruct
from .numerics import default_precision

UNDEFINED = "NA"


@dataclass
class RunConfig:
    domain: str
    degree: int
    precision: int
    method: str = orthogonal.ARNOLDI
    n_from: int | None = None
    n_to: int | None = None
    step: int = 1
    out: str | None = None
    fmt: str = "csv"
    s_digits: int | None = None
    samples: int = 2048
    label_offset: int = 0

    def __post_init__(self):
        if self.precision < 50:
            raise ValueError("precision must be at least 50 digits")
        if self.degree is not None and self.degree < 0:
            raise ValueError("degree must be nonnegative")


# ---------------------------------------------------------------- formatting

def _decimal(x) -> Decimal:
    return Decimal(mpmath.nstr(mpmath.mpf(x), mpmath.mp.dps, strip_zeros=False, min_fixed=-mpmath.inf,
                               max_fixed=mpmath.inf))


def fixed(x, places: int) -> str:
    """``x`` rounded half-even to ``places`` decimals."""
    if x is None:
        return UNDEFINED
    q = _decimal(x).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN)
    if q == 0:
        q = abs(q)
    return f"{q:f}"


def sig(x, digits: int) -> str:
    """``x`` in scientific notation with ``digits`` significant figures, half-even."""
    if x is None:
        return UNDEFINED
    d = _decimal(x)
    if d == 0:
        return "0"
    e = d.adjusted()
    q = d.scaleb(-e).quantize(Decimal(1).scaleb(-(digits - 1)), rounding=ROUND_HALF_EVEN)
    if abs(q) >= 10:
        e += 1
        q = d.scaleb(-e).quantize(Decimal(1).scaleb(-(digits - 1)), rounding=ROUND_HALF_EVEN)
    return f"{q:f}e{e:+03d}"


def full(x) -> str:
    return mpmath.nstr(x, 20)


# ------------------------------------------------------------------ helpers

def resolve_domain(spec: str) -> domains.Domain:
    """Builtin name, inline JSON, or path to a JSON file."""
    spec = spec.strip()
    if spec.startswith("{"):
        return domains.from_json(json.loads(spec))
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return domains.from_json(json.load(fh))
    return domains.from_name(spec)


def _basis(d, n, method):
    M = domains.moment_matrix(d, n)
    return M, orthogonal.build_basis(M, n, method)


def _basis_partial(d, n, method):
    """Basis up to ``n``, or the longest prefix before precision ran out."""
    M = domains.moment_matrix(d, n)
    try:
        return M, orthogonal.build_basis(M, n, method), None
    except orthogonal.PrecisionExhausted as exc:
        if exc.step <= 1:
            raise
        return M, orthogonal.build_basis(M, exc.step - 1, method), exc


def _range(cfg: RunConfig, default_from: int = 1) -> list:
    lo = default_from if cfg.n_from is None else cfg.n_from
    hi = cfg.degree if cfg.n_to is None else cfg.n_to
    if hi is None or hi < lo:
        raise ValueError("empty degree range")
    return list(range(lo, hi + 1, max(cfg.step, 1)))


def _emit(header, rows, cfg: RunConfig):
    if cfg.fmt == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    return text


# ------------------------------------------------------------------ commands

def cmd_moments(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    M = domains.moment_matrix(d, cfg.degree)
    rows = []
    for m in range(M.n + 1):
        for k in range(M.n + 1):
            v = M[m, k]
            rows.append([m, k, full(v.real), full(v.imag)])
    return ["m", "k", "re", "im"], rows, None


def cmd_alpha_table(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    ns = _range(cfg)
    cap = domains.exact_capacity(d)
    if cap is None:
        raise ValueError("alpha-table needs a domain with known capacity")
    gamma = 1 / mpmath.mpf(mpmath.re(cap))
    _, B, err = _basis_partial(d, ns[-1], cfg.method)
    digits = 6 if cfg.s_digits is None else cfg.s_digits
    # rows are labelled n + label_offset; the slope uses the labels
    off = cfg.label_offset
    rows, prev = [], None
    for n in ns:
        if n > B.n:
            break
        a = asymptotics.alpha_n(B.lambdas[n], gamma, n)
        s = None
        if prev is not None and prev[1] > 0 and a > 0 and n + off > 0:
            s = asymptotics.decay_exponent(prev[1], a, n + off, n - prev[0])
        rows.append([n + off, fixed(a, 12), fixed(s, digits) if s is not None else UNDEFINED])
        prev = (n, a)
    return ["n", "alpha", "s"], rows, err


def cmd_capacity_table(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    ns = _range(cfg)
    _, B, err = _basis_partial(d, ns[-1], cfg.method)
    cap = reconstruct.default_capacity(d)
    digits = 4 if cfg.s_digits is None else cfg.s_digits
    rows = []
    for r in reconstruct.capacity_rows(B, [n for n in ns if n <= B.n], cap):
        rows.append([r.n, fixed(r.b, 9), sig(r.t, 3), fixed(r.s, digits) if r.s is not None else UNDEFINED])
    return ["n", "b_n", "t_n", "s"], rows, err


def cmd_reconstruct(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    n = cfg.degree
    _, B = _basis(d, n, cfg.method)
    rmap = reconstruct.recover(B, n)
    samples = reconstruct.boundary_samples(rmap, cfg.samples)
    dist = reconstruct.curve_distance(samples, d, cfg.samples)
    return rmap, dist


def cmd_zeros(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    ns = _range(cfg)
    _, B, err = _basis_partial(d, ns[-1], cfg.method)
    header = ["n", "count", "max_hull_violation", "min_modulus_phi"]
    rows = []
    for n in ns:
        if n > B.n:
            break
        try:
            rep = asymptotics.root_report(B, d, n)
        except asymptotics.RootFindingError as exc:
            return header, rows, exc
        mphi = UNDEFINED if rep.min_modulus_phi is None else full(rep.min_modulus_phi)
        rows.append([n, len(rep.roots), sig(rep.max_hull_violation, 6), mphi])
    return header, rows, err


def cmd_stability(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    ns = _range(cfg)
    N = ns[-1]
    M = domains.moment_matrix(d, N)
    cols, err = {}, None
    for method in (orthogonal.CONVENTIONAL, orthogonal.ARNOLDI):
        try:
            B = orthogonal.build_basis(M, N, method)
        except orthogonal.PrecisionExhausted as exc:
            err = exc
            B = orthogonal.build_basis(M, exc.step - 1, method) if exc.step > 1 else None
        cols[method] = B
    rows = []
    for k in ns:
        vals = []
        for method in (orthogonal.CONVENTIONAL, orthogonal.ARNOLDI):
            B = cols[method]
            if B is None or k > B.n:
                vals.append(UNDEFINED)
            else:
                vals.append(sig(orthogonal.instability_indicator(M, B, method, k), 12))
        rows.append([k, *vals])
    return ["k", "I_conventional", "I_arnoldi"], rows, err


def cmd_faber_check(cfg: RunConfig):
    d = resolve_domain(cfg.domain)
    ns = _range(cfg, default_from=0)
    psi = domains.exact_psi(d)
    if psi is None or not psi.exact:
        raise ValueError("faber-check needs a disk or an exterior-map domain")
    N = ns[-1]
    M = domains.moment_matrix(d, N)
    B = orthogonal.build_basis(M, N, cfg.method)
    F = faber.faber_set(psi, N + 1)
    gamma = 1 / abs(psi.coeff(1))
    rows = []
    for n in ns:
        dec = faber.beta_eps(M, B, F, gamma, n)
        rows.append([n, sig(dec.alpha, 12), sig(dec.beta, 12), sig(dec.eps, 12), sig(dec.residual, 3)])
    return ["n", "alpha", "beta", "eps", "residual"], rows, None


TABLE_COMMANDS = {
    "moments": cmd_moments,
    "alpha-table": cmd_alpha_table,
    "capacity-table": cmd_capacity_table,
    "zeros": cmd_zeros,
    "stability": cmd_stability,
    "faber-check": cmd_faber_check,
}


# ------------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bergman", description="Bergman polynomial toolkit")
    p.add_argument("command", choices=[*TABLE_COMMANDS, "reconstruct"])
    p.add_argument("--domain", default="unit_disk", help="builtin name, JSON text or JSON file")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--from", dest="n_from", type=int, default=None)
    p.add_argument("--to", dest="n_to", type=int, default=None)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--precision", type=int, default=None, help="decimal digits (default $BERGMAN_PRECISION or 200)")
    p.add_argument("--method", choices=[orthogonal.ARNOLDI, orthogonal.CONVENTIONAL], default=orthogonal.ARNOLDI)
    p.add_argument("--out", default=None)
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    p.add_argument("--s-digits", type=int, default=None)
    p.add_argument("--samples", type=int, default=2048, help="boundary samples for reconstruct")
    p.add_argument("--label-offset", type=int, default=0,
                   help="alpha-table: print degree n as row n + OFFSET")
    return p


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _run_reconstruct(cfg: RunConfig) -> int:
    if cfg.degree is None or cfg.degree < 1:
        raise ValueError("reconstruct needs --degree >= 1")
    rmap, dist = cmd_reconstruct(cfg)
    report = f"n,curve_distance\n{rmap.n},{dist!r}\n"
    if cfg.out is None:
        sys.stdout.write(reconstruct.recovered_map_json(rmap) + "\n")
        sys.stdout.write(report)
    else:
        _write(cfg.out + ".map.json", reconstruct.recovered_map_json(rmap) + "\n")
        _write(cfg.out + ".boundary.csv", reconstruct.boundary_csv(rmap, cfg.samples))
        _write(cfg.out + ".distance.csv", report)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    prec = default_precision() if args.precision is None else args.precision
    try:
        cfg = RunConfig(args.domain, args.degree, prec, args.method, args.n_from, args.n_to,
                        args.step, args.out, args.fmt, args.s_digits, args.samples, args.label_offset)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.degree is None and cfg.n_to is None:
        cfg.degree = 1 if args.command != "moments" else 0
    with mpmath.workdps(cfg.precision):
        try:
            if args.command == "reconstruct":
                return _run_reconstruct(cfg)
            header, rows, err = TABLE_COMMANDS[args.command](cfg)
        except (ValueError, ArithmeticError, OSError, json.JSONDecodeError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    text = _emit(header, rows, cfg)
    if err is not None:
        text += f"# error: {err}\n"
    _write(cfg.out, text)
    if err is not None:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
