"""Command-line front end: ``orbit-heights <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Callable

import mpmath

from .certify import (
    CertReport,
    IndeterminateError,
    PhiSet,
    SamplingConfig,
    build_phi,
    certify_lower_bound,
    estimate_optimal_D,
)
from .exprs import ExpressionError
from .heights import AlgebraicNumber, NotSquarefreeError, mahler_measure, orbit_height, weil_height
from .intervals import DEFAULT_PRECISION, Interval
from .mobius import InfiniteGroupError, SingularMatrixError, order, parse_group
from .numth import parse_point
from .orbits import NoWitnessError, compute_O, height_zeros, minpoly_of_point, unity_witness
from .poly import Poly, ZeroPolynomialError, format_poly, parse_poly
from .search import EmptySearchError, SearchSpace, min_orbit_height
from .tables import RowSpecError, bundled_rows, instantiate, load_rows, verify_table_row

PRECISION_ENV = "ORBIT_HEIGHTS_PRECISION"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

INPUT_ERRORS = (
    ValueError,
    ExpressionError,
    SingularMatrixError,
    InfiniteGroupError,
    ZeroPolynomialError,
    NotSquarefreeError,
    ArithmeticError,
    KeyError,
)


class Output:
    """Collects one record per command and prints it as text or JSON."""

    def __init__(self, fmt: str):
        self.fmt = fmt

    def emit(self, record: dict, text: str) -> None:
        if self.fmt == "json":
            print(json.dumps(record))
        else:
            print(text)


def interval_record(x: Interval) -> dict:
    return {"lo": mpmath.nstr(x.lo, 40), "hi": mpmath.nstr(x.hi, 40), "mid": float(x.mid)}


def interval_from_record(d: dict, prec: int = DEFAULT_PRECISION) -> Interval:
    with mpmath.workprec(prec):
        return Interval.from_bounds(mpmath.mpf(d["lo"]), mpmath.mpf(d["hi"]), prec)


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise SystemExit(f"orbit-heights: {PRECISION_ENV} must be an integer, got {raw!r}") from None
    return bits


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _config(args) -> SamplingConfig:
    return SamplingConfig(circle_samples=args.samples, grid=args.grid, tol=args.tol, precision_bits=args.precision)


def _algebraic(text: str) -> Poly:
    """A minimal polynomial given directly or via an exact point such as ``-1`` or ``i``."""
    try:
        f = parse_poly(text)
        if f.degree >= 1:
            return f
    except ValueError:
        pass
    p = parse_point(text)
    if not hasattr(p, "is_rational"):
        raise ValueError("the point at infinity has no minimal polynomial")
    return minpoly_of_point(p)


# --- commands -----------------------------------------------------------------


def cmd_mahler(args, out: Output) -> int:
    f = parse_poly(args.poly)
    m = mahler_measure(f, args.precision)
    out.emit({"poly": str(f), "mahler": interval_record(m), "log": interval_record(m.log())}, m.to_string())
    return EXIT_OK


def cmd_height(args, out: Output) -> int:
    f = _algebraic(args.poly)
    h = weil_height(AlgebraicNumber(f), args.precision)
    out.emit({"minpoly": str(f), "height": interval_record(h)}, h.to_string())
    return EXIT_OK


def cmd_orbit_height(args, out: Output) -> int:
    G = parse_group(args.group)
    f = _algebraic(args.poly)
    h = orbit_height(G, AlgebraicNumber(f), args.precision)
    out.emit({"group": [str(s) for s in G], "minpoly": str(f), "orbit_height": interval_record(h)}, h.to_string())
    return EXIT_OK


def cmd_group(args, out: Output) -> int:
    G = parse_group(args.gens)
    rows = [(str(s), order(s)) for s in G]
    text = "\n".join(f"{s}  (order {o})" for s, o in rows) + f"\n|G| = {len(G)}"
    out.emit({"order": len(G), "elements": [{"matrix": s, "order": o} for s, o in rows]}, text)
    return EXIT_OK


def cmd_orbits(args, out: Output) -> int:
    oset = compute_O(parse_group(args.group))
    if oset.infinite:
        out.emit({"infinite": True, "orbits": None}, "INFINITE")
    else:
        orbits = [o.to_strings() for o in oset.orbits]
        text = "\n".join(str(o) for o in oset.orbits) if orbits else "(empty)"
        out.emit({"infinite": False, "orbits": orbits}, text)
    return EXIT_OK


def cmd_classify(args, out: Output) -> int:
    oset = compute_O(parse_group(args.group))
    if oset.infinite:
        out.emit({"O": "INFINITE"}, "INFINITE")
    else:
        kind = "EMPTY" if not oset.orbits else "FINITE"
        out.emit({"O": kind, "orbits": len(oset.orbits)}, f"{kind} ({len(oset.orbits)} orbits)")
    return EXIT_OK


def cmd_zeros(args, out: Output) -> int:
    zs = height_zeros(parse_group(args.group))
    out.emit({"zeros": [str(z) for z in zs]}, "\n".join(str(z) for z in zs))
    return EXIT_OK


def cmd_witness(args, out: Output) -> int:
    G = parse_group(args.group)
    try:
        n, phi, h = unity_witness(G, args.bound, args.precision)
    except NoWitnessError as exc:
        out.emit({"error": str(exc)}, str(exc))
        return EXIT_FAIL
    out.emit(
        {"n": n, "cyclotomic": str(phi), "orbit_height": interval_record(h)},
        f"n = {n}  Phi_{n} = {phi}  h_G = {h.to_string()}",
    )
    return EXIT_OK


def _phis_for(G) -> list:
    oset = compute_O(G)
    if oset.infinite:
        raise ValueError("O is infinite; phi is undefined")
    phis = []
    for o in oset.orbits:
        phi = build_phi(G, o)
        if phi not in phis:
            phis.append(phi)
    return phis


def cmd_phi(args, out: Output) -> int:
    G = parse_group(args.group)
    phis = _phis_for(G)
    out.emit(
        {"phis": [{"num": format_poly(p.num, "z"), "den": format_poly(p.den, "z")} for p in phis]},
        "\n".join(str(p) for p in phis) if phis else "(O is empty)",
    )
    return EXIT_OK


def _phi_set(G, weights) -> PhiSet:
    phis = _phis_for(G)
    if not phis:
        raise ValueError("O is empty; there is nothing to certify")
    if len(weights) != len(phis):
        raise ValueError(f"expected {len(phis)} weight(s) --B, got {len(weights)}")
    return PhiSet(tuple(phis), tuple(weights))


def _report_text(rep: CertReport) -> str:
    head = f"{rep.label + ': ' if rep.label else ''}{'PASS' if rep.passed else 'FAIL'}"
    lines = [head]
    for c in rep.checks:
        lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    if rep.samples:
        lines.append(
            f"  claimed D = {rep.claimed_D:.10f}, observed min = {rep.observed_min:.10f} "
            f"at z = {rep.argmin:.6f}, margin = {rep.margin:.3e}, samples = {rep.samples}"
        )
    return "\n".join(lines)


def cmd_certify(args, out: Output) -> int:
    G = parse_group(args.group)
    rep = certify_lower_bound(G, _phi_set(G, args.B), args.D, _config(args))
    out.emit(rep.to_dict(), _report_text(rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_optimal_D(args, out: Output) -> int:
    G = parse_group(args.group)
    d, z = estimate_optimal_D(G, _phi_set(G, args.B), _config(args))
    out.emit({"D": d, "argmin": [z.real, z.imag]}, f"D = {d:.10f} at z = {z:.10f}")
    return EXIT_OK


def cmd_table(args, out: Output) -> int:
    rows = load_rows(args.rowfile) if args.rowfile else bundled_rows()
    if args.row is not None:
        rows = [r for r in rows if r.row == args.row and (args.table is None or r.table == args.table)]
    elif args.table is not None:
        rows = [r for r in rows if r.table == args.table]
    if not rows:
        raise ValueError("no matching table rows")
    single = len(rows) == 1 and args.sign is not None
    cfg = _config(args)
    failed = 0
    for row in rows:
        for sign in ([args.sign] if args.sign is not None else row.signs):
            try:
                spec = instantiate(row, sign, args.p, args.q)
            except (RowSpecError, SingularMatrixError) as exc:
                if single:
                    raise
                out.emit({"row": row.name, "sign": sign, "skipped": str(exc)}, f"{row.name} sign {sign:+d}: skipped ({exc})")
                continue
            rep = verify_table_row(spec, cfg)
            failed += not rep.passed
            out.emit(rep.to_dict(), _report_text(rep))
    return EXIT_FAIL if failed else EXIT_OK


def cmd_search(args, out: Output) -> int:
    G = parse_group(args.group)
    space = SearchSpace(args.deg, args.height, args.skip_cyclotomic)
    progress = None
    if args.progress:
        def progress(rec):
            print(json.dumps({"progress": rec}), file=sys.stderr)
    res = min_orbit_height(G, space, args.precision, workers=args.workers, progress=progress)
    rec = res.to_record(space)
    out.emit(rec, f"min h_G = {res.value.to_string()} at {res.witness}  ({res.count} polynomials, {res.examined} certified)")
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_positive_int, default=_default_precision(),
                        help=f"working precision in bits (default {DEFAULT_PRECISION}, or ${PRECISION_ENV})")
    common.add_argument("--samples", type=_positive_int, default=SamplingConfig.circle_samples,
                        help="points per circle |sigma(z)| = 1")
    common.add_argument("--grid", type=_positive_int, default=SamplingConfig.grid, help="safety grid size per axis")
    common.add_argument("--tol", type=_positive_float, default=SamplingConfig.tol, help="pass tolerance on D")
    common.add_argument("--format", choices=["text", "json"], default="text")

    ap = argparse.ArgumentParser(prog="orbit-heights", description="Heights of Mobius orbits of algebraic numbers.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("mahler", cmd_mahler, "Mahler measure of an integer polynomial")
    p.add_argument("poly")
    p = add("height", cmd_height, "Weil height of an algebraic number (minimal polynomial or exact point)")
    p.add_argument("poly")
    p = add("orbit-height", cmd_orbit_height, "sum of Weil heights over a group orbit")
    p.add_argument("group", help='generators "a,b;c,d", several separated by "|"')
    p.add_argument("poly")
    p = add("group", cmd_group, "list the finite group generated by matrices")
    p.add_argument("gens", nargs="+")
    for name, fn, h in (
        ("orbits", cmd_orbits, "orbits of special points forming the set O"),
        ("classify-O", cmd_classify, "whether O is infinite, finite or empty"),
        ("zeros", cmd_zeros, "special points where the orbit height vanishes"),
        ("phi", cmd_phi, "the invariant rational functions built from O"),
    ):
        add(name, fn, h).add_argument("group")
    p = add("witness", cmd_witness, "smallest n with a root of unity of positive orbit height")
    p.add_argument("group")
    p.add_argument("--bound", type=_positive_int, default=60)
    p = add("certify", cmd_certify, "check a lower bound D for the gap function")
    p.add_argument("group")
    p.add_argument("--B", type=_positive_float, action="append", required=True, help="weight, once per phi")
    p.add_argument("--D", type=float, required=True)
    p = add("optimal-D", cmd_optimal_D, "estimate the best constant D for given weights")
    p.add_argument("group")
    p.add_argument("--B", type=_positive_float, action="append", required=True)
    p = add("table", cmd_table, "verify classification table rows (all bundled rows by default)")
    p.add_argument("rowfile", nargs="?")
    p.add_argument("--table", type=int, choices=[1, 2])
    p.add_argument("--row", type=int)
    p.add_argument("--sign", type=int, choices=[1, -1])
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--q", type=int, default=1)
    p = add("search", cmd_search, "minimize the orbit height over small polynomials")
    p.add_argument("group")
    p.add_argument("--deg", type=_positive_int, required=True)
    p.add_argument("--height", type=_positive_int, required=True)
    p.add_argument("--skip-cyclotomic", action="store_true")
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--progress", action="store_true", help="emit JSON progress records on stderr")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except IndeterminateError as exc:
        print(f"orbit-heights: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except EmptySearchError as exc:
        print(f"orbit-heights: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except INPUT_ERRORS as exc:
        print(f"orbit-heights: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
