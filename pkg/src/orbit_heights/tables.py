"""Bundled classification tables and per-row verification.

Each table row is a JSON record (one per line) whose matrix, orbits,
weights, exp(D) and witness fields are expressions in the integers
``p``, ``q``, the sign ``s`` (+1 for the upper choice of a ± pair) and
``r = p/q``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import mpmath

from .certify import (
    CertReport,
    Check,
    SamplingConfig,
    certify_lower_bound,
    estimate_optimal_D,
    PhiSet,
    build_phi,
)
from .exprs import evaluate
from .heights import maximal_root, orbit_height
from .mobius import FiniteGroup, MobiusMap, generate_group, normalize, order
from .numth import parse_point
from .orbits import Orbit, compute_O
from .poly import Poly, RationalFunction, parse_poly

WITNESS_TOL = 1e-9


class RowSpecError(ValueError):
    pass


@dataclass(frozen=True)
class TableRow:
    table: int
    row: int
    matrix: str
    signs: tuple[int, ...]
    params: bool
    exclude: str
    order: int
    orbits: tuple[tuple[str, ...], ...]
    weights: tuple[str, ...] | None
    expD: str | None
    D_approx: float | None
    witness: str | None
    witness_when: str = "True"
    witness_text: str = ""
    alpha_poly: str | None = None
    printed_weights: tuple[str, ...] | None = None
    note: str = ""
    source: str = ""

    @classmethod
    def from_dict(cls, d: dict) -> "TableRow":
        d = dict(d)
        d["signs"] = tuple(d["signs"])
        d["orbits"] = tuple(tuple(o) for o in d["orbits"])
        for key in ("weights", "printed_weights"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        return cls(**d)

    @property
    def name(self) -> str:
        return f"T{self.table}.R{self.row}"


def load_rows(path: str | Path) -> list[TableRow]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                rows.append(TableRow.from_dict(json.loads(line)))
    return rows


def bundled_table_path(table: int) -> Path:
    if table not in (1, 2):
        raise KeyError(f"no bundled table {table}")
    return Path(str(resources.files("orbit_heights") / "data" / f"table{table}.jsonl"))


def bundled_rows(table: int | None = None) -> list[TableRow]:
    tables = (1, 2) if table is None else (table,)
    return [r for t in tables for r in load_rows(bundled_table_path(t))]


def find_row(table: int, row: int) -> TableRow:
    for r in bundled_rows(table):
        if r.row == row:
            return r
    raise KeyError(f"no row {row} in table {table}")


def _mp_div(a, b):
    return mpmath.mpf(a) / b if not isinstance(a, mpmath.mpc) else a / b


@dataclass(frozen=True)
class TableRowSpec:
    """A table row instantiated at a sign choice and p/q."""

    row: TableRow
    sign: int
    p: int
    q: int
    generator: MobiusMap = field(compare=False)
    group: FiniteGroup = field(compare=False)
    orbits: tuple[Orbit, ...] = field(compare=False)

    @property
    def names(self) -> dict:
        return {"p": self.p, "q": self.q, "s": self.sign, "r": Fraction(self.p, self.q)}

    @property
    def label(self) -> str:
        sign = {1: "+", -1: "-"}[self.sign] if len(self.row.signs) > 1 else ""
        pq = f" p/q={self.p}/{self.q}" if self.row.params else ""
        return f"{self.row.name}{'(' + sign + ')' if sign else ''}{pq}"

    def weights(self) -> tuple[float, ...] | None:
        if self.row.weights is None:
            return None
        return tuple(float(evaluate(w, self.names, {"sqrt": mpmath.sqrt}, div=_mp_div)) for w in self.row.weights)

    def alpha(self, precision_bits: int = 128):
        if self.row.alpha_poly is None:
            return None
        return maximal_root(parse_poly(self.row.alpha_poly, {"s": self.sign}), precision_bits)

    def exp_D(self, precision_bits: int = 128):
        if self.row.expD is None:
            return None
        with mpmath.workprec(precision_bits):
            names = dict(self.names)
            names.pop("r")
            alpha = self.alpha(precision_bits)
            if alpha is not None:
                names["alpha"] = alpha
            funcs = {"max": max, "abs": abs, "sqrt": mpmath.sqrt}
            return mpmath.mpf(evaluate(self.row.expD, names, funcs, div=_mp_div))

    def D(self, precision_bits: int = 128):
        e = self.exp_D(precision_bits)
        return None if e is None else mpmath.log(e)

    def witness(self) -> Poly | None:
        if self.row.witness is None:
            return None
        if not evaluate(self.row.witness_when, {"p": self.p, "q": self.q, "s": self.sign}):
            return None
        return parse_poly(self.row.witness, {"s": self.sign, "p": self.p})


def instantiate(row: TableRow, sign: int = 1, p: int = 5, q: int = 1) -> TableRowSpec:
    """Substitute sign and p/q into a row; enforces the row's parameter restrictions."""
    if sign not in row.signs:
        raise RowSpecError(f"{row.name} has no sign {sign:+d}")
    if not row.params:
        p, q = 0, 1
    else:
        if q <= 0 or math.gcd(p, q) != 1:
            raise RowSpecError("p and q must be coprime with q > 0")
        if evaluate(row.exclude, {"p": p, "q": q, "s": sign}):
            raise RowSpecError(f"{row.name} excludes p/q = {p}/{q}")
    names = {"p": p, "q": q, "s": sign, "r": Fraction(p, q)}
    entries = [evaluate(e, names) for part in row.matrix.split(";") for e in part.split(",")]
    generator = normalize(*(Fraction(e) for e in entries))
    group = generate_group([generator])
    pt_names = {"s": sign}
    orbits = tuple(Orbit(tuple(parse_point(t, pt_names) for t in o)) for o in row.orbits)
    return TableRowSpec(row, sign, p, q, generator, group, orbits)


def distinct_phis(G: FiniteGroup, orbits) -> tuple[RationalFunction, ...]:
    """One phi per orbit, dropping repeats; Galois-conjugate orbits give the same phi."""
    out: list[RationalFunction] = []
    for o in orbits:
        phi = build_phi(G, o)
        if phi not in out:
            out.append(phi)
    return tuple(out)


def verify_table_row(spec: TableRowSpec, cfg: SamplingConfig = SamplingConfig()) -> CertReport:
    """Order, orbit set, optimal D, equality witness and lower-bound certification."""
    G = spec.group
    checks: list[Check] = []
    ord_ = order(spec.generator)
    checks.append(Check("order", ord_ == spec.row.order, f"ord = {ord_}, table {spec.row.order}"))

    oset = compute_O(G)
    got = set() if oset.infinite else {o.points for o in oset.orbits}
    want = {o.points for o in spec.orbits}
    checks.append(Check("orbits", got == want, f"O = {oset}"))

    weights = spec.weights()
    D = spec.D(cfg.precision_bits)
    if weights is None or D is None:
        return CertReport(
            claimed_D=math.nan, observed_min=math.nan, argmin=complex(math.nan, math.nan),
            margin=math.nan, samples=0, passed=all(c.passed for c in checks),
            checks=checks, label=spec.label,
        )
    if not checks[1].passed:
        checks.append(Check("optimal_D", False, "skipped: orbit set differs"))
        return CertReport(float(D), math.nan, complex(math.nan, math.nan), math.nan, 0, False, checks, spec.label)

    phi_set = PhiSet(distinct_phis(G, spec.orbits), tuple(weights))
    est, _ = estimate_optimal_D(G, phi_set, cfg)
    checks.append(Check("optimal_D", abs(est - float(D)) <= cfg.tol,
                        f"estimate {est:.10f}, log exp(D) = {float(D):.10f}"))

    w = spec.witness()
    if w is not None:
        h = orbit_height(G, w, cfg.precision_bits)
        err = abs(h.mid - D) + h.width / 2
        checks.append(Check("witness", err <= WITNESS_TOL,
                            f"h_G({spec.row.witness_text}) = {h}, |h_G - D| <= {mpmath.nstr(err, 3)}"))

    cert = certify_lower_bound(G, phi_set, float(D), cfg)
    checks.append(Check("certify", cert.passed,
                        f"min sampled gap {cert.observed_min:.10f} over {cert.samples} points"))
    cert.checks = checks
    cert.passed = all(c.passed for c in checks)
    cert.label = spec.label
    return cert
