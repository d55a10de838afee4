"""Exact univariate polynomials over the integers."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exprs import ExpressionError, evaluate


class ZeroPolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class Poly:
    """Integer polynomial; ``coeffs[k]`` is the coefficient of x^k.

    The zero polynomial has empty ``coeffs`` and degree -1.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls((c,))

    @classmethod
    def coerce(cls, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, Fraction):
            if other.denominator != 1:
                raise TypeError("non-integral constant")
            other = other.numerator
        if isinstance(other, int):
            return cls((other,))
        raise TypeError(f"cannot use {type(other).__name__} as an integer polynomial")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        n = max(len(self), len(other))
        return Poly(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        if not self or not other:
            return Poly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        if isinstance(k, Fraction) and k.denominator == 1:
            k = k.numerator
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out, base = Poly((1,)), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, z):
        """Horner evaluation; works for ints, Fractions, floats, complex, mpmath and QuadPoint."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def scale_x(self, k: int) -> "Poly":
        """The polynomial f(k*x)."""
        return Poly(tuple(c * k**i for i, c in enumerate(self.coeffs)))

    def shift_degree(self, k: int) -> "Poly":
        """Multiply by x^k."""
        return Poly((0,) * k + self.coeffs) if self else Poly()

    def reversed(self) -> "Poly":
        return Poly(tuple(reversed(self.coeffs)))

    def divmod_exact(self, other: "Poly") -> tuple["Poly", "Poly"] | None:
        """Division in Z[x]; returns None if a non-integral quotient coefficient appears."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [0] * (dq + 1)
        lc = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + other.degree]
            if c % lc:
                return None
            q = c // lc
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(tuple(quot)), Poly(tuple(rem))

    def exact_quotient(self, other: "Poly") -> "Poly":
        res = self.divmod_exact(other)
        if res is None or res[1]:
            raise ArithmeticError("polynomial does not divide exactly")
        return res[0]

    def divides(self, other: "Poly") -> bool:
        # for primitive self, divisibility in Z[x] and Q[x] agree (Gauss)
        res = other.divmod_exact(self)
        return res is not None and not res[1]

    def sort_key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"


X = Poly.x()


def format_poly(f: Poly, var: str = "x") -> str:
    if not f:
        return "0"
    parts = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


_IMPLICIT_MUL = re.compile(r"(\d|\)|\b[xz]\b)\s*(?=(?!(?:if|else|and|or|not)\b)[A-Za-z(])")


def parse_poly(text: str, names: dict | None = None) -> Poly:
    """Parse ``"x^10+x^9-x^7-1"`` style text or a coefficient list ``"[a0,a1,...]"``.

    Either ``x`` or ``z`` may be used as the variable; ``names`` binds extra
    integer parameters.
    """
    t = text.strip()
    if t.startswith("["):
        body = t.strip("[]").strip()
        if not body:
            return Poly()
        try:
            return Poly(tuple(int(c) for c in body.split(",")))
        except ValueError:
            raise ValueError(f"bad coefficient list {text!r}") from None
    expr = t.replace("^", "**").replace("−", "-")
    expr = _IMPLICIT_MUL.sub(r"\1*", expr)

    def _no_div(a, b):
        raise ExpressionError("division is not allowed in integer polynomials")

    try:
        val = evaluate(expr, names={"x": X, "z": X, **(names or {})}, div=_no_div)
    except ExpressionError as exc:
        raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from None
    if isinstance(val, float):
        raise ValueError(f"polynomial coefficients must be integers: {text!r}")
    return Poly.coerce(val)


def content_primitive(f: Poly) -> tuple[int, Poly]:
    if not f:
        raise ZeroPolynomialError("zero polynomial has no content")
    c = math.gcd(*f.coeffs)
    return c, Poly(tuple(a // c for a in f.coeffs))


def primitive_part(f: Poly, positive: bool = True) -> Poly:
    _, p = content_primitive(f)
    if positive and p.lead < 0:
        p = -p
    return p


def _prem(f: Poly, g: Poly) -> Poly:
    """Pseudo-remainder of f by g."""
    rem = list(f.coeffs)
    lc, dg = g.lead, g.degree
    while len(rem) - 1 >= dg and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dg:
            break
        c = rem[-1]
        shift = len(rem) - 1 - dg
        rem = [lc * a for a in rem]
        for j, b in enumerate(g.coeffs):
            rem[shift + j] -= c * b
        rem.pop()
    return Poly(tuple(rem))


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Primitive gcd with positive leading coefficient (primitive PRS)."""
    if not f and not g:
        raise ZeroPolynomialError("gcd of two zero polynomials")
    if not f:
        return primitive_part(g)
    if not g:
        return primitive_part(f)
    a, b = primitive_part(f), primitive_part(g)
    if a.degree < b.degree:
        a, b = b, a
    while b:
        r = _prem(a, b)
        a = b
        b = primitive_part(r) if r else Poly()
    return primitive_part(a)


def eval_quad(f: Poly, p):
    """Exact value of ``f`` at a QuadPoint, as a QuadPoint."""
    from .numth import QuadPoint

    acc = QuadPoint(Fraction(0))
    for c in reversed(f.coeffs):
        acc = acc * p + c
    return acc


# --- cyclotomic polynomials -------------------------------------------------


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> Poly:
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    f = Poly((-1,) + (0,) * (m - 1) + (1,))
    for d in range(1, m):
        if m % d == 0:
            f = f.exact_quotient(cyclotomic(d))
    return f


@lru_cache(maxsize=None)
def _orders_with_phi_at_most(n: int) -> tuple[int, ...]:
    # phi(m) >= sqrt(m/2), so m <= 2 n^2 covers every candidate
    return tuple(m for m in range(1, 2 * n * n + 3) if euler_phi(m) <= n)


def cyclotomic_split(f: Poly) -> tuple[int, dict[int, int], Poly]:
    """Split ``f`` as x^k * prod(Phi_m^e_m) * rest, exactly.

    Returns ``(k, {m: e_m}, rest)``; rest keeps the content and sign of f.
    """
    if not f:
        raise ZeroPolynomialError("zero polynomial")
    k = 0
    while f.coeffs[k] == 0:
        k += 1
    rest = Poly(f.coeffs[k:])
    mults: dict[int, int] = {}
    if rest.degree >= 1:
        for m in _orders_with_phi_at_most(rest.degree):
            phi_m = cyclotomic(m)
            if phi_m.degree > rest.degree:
                continue
            while rest.degree >= phi_m.degree:
                res = rest.divmod_exact(phi_m)
                if res is None or res[1]:
                    break
                rest = res[0]
                mults[m] = mults.get(m, 0) + 1
            if rest.degree < 1:
                break
    return k, mults, rest


def is_cyclotomic_product(f: Poly) -> bool:
    """True iff every root of f is zero or a root of unity."""
    if not f:
        raise ZeroPolynomialError("zero polynomial")
    _, p = content_primitive(f)
    nz = [c for c in p.coeffs if c]
    # a product of x^k and cyclotomic polynomials is monic with unit trailing term
    if abs(nz[-1]) != 1 or abs(nz[0]) != 1:
        return False
    _, _, rest = cyclotomic_split(p)
    return rest.degree == 0


# --- square-free decomposition ----------------------------------------------


def squarefree_decomposition(f: Poly) -> tuple[int, list[tuple[Poly, int]]]:
    """Yun's algorithm: f = c * prod(g_i^i) with primitive, pairwise coprime g_i.

    Returns ``(c, [(g_i, i), ...])``. Every division below is by a primitive
    gcd, so by Gauss's lemma the quotients stay in Z[x].
    """
    if not f:
        raise ZeroPolynomialError("zero polynomial")
    if f.degree < 1:
        return f.lead, []
    out = []
    a = primitive_part(f)
    b = a.derivative()
    c = poly_gcd(a, b)
    w = a.exact_quotient(c)
    y = b.exact_quotient(c)
    z = y - w.derivative()
    i = 1
    while w.degree >= 1:
        g = poly_gcd(w, z)
        if g.degree >= 1:
            out.append((g, i))
        w = w.exact_quotient(g)
        y = z.exact_quotient(g)
        z = y - w.derivative()
        i += 1
    prod = Poly((1,))
    for gi, e in out:
        prod = prod * gi**e
    return f.exact_quotient(prod).lead, out


def is_squarefree(f: Poly) -> bool:
    return f.degree < 1 or poly_gcd(f, f.derivative()).degree == 0


# --- arithmetic mod p ---------------------------------------------------------


def _mtrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mmod(a: Sequence[int], p: int) -> list[int]:
    return _mtrim([c % p for c in a])


def _mdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    if len(a) < len(b):
        return [], a
    inv = pow(b[-1], -1, p)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return _mtrim(q), _mtrim(a[: len(b) - 1])


def _mmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _mmod(out, p)


def _mgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _mdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _mpowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    out = [1]
    base = _mdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            out = _mdivmod(_mmul(out, base, p), mod, p)[1]
        base = _mdivmod(_mmul(base, base, p), mod, p)[1]
        e >>= 1
    return out


def _msub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _mmod([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)], p)


def ddf_degrees(f: Poly, p: int) -> list[int] | None:
    """Degrees of the irreducible factors of f mod p (distinct-degree factorization).

    Returns None when p divides the leading coefficient or f is not square-free mod p.
    """
    a = _mmod(f.coeffs, p)
    if len(a) != len(f.coeffs):
        return None
    da = _mmod(Poly(tuple(a)).derivative().coeffs, p)
    if not da or len(_mgcd(a, da, p)) > 1:
        return None
    inv = pow(a[-1], -1, p)
    rest = [c * inv % p for c in a]
    degrees: list[int] = []
    h = [0, 1]
    i = 1
    while len(rest) - 1 >= 2 * i:
        h = _mpowmod(h, p, rest, p)
        g = _mgcd(rest, _msub(h, [0, 1], p), p)
        if len(g) > 1:
            degrees += [i] * ((len(g) - 1) // i)
            rest = _mdivmod(rest, g, p)[0]
            h = _mdivmod(h, rest, p)[1]
        i += 1
    if len(rest) > 1:
        degrees.append(len(rest) - 1)
    return degrees


def _subset_sums(degrees: Iterable[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73)


def possible_factor_degrees(f: Poly, n_primes: int = 8) -> set[int]:
    """Degrees in 1..deg f-1 that a rational factor of square-free f could have."""
    allowed = set(range(1, f.degree))
    used = 0
    for p in _SMALL_PRIMES:
        degs = ddf_degrees(f, p)
        if degs is None:
            continue
        allowed &= _subset_sums(degs)
        used += 1
        if not allowed or used >= n_primes:
            break
    return allowed


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0] if n < 10**6 else [1, n]


def find_factor_from_roots(f: Poly, degrees: Iterable[int]) -> Poly | None:
    """Look for a factor of square-free f among products of subsets of its roots.

    Candidates are rounded to integers only when the enclosure error bound is
    below 1/4, and are accepted only after exact division, so a returned factor
    is always genuine and None means no factor of the listed degrees exists.
    """
    import mpmath

    from .heights import complex_roots

    degrees = sorted(d for d in degrees if 1 <= d <= f.degree // 2)
    if not degrees:
        return None
    bits = 128
    while True:
        disks = complex_roots(f, bits)
        ok = True
        with mpmath.workprec(bits + 32):
            for k in degrees:
                for sub in itertools.combinations(disks, k):
                    coeffs = [mpmath.mpc(1)]
                    bound = [mpmath.mpf(1)]
                    for dk in sub:
                        coeffs = [mpmath.mpc(0)] + coeffs
                        bound = [mpmath.mpf(0)] + bound
                        for j in range(len(coeffs) - 1):
                            coeffs[j] -= dk.center * coeffs[j + 1]
                            bound[j] += (abs(dk.center) + dk.radius) * bound[j + 1]
                    if any(abs(c.imag) > 0.25 for c in coeffs):
                        continue
                    base = [mpmath.mpf(1)]
                    for dk in sub:
                        base = [mpmath.mpf(0)] + base
                        for j in range(len(base) - 1):
                            base[j] += abs(dk.center) * base[j + 1]
                    err = max(b - c for b, c in zip(bound, base))
                    for lc in _divisors(f.lead):
                        if lc * err > 0.25:
                            ok = False
                            continue
                        cand = Poly(tuple(int(mpmath.nint(lc * c.real)) for c in coeffs))
                        if cand.degree == k and cand.divides(f):
                            return cand
        if ok:
            return None
        bits *= 2


def is_irreducible(f: Poly) -> bool:
    if not f or f.degree < 1:
        raise ValueError("irreducibility needs a polynomial of positive degree")
    c, _ = content_primitive(f)
    if c != 1:
        raise ValueError("is_irreducible expects a primitive polynomial")
    if f.degree == 1:
        return True
    if f.coeffs[0] == 0:
        return False
    if not is_squarefree(f):
        return False
    allowed = possible_factor_degrees(f)
    allowed = {d for d in allowed if d <= f.degree // 2} | {
        f.degree - d for d in allowed if d > f.degree // 2
    }
    if not allowed:
        return True
    return find_factor_from_roots(f, allowed) is None


def factor_squarefree(f: Poly) -> list[Poly]:
    """Irreducible factors of a primitive square-free polynomial (positive leading coefficients)."""
    f = primitive_part(f)
    if f.degree <= 1:
        return [f] if f.degree == 1 else []
    if f.coeffs[0] == 0:
        return [X] + factor_squarefree(Poly(f.coeffs[1:]))
    allowed = possible_factor_degrees(f)
    allowed = {d for d in allowed if d <= f.degree // 2} | {
        f.degree - d for d in allowed if d > f.degree // 2
    }
    g = find_factor_from_roots(f, allowed) if allowed else None
    if g is None:
        return [f]
    g = primitive_part(g)
    return sorted(
        factor_squarefree(g) + factor_squarefree(f.exact_quotient(g)), key=Poly.sort_key
    )


# --- rational functions -------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient num/den with integer polynomial parts.

    ``num`` and ``den`` are coprime over Q[x] and ``den`` has a positive
    leading coefficient.
    """

    num: Poly
    den: Poly

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def log_abs(self, z):
        import mpmath

        return mpmath.log(abs(self.num(z))) - mpmath.log(abs(self.den(z)))

    def __str__(self):
        if self.den == Poly((1,)):
            return format_poly(self.num, "z")
        return f"({format_poly(self.num, 'z')})/({format_poly(self.den, 'z')})"


def ratfunc_reduce(num: Poly, den: Poly) -> RationalFunction:
    """Cancel common factors; the result is value-equal to num/den.

    The joint content of numerator and denominator is removed and the sign
    is pushed into the numerator.
    """
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return RationalFunction(Poly(), Poly((1,)))
    g = poly_gcd(num, den)
    if g.degree >= 1:
        num = num.exact_quotient(g)
        den = den.exact_quotient(g)
    c = math.gcd(math.gcd(*num.coeffs), math.gcd(*den.coeffs))
    num = Poly(tuple(a // c for a in num.coeffs))
    den = Poly(tuple(a // c for a in den.coeffs))
    if den.lead < 0:
        num, den = -num, -den
    return RationalFunction(num, den)


def primitive_ratfunc(num: Poly, den: Poly) -> RationalFunction:
    """Reduce and then make both parts primitive with positive leading coefficients.

    This drops an overall rational constant.
    """
    r = ratfunc_reduce(num, den)
    if not r.num:
        return r
    return RationalFunction(primitive_part(r.num), primitive_part(r.den))
