"""Exact integer Laurent polynomials.

Exponents are stored internally in half-units (twice the exponent, an int)
so the Kauffman-bracket variable changes stay exact; every polynomial the
toolkit prints or compares has integer exponents, which is asserted where it
matters.  Coefficients are arbitrary-precision integers, zero coefficients
are never stored, and equality is coefficient-wise.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LaurentPoly:
    """terms: sorted tuple of (exp2, coeff) with exp2 = 2 * exponent."""

    var: str
    terms: tuple[tuple[int, int], ...]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_dict(d: dict[int, int], var: str = "t") -> "LaurentPoly":
        terms = tuple(sorted((e, c) for e, c in d.items() if c != 0))
        return LaurentPoly(var, terms)

    @staticmethod
    def zero(var: str = "t") -> "LaurentPoly":
        return LaurentPoly(var, ())

    @staticmethod
    def const(c: int, var: str = "t") -> "LaurentPoly":
        return LaurentPoly.from_dict({0: c}, var)

    @staticmethod
    def one(var: str = "t") -> "LaurentPoly":
        return LaurentPoly.const(1, var)

    @staticmethod
    def monomial(coeff: int, exp: int, var: str = "t") -> "LaurentPoly":
        return LaurentPoly.from_dict({2 * exp: coeff}, var)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def has_integer_exponents(self) -> bool:
        return all(e % 2 == 0 for e, _ in self.terms)

    def min_exp2(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[0][0]

    def max_exp2(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return self.terms[-1][0]

    def coeff(self, exp: int) -> int:
        d = dict(self.terms)
        return d.get(2 * exp, 0)

    # -- arithmetic --------------------------------------------------------

    def _need_same_var(self, other: "LaurentPoly") -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._need_same_var(other)
        d = dict(self.terms)
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LaurentPoly.from_dict(d, self.var)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.var, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._need_same_var(other)
        d: dict[int, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                d[e] = d.get(e, 0) + c1 * c2
        return LaurentPoly.from_dict(d, self.var)

    def scale(self, c: int) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly.zero(self.var)
        return LaurentPoly(self.var, tuple((e, c * k) for e, k in self.terms))

    def shift2(self, exp2: int) -> "LaurentPoly":
        """Multiply by var^(exp2/2)."""
        return LaurentPoly(self.var, tuple((e + exp2, c) for e, c in self.terms))

    def power(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power")
        out = LaurentPoly.one(self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mirror(self) -> "LaurentPoly":
        """Substitute var -> 1/var."""
        return LaurentPoly(self.var, tuple(sorted((-e, c) for e, c in self.terms)))

    def reexponent(self, num: int, den: int, var: str | None = None) -> "LaurentPoly":
        """Map var^e -> newvar^(e*num/den); every image exponent must land on
        a half-integer grid point."""
        d: dict[int, int] = {}
        for e, c in self.terms:
            top = e * num
            if top % den != 0:
                raise ValueError(f"exponent {e}/2 not divisible for {num}/{den} substitution")
            d[top // den] = c
        terms = tuple(sorted(d.items()))
        return LaurentPoly(var if var is not None else self.var, terms)

    def eval_unit(self, t0: int) -> int:
        """Exact evaluation at t0 in {1, -1} (works for all Laurent exponents)."""
        if t0 not in (1, -1):
            raise ValueError("eval_unit only supports 1 and -1")
        total = 0
        for e, c in self.terms:
            if e % 2 != 0:
                raise ValueError("cannot evaluate half-integer exponent at an integer")
            exp = e // 2
            total += c * (1 if (t0 == 1 or exp % 2 == 0) else -1)
        return total

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; raises ValueError when the remainder is nonzero."""
        self._need_same_var(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self.terms)
        q: dict[int, int] = {}
        lead_e, lead_c = other.terms[-1]
        while rem:
            e = max(rem)
            c = rem[e]
            if c % lead_c != 0:
                raise ValueError("inexact polynomial division")
            qe, qc = e - lead_e, c // lead_c
            q[qe] = q.get(qe, 0) + qc
            for oe, oc in other.terms:
                ne = oe + qe
                nc = rem.get(ne, 0) - oc * qc
                if nc == 0:
                    rem.pop(ne, None)
                else:
                    rem[ne] = nc
        return LaurentPoly.from_dict(q, self.var)

    # -- normal forms ------------------------------------------------------

    def unit_normal(self) -> "LaurentPoly":
        """Divide by +-var^k: lowest exponent 0, top coefficient positive."""
        if not self.terms:
            return self
        p = self.shift2(-self.min_exp2())
        if p.terms[-1][1] < 0:
            p = -p
        return p

    def sort_key(self) -> tuple:
        return self.terms

    def __str__(self) -> str:
        return format_poly(self)


def unit_equal(a: LaurentPoly, b: LaurentPoly) -> bool:
    """Equality up to multiplication by +-var^k."""
    return a.unit_normal() == b.unit_normal()


def mirror_canonical(p: LaurentPoly) -> LaurentPoly:
    """The lexicographically smaller of p(var) and p(1/var)."""
    m = p.mirror()
    return p if p.sort_key() <= m.sort_key() else m


def format_poly(p: LaurentPoly) -> str:
    """Stable text form: ascending exponents, explicit coefficients.

    Examples: "1-1t+1t^2", "-1t^-4+1t^-3+1t^-1", "0".
    """
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.terms:
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            if e % 2 == 0:
                ex = str(e // 2)
            else:
                ex = f"{e}/2"
            body = f"{mag}{p.var}" if ex == "1" else f"{mag}{p.var}^{ex}"
        parts.append(("-" if c < 0 else "+") + body)
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


def parse_poly(text: str, var: str = "t") -> LaurentPoly:
    """Inverse of format_poly, used by tests and table tooling."""
    import re

    s = text.strip().replace(" ", "")
    if s == "0":
        return LaurentPoly.zero(var)
    term = re.compile(
        r"([+-]?)(\d*)(?:" + re.escape(var) + r"(?:\^(-?\d+(?:/2)?))?)?"
    )
    d: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = term.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign_s, coeff_s, exp_s = m.groups()
        has_var = s[pos:m.end()].count(var) > 0
        coeff = int(coeff_s) if coeff_s else 1
        if sign_s == "-":
            coeff = -coeff
        if not has_var:
            if not coeff_s:
                raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
            e2 = 0
        elif exp_s is None:
            e2 = 2
        elif exp_s.endswith("/2"):
            e2 = int(exp_s[:-2])
        else:
            e2 = 2 * int(exp_s)
        d[e2] = d.get(e2, 0) + coeff
        pos = m.end()
    return LaurentPoly.from_dict(d, var)
