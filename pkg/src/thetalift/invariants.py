"""Exact polynomial invariants of knot codes.

Kauffman bracket by full state-sum (compiled kernel with pure-Python
fallback), Jones polynomial by writhe normalization and the A -> t^(-1/4)
substitution, Alexander polynomial from the Wirtinger presentation via Fox
derivatives and a fraction-free determinant, and the determinant |Delta(-1)|.

All arithmetic is exact over the integers.  Internal consistency is checked
where the theory gives no slack: Jones exponents must be integers for a
knot, Delta(1) must be a unit, the determinant must be odd.
"""

from __future__ import annotations

from .codes import OVER, UNDER, KnotCode, KnotMap, validate_knot
from ._kernel import BACKEND, bracket_counts  # noqa: F401  (BACKEND re-exported)
from .poly import LaurentPoly, mirror_canonical

DEFAULT_STATE_SUM_CAP = 24


class InvariantError(RuntimeError):
    """An invariant failed an identity that holds for every knot."""


class StateSumCapExceeded(ValueError):
    def __init__(self, crossings: int, cap: int):
        self.crossings = crossings
        self.cap = cap
        super().__init__(
            f"diagram has {crossings} crossings; state-sum cap is {cap} "
            f"(raise the cap explicitly to override)"
        )


def _smoothing_joins(km: KnotMap) -> tuple[list, list]:
    """Per crossing, the two edge joins of the A- and B-smoothing.

    With the over strand entering at rotation slot a (counterclockwise), the
    A-smoothing joins slots (a+1, a+2) and (a+3, a); B joins (a, a+1) and
    (a+2, a+3).  Pinned by the one-step expansions: a positive kink has
    bracket -A^3.
    """
    joins_a, joins_b = [], []
    for j, lab in enumerate(km.crossing_order):
        base = 4 * j
        a = km.over_enter_slot[lab]
        e = [km.edge_of[base + k] for k in range(4)]
        joins_a.append((e[(a + 1) % 4], e[(a + 2) % 4], e[(a + 3) % 4], e[a % 4]))
        joins_b.append((e[a % 4], e[(a + 1) % 4], e[(a + 2) % 4], e[(a + 3) % 4]))
    return joins_a, joins_b


def kauffman_bracket(code: KnotCode, cap: int = DEFAULT_STATE_SUM_CAP) -> LaurentPoly:
    """<D> = sum over smoothing states of A^(a-b) * delta^(loops-1)."""
    n = len(code)
    if n == 0:
        return LaurentPoly.one("A")
    if n > cap:
        raise StateSumCapExceeded(n, cap)
    km = validate_knot(code)
    joins_a, joins_b = _smoothing_joins(km)
    counts = bracket_counts(n, joins_a, joins_b)
    delta = LaurentPoly.from_dict({4: -1, -4: -1}, "A")
    delta_pows = [LaurentPoly.one("A")]
    for _ in range(2 * n + 1):
        delta_pows.append(delta_pows[-1] * delta)
    total = LaurentPoly.zero("A")
    for b_cnt in range(n + 1):
        for loops in range(1, 2 * n + 2):
            c = counts[b_cnt][loops]
            if c:
                term = delta_pows[loops - 1].scale(c).shift2(2 * (n - 2 * b_cnt))
                total = total + term
    return total


def jones(code: KnotCode, cap: int = DEFAULT_STATE_SUM_CAP) -> LaurentPoly:
    """V(t) = (-A)^(-3w) <D> under A -> t^(-1/4); integer exponents for knots."""
    br = kauffman_bracket(code, cap=cap)
    w = code.writhe()
    normalized = br.shift2(-6 * w)
    if w % 2 != 0:
        normalized = -normalized
    v = normalized.reexponent(-1, 4, var="t")
    if not v.has_integer_exponents():
        raise InvariantError("Jones exponents not integral; multi-component leak")
    return v


def jones_canonical(code: KnotCode, cap: int = DEFAULT_STATE_SUM_CAP) -> LaurentPoly:
    """Mirror-canonical Jones: the smaller of V(t), V(1/t)."""
    return mirror_canonical(jones(code, cap=cap))


def _wirtinger_matrix(code: KnotCode) -> list[list[LaurentPoly]]:
    """Fox-derivative rows of the Wirtinger presentation, abelianized at t.

    Arcs are the over-strands delimited by under-passages; row per crossing:
    positive:  (1-t) on the over arc, t on the incoming under arc, -1 out;
    negative:  (t-1) on the over arc, 1 on the incoming under arc, -t out.
    """
    events = code.events
    m = len(events)
    under_positions = [i for i, ev in enumerate(events) if ev.role == UNDER]
    n = len(under_positions)
    arc_after = {}
    for k, pos in enumerate(under_positions):
        arc_after[pos] = k
    arc_at = [0] * m
    cur = arc_after[under_positions[-1]]
    for i in range(m):
        arc_at[i] = cur
        if events[i].role == UNDER:
            cur = arc_after[i]

    over_arc = {ev.label: arc_at[i] for i, ev in enumerate(events) if ev.role == OVER}
    t = LaurentPoly.monomial(1, 1)
    one = LaurentPoly.one()
    rows = []
    for pos in under_positions:
        ev = events[pos]
        row = [LaurentPoly.zero() for _ in range(n)]
        o = over_arc[ev.label]
        x = arc_at[pos]
        y = arc_after[pos]
        if ev.sign > 0:
            row[o] = row[o] + (one - t)
            row[x] = row[x] + t
            row[y] = row[y] - one
        else:
            row[o] = row[o] + (t - one)
            row[x] = row[x] + one
            row[y] = row[y] - t
        rows.append(row)
    return rows


def _bareiss_det(mat: list[list[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free determinant over integer polynomials; exact divisions."""
    r = len(mat)
    if r == 0:
        return LaurentPoly.one()
    m = [row[:] for row in mat]
    sign = 1
    prev = LaurentPoly.one()
    for k in range(r - 1):
        if m[k][k].is_zero():
            swapped = False
            for i in range(k + 1, r):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    swapped = True
                    break
            if not swapped:
                return LaurentPoly.zero()
        piv = m[k][k]
        for i in range(k + 1, r):
            for j in range(k + 1, r):
                num = m[i][j] * piv - m[i][k] * m[k][j]
                m[i][j] = num.divide_exact(prev)
            m[i][k] = LaurentPoly.zero()
        prev = piv
    det = m[r - 1][r - 1]
    return -det if sign < 0 else det


def alexander(code: KnotCode) -> LaurentPoly:
    """Normalized Alexander polynomial: lowest exponent 0, top coefficient > 0."""
    validate_knot(code)
    n = len(code)
    if n == 0:
        return LaurentPoly.one()
    rows = _wirtinger_matrix(code)
    minor = [row[1:] for row in rows[1:]]
    det = _bareiss_det(minor)
    delta = det.unit_normal()
    if delta.is_zero() or delta.eval_unit(1) not in (1, -1):
        raise InvariantError(f"Delta(1) = {0 if delta.is_zero() else delta.eval_unit(1)}, expected a unit")
    return delta


def determinant(code: KnotCode) -> int:
    """|Delta(-1)|; always odd for a knot."""
    d = abs(alexander(code).eval_unit(-1))
    if d % 2 == 0:
        raise InvariantError(f"even determinant {d}")
    return d
