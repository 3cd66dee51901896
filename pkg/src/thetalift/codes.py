"""Diagram codes for knots and theta-curves.

A knot is a signed Gauss code: a cyclic list of crossing visits, each with a
role (over or under) and a sign shared by both visits of the crossing.  A
theta-curve is stored in branch-circle normal position: the branch circle
(the unknotted constituent) is simple by construction, and the third arc is
recorded as an event list from one vertex to the other, mixing self-crossing
visits with rail events where the arc crosses the circle.

Validation is two-stage: label multiplicity checks with specific messages,
then realizability on the sphere via face tracing of the induced rotation
system.  Crossing rotations are forced by signs (self crossings) or by the
side-alternation of the arc across the circle (rail crossings); only the two
trivalent vertices have free rotations, searched over their 2x2 choices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Union

from .planar import PlanarMap, face_trace

OVER = "o"
UNDER = "u"


class CodeError(ValueError):
    """Invalid diagram code (syntax, multiplicity, or nonplanarity)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GaussEvent(NamedTuple):
    label: str
    role: str  # OVER | UNDER
    sign: int  # +1 | -1


class RailEvent(NamedTuple):
    label: str
    tag: str  # OVER if the arc passes over the circle, UNDER otherwise


ArcEvent = Union[GaussEvent, RailEvent]


# Rotation layout per crossing, counterclockwise, as dart offsets 0..3.
# Positive crossing: [O_out, U_out, O_in, U_in]; negative swaps the under
# slots.  `sign_of_slots` inverts this: with over entering at slot a and
# under entering at slot b, the sign is +1 iff b == a + 1 (mod 4).
_SLOTS = {
    +1: {"O_out": 0, "U_out": 1, "O_in": 2, "U_in": 3},
    -1: {"O_out": 0, "U_in": 1, "O_in": 2, "U_out": 3},
}


def sign_of_slots(over_in: int, under_in: int) -> int:
    return +1 if (over_in + 1) % 4 == under_in % 4 else -1


@dataclass(frozen=True)
class KnotCode:
    """Signed Gauss code of a knot diagram."""

    events: tuple[GaussEvent, ...]

    def __len__(self) -> int:
        return len(self.events) // 2

    def labels(self) -> list[str]:
        seen = []
        for ev in self.events:
            if ev.label not in seen:
                seen.append(ev.label)
        return seen

    def writhe(self) -> int:
        return sum(ev.sign for ev in self.events) // 2

    def canonical(self) -> "KnotCode":
        """Relabel crossings 1..n by first appearance along the traversal."""
        names = {lab: str(i + 1) for i, lab in enumerate(self.labels())}
        return KnotCode(tuple(GaussEvent(names[e.label], e.role, e.sign) for e in self.events))

    def mirror(self) -> "KnotCode":
        return KnotCode(tuple(GaussEvent(e.label, e.role, -e.sign) for e in self.events))


@dataclass(frozen=True)
class KnotMap:
    """Rotation system of a knot code plus dart bookkeeping.

    Crossing j (in first-appearance order) owns darts 4j..4j+3, listed CCW.
    `enter`/`leave` give the dart used by each event of the traversal, and
    `edge_of` names the strand arc (= event index of its outgoing end) each
    dart lies on.
    """

    pmap: PlanarMap
    crossing_order: tuple[str, ...]
    enter: tuple[int, ...]
    leave: tuple[int, ...]
    edge_of: dict[int, int]
    over_enter_slot: dict[str, int]
    under_enter_slot: dict[str, int]


def _check_knot_multiplicity(events: tuple[GaussEvent, ...]) -> None:
    by_label: dict[str, list[GaussEvent]] = {}
    for ev in events:
        if ev.role not in (OVER, UNDER):
            raise CodeError(f"label {ev.label} has invalid role {ev.role!r}")
        if ev.sign not in (+1, -1):
            raise CodeError(f"label {ev.label} has invalid sign {ev.sign!r}")
        by_label.setdefault(ev.label, []).append(ev)
    for lab, evs in by_label.items():
        if len(evs) == 1:
            raise CodeError(f"label {lab} occurs once")
        if len(evs) > 2:
            raise CodeError(f"label {lab} occurs {len(evs)} times")
        roles = sorted(e.role for e in evs)
        if roles != [OVER, UNDER]:
            raise CodeError(f"label {lab} has roles {evs[0].role.upper()},{evs[1].role.upper()}")
        if evs[0].sign != evs[1].sign:
            raise CodeError(f"label {lab} has mismatched signs")


def knot_map(code: KnotCode) -> KnotMap:
    """Build the rotation system induced by the signs.  No planarity check."""
    _check_knot_multiplicity(code.events)
    order = code.labels()
    base = {lab: 4 * j for j, lab in enumerate(order)}
    sign_of = {ev.label: ev.sign for ev in code.events}
    rotations = tuple(tuple(range(base[lab], base[lab] + 4)) for lab in order)

    enter, leave = [], []
    for ev in code.events:
        slots = _SLOTS[sign_of[ev.label]]
        if ev.role == OVER:
            i, o = slots["O_in"], slots["O_out"]
        else:
            i, o = slots["U_in"], slots["U_out"]
        enter.append(base[ev.label] + i)
        leave.append(base[ev.label] + o)

    m = len(code.events)
    pairing = tuple((leave[i], enter[(i + 1) % m]) for i in range(m))
    edge_of = {}
    for i in range(m):
        edge_of[leave[i]] = i
        edge_of[enter[(i + 1) % m]] = i

    over_slot = {lab: _SLOTS[sign_of[lab]]["O_in"] for lab in order}
    under_slot = {lab: _SLOTS[sign_of[lab]]["U_in"] for lab in order}
    return KnotMap(
        pmap=PlanarMap(rotations=rotations, pairing=pairing),
        crossing_order=tuple(order),
        enter=tuple(enter),
        leave=tuple(leave),
        edge_of=edge_of,
        over_enter_slot=over_slot,
        under_enter_slot=under_slot,
    )


def validate_knot(code: KnotCode) -> KnotMap:
    """Full validation: multiplicities, then genus-0 face trace."""
    km = knot_map(code)
    _, genus = face_trace(km.pmap)
    if genus != 0:
        raise CodeError("not a planar diagram")
    return km


@dataclass(frozen=True)
class ThetaCode:
    """Theta-curve in branch-circle normal position.

    `arc_events` runs along the third arc from v1 to v2; `rail_order` is the
    cyclic order of v1, v2 and the rail labels around the branch circle.
    `provenance` is in-memory construction history (never serialized) used
    for composite certificates.
    """

    arc_events: tuple[ArcEvent, ...]
    rail_order: tuple[str, ...]
    provenance: object = field(default=None, compare=False, repr=False)

    def self_labels(self) -> list[str]:
        seen = []
        for ev in self.arc_events:
            if isinstance(ev, GaussEvent) and ev.label not in seen:
                seen.append(ev.label)
        return seen

    def rail_labels(self) -> list[str]:
        return [ev.label for ev in self.arc_events if isinstance(ev, RailEvent)]

    def self_crossing_count(self) -> int:
        return len(self.self_labels())

    def cut_count(self) -> int:
        """Rail events where the arc passes over the circle."""
        return sum(1 for ev in self.arc_events if isinstance(ev, RailEvent) and ev.tag == OVER)

    def canonical(self) -> "ThetaCode":
        """Relabel by first appearance along the arc; rail order starts at v1."""
        s_names = {lab: str(i + 1) for i, lab in enumerate(self.self_labels())}
        r_names = {lab: str(i + 1) for i, lab in enumerate(self.rail_labels())}
        events = tuple(
            GaussEvent(s_names[e.label], e.role, e.sign)
            if isinstance(e, GaussEvent)
            else RailEvent(r_names[e.label], e.tag)
            for e in self.arc_events
        )
        k = self.rail_order.index("v1")
        ring = self.rail_order[k:] + self.rail_order[:k]
        ring = tuple(x if x in ("v1", "v2") else r_names[x] for x in ring)
        return ThetaCode(events, ring)


@dataclass(frozen=True)
class ThetaMap:
    """Accepted rotation system for a theta code.

    `first_side` is the searched side (0 or 1) of the arc's first segment;
    segment sides alternate at rail events.  `vertex_kinds` parallels the
    rotation list: ("self", label), ("rail", label), ("v1",) or ("v2",).
    `arc_pairs` lists the arc's edges from v1 to v2 as (out dart, in dart);
    `kappa_pairs` walks the branch circle along the rail order the same way.
    """

    pmap: PlanarMap
    first_side: int
    v2_choice: int
    vertex_kinds: tuple[tuple, ...]
    enter: tuple[int, ...]
    leave: tuple[int, ...]
    arc_pairs: tuple[tuple[int, int], ...]
    kappa_pairs: tuple[tuple[int, int], ...]


def _check_theta_multiplicity(theta: ThetaCode) -> None:
    selfs: dict[str, list[GaussEvent]] = {}
    rails: list[str] = []
    for ev in theta.arc_events:
        if isinstance(ev, GaussEvent):
            selfs.setdefault(ev.label, []).append(ev)
        else:
            if ev.tag not in (OVER, UNDER):
                raise CodeError(f"rail {ev.label} has invalid tag {ev.tag!r}")
            rails.append(ev.label)
    for lab, evs in selfs.items():
        if len(evs) == 1:
            raise CodeError(f"label {lab} occurs once")
        if len(evs) > 2:
            raise CodeError(f"label {lab} occurs {len(evs)} times")
        if sorted(e.role for e in evs) != [OVER, UNDER]:
            raise CodeError(f"label {lab} has roles {evs[0].role.upper()},{evs[1].role.upper()}")
        if evs[0].sign != evs[1].sign:
            raise CodeError(f"label {lab} has mismatched signs")
    if len(rails) != len(set(rails)):
        dup = sorted({r for r in rails if rails.count(r) > 1})[0]
        raise CodeError(f"rail label {dup} occurs more than once on the arc")
    ring = list(theta.rail_order)
    for v in ("v1", "v2"):
        if ring.count(v) != 1:
            raise CodeError(f"axis must contain {v} exactly once")
    ring_rails = [x for x in ring if x not in ("v1", "v2")]
    if sorted(ring_rails) != sorted(set(ring_rails)):
        dup = sorted({r for r in ring_rails if ring_rails.count(r) > 1})[0]
        raise CodeError(f"rail label {dup} repeated on the axis")
    if set(ring_rails) != set(rails):
        missing = sorted(set(rails) ^ set(ring_rails))
        raise CodeError(f"arc and axis disagree on rail labels: {', '.join(missing)}")


def _theta_map_attempt(theta: ThetaCode, first_side: int, v2_choice: int) -> ThetaMap:
    """Build the rotation system for one assignment of the free choices."""
    events = theta.arc_events
    m = len(events)

    # Side of the segment entering each event: flips at every rail event.
    side_in = []
    s = first_side
    for ev in events:
        side_in.append(s)
        if isinstance(ev, RailEvent):
            s = 1 - s
    v2_side = v2_choice  # searched; the geometric value is s

    rotations: list[tuple[int, ...]] = []
    kinds: list[tuple] = []
    next_dart = 0

    def alloc(k: int) -> int:
        nonlocal next_dart
        b = next_dart
        next_dart += k
        return b

    # Trivalent vertices.  Rotations (CCW): with the circle entering from the
    # south and leaving north, the arc end sits west for side 0, east for 1.
    b_v1 = alloc(3)
    if first_side == 0:
        v1_k_out, v1_e_out, v1_k_in = b_v1, b_v1 + 1, b_v1 + 2
    else:
        v1_k_out, v1_k_in, v1_e_out = b_v1, b_v1 + 1, b_v1 + 2
    rotations.append((b_v1, b_v1 + 1, b_v1 + 2))
    kinds.append(("v1",))

    b_v2 = alloc(3)
    if v2_side == 0:
        v2_k_out, v2_e_in, v2_k_in = b_v2, b_v2 + 1, b_v2 + 2
    else:
        v2_k_out, v2_k_in, v2_e_in = b_v2, b_v2 + 1, b_v2 + 2
    rotations.append((b_v2, b_v2 + 1, b_v2 + 2))
    kinds.append(("v2",))

    self_base: dict[str, int] = {}
    self_sign: dict[str, int] = {}
    rail_darts: dict[str, dict[str, int]] = {}
    enter, leave = [], []

    for i, ev in enumerate(events):
        if isinstance(ev, GaussEvent):
            if ev.label not in self_base:
                b = alloc(4)
                self_base[ev.label] = b
                self_sign[ev.label] = ev.sign
                rotations.append((b, b + 1, b + 2, b + 3))
                kinds.append(("self", ev.label))
            b = self_base[ev.label]
            slots = _SLOTS[self_sign[ev.label]]
            if ev.role == OVER:
                enter.append(b + slots["O_in"])
                leave.append(b + slots["O_out"])
            else:
                enter.append(b + slots["U_in"])
                leave.append(b + slots["U_out"])
        else:
            b = alloc(4)
            rotations.append((b, b + 1, b + 2, b + 3))
            kinds.append(("rail", ev.label))
            if side_in[i] == 0:
                # CCW [k_out, e_in, k_in, e_out]
                rd = {"k_out": b, "e_in": b + 1, "k_in": b + 2, "e_out": b + 3}
            else:
                # CCW [k_out, e_out, k_in, e_in]
                rd = {"k_out": b, "e_out": b + 1, "k_in": b + 2, "e_in": b + 3}
            rail_darts[ev.label] = rd
            enter.append(rd["e_in"])
            leave.append(rd["e_out"])

    pairing: list[tuple[int, int]] = []

    # The arc from v1 through its events to v2.
    arc_pairs = []
    prev_out = v1_e_out
    for i in range(m):
        arc_pairs.append((prev_out, enter[i]))
        prev_out = leave[i]
    arc_pairs.append((prev_out, v2_e_in))
    pairing.extend(arc_pairs)

    # The circle along rail_order.
    def k_darts(name: str) -> tuple[int, int]:
        if name == "v1":
            return v1_k_in, v1_k_out
        if name == "v2":
            return v2_k_in, v2_k_out
        rd = rail_darts[name]
        return rd["k_in"], rd["k_out"]

    kappa_pairs = []
    ring = theta.rail_order
    for p, name in enumerate(ring):
        nxt = ring[(p + 1) % len(ring)]
        kappa_pairs.append((k_darts(name)[1], k_darts(nxt)[0]))
    pairing.extend(kappa_pairs)

    return ThetaMap(
        pmap=PlanarMap(rotations=tuple(rotations), pairing=tuple(pairing)),
        first_side=first_side,
        v2_choice=v2_choice,
        vertex_kinds=tuple(kinds),
        enter=tuple(enter),
        leave=tuple(leave),
        arc_pairs=tuple(arc_pairs),
        kappa_pairs=tuple(kappa_pairs),
    )


def validate_theta(theta: ThetaCode) -> ThetaMap:
    """Multiplicity checks, then the 2x2 trivalent-rotation search.

    The first genus-0 assignment wins; the two-fold ambiguity that survives
    on symmetric inputs is a reflection and never affects primality.
    """
    _check_theta_multiplicity(theta)
    for first_side in (0, 1):
        for v2_choice in (0, 1):
            tm = _theta_map_attempt(theta, first_side, v2_choice)
            _, genus = face_trace(tm.pmap)
            if genus == 0:
                return tm
    raise CodeError("not a planar diagram")


# ---------------------------------------------------------------------------
# File formats


def _logical_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _split_directive(line: str, lineno: int, key: str) -> list[str]:
    head, _, rest = line.partition(":")
    if head.strip() != key:
        raise CodeError(f"expected '{key}:' directive, got {head.strip()!r}", lineno)
    return rest.split()


_ID = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"


def _parse_knot_token(tok: str, lineno: int) -> GaussEvent:
    if len(tok) >= 3 and tok[0] in "OU" and tok[-1] in "+-":
        label = tok[1:-1]
        if label and all(c in _ID for c in label):
            role = OVER if tok[0] == "O" else UNDER
            return GaussEvent(label, role, +1 if tok[-1] == "+" else -1)
    raise CodeError(f"unknown token {tok!r}", lineno)


def parse_knot(text: str) -> KnotCode:
    """Parse and validate a knot-file."""
    lines = _logical_lines(text)
    if not lines or lines[0][1] != "%knot":
        lineno = lines[0][0] if lines else 1
        raise CodeError("missing %knot header", lineno)
    if len(lines) < 2:
        raise CodeError("missing gauss: line", lines[0][0])
    if len(lines) > 2:
        raise CodeError(f"unexpected extra line {lines[2][1]!r}", lines[2][0])
    lineno, gline = lines[1]
    toks = _split_directive(gline, lineno, "gauss")
    code = KnotCode(tuple(_parse_knot_token(t, lineno) for t in toks))
    validate_knot(code)
    return code


def serialize_knot(code: KnotCode) -> str:
    canon = code.canonical()
    toks = [
        ("O" if e.role == OVER else "U") + e.label + ("+" if e.sign > 0 else "-")
        for e in canon.events
    ]
    body = " ".join(toks)
    return "%knot\ngauss:" + (" " + body if body else "") + "\n"


def _parse_arc_token(tok: str, lineno: int) -> ArcEvent:
    if len(tok) >= 4 and tok[0] == "x" and tok[-1] in "ou" and tok[-2] in "+-":
        label = tok[1:-2]
        if label and all(c in _ID for c in label):
            return GaussEvent(label, tok[-1], +1 if tok[-2] == "+" else -1)
    if len(tok) >= 3 and tok[0] == "k" and tok[-1] in "ou":
        label = tok[1:-1]
        if label and all(c in _ID for c in label):
            return RailEvent(label, tok[-1])
    raise CodeError(f"unknown token {tok!r}", lineno)


def parse_theta(text: str) -> ThetaCode:
    """Parse and validate a theta-file."""
    lines = _logical_lines(text)
    if not lines or lines[0][1] != "%theta":
        lineno = lines[0][0] if lines else 1
        raise CodeError("missing %theta header", lineno)
    if len(lines) < 3:
        raise CodeError("need arc: and axis: lines", lines[-1][0])
    if len(lines) > 3:
        raise CodeError(f"unexpected extra line {lines[3][1]!r}", lines[3][0])
    arc_no, arc_line = lines[1]
    axis_no, axis_line = lines[2]
    arc_toks = _split_directive(arc_line, arc_no, "arc")
    events = tuple(_parse_arc_token(t, arc_no) for t in arc_toks)
    ring = []
    for tok in _split_directive(axis_line, axis_no, "axis"):
        if tok in ("v1", "v2"):
            ring.append(tok)
        elif len(tok) >= 2 and tok[0] == "k" and all(c in _ID for c in tok[1:]):
            ring.append(tok[1:])
        else:
            raise CodeError(f"unknown token {tok!r}", axis_no)
    theta = ThetaCode(events, tuple(ring))
    validate_theta(theta)
    return theta


def serialize_theta(theta: ThetaCode) -> str:
    canon = theta.canonical()
    toks = []
    for e in canon.arc_events:
        if isinstance(e, GaussEvent):
            toks.append("x" + e.label + ("+" if e.sign > 0 else "-") + e.role)
        else:
            toks.append("k" + e.label + e.tag)
    ring = " ".join(x if x in ("v1", "v2") else "k" + x for x in canon.rail_order)
    body = " ".join(toks)
    return "%theta\narc:" + (" " + body if body else "") + "\naxis: " + ring + "\n"
