"""Reidemeister simplification of knot codes.

Move sites are read off the face structure of the diagram: a monogon face is
an R1 kink, a bigon face whose parallel strand passes over at both ends is a
poke, and a triangle face with edge role pattern {over-over, under-under,
mixed} admits a slide.  Greedy R1/R2 reduction runs to exhaustion; when
stuck, a breadth-limited search over R3 slides looks for a position that
re-enables a reduction.  Simplification is heuristic: failure to reach zero
crossings proves nothing by itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codes import OVER, UNDER, GaussEvent, KnotCode, knot_map, validate_knot

DEFAULT_BUDGET = 10_000


@dataclass
class MoveTrace:
    initial_crossings: int
    final_crossings: int = 0
    moves: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)

    def record(self, kind: str, labels: tuple[str, ...]) -> None:
        self.moves.append((kind, labels))


def _faces_with_roles(code: KnotCode):
    """Face cycles as lists of adjacent event-index pairs with their roles."""
    km = knot_map(code)
    m = len(code.events)
    enter_at = {km.enter[i]: i for i in range(m)}
    out: list[list[tuple[int, int]]] = []
    for face in km.pmap.faces():
        pairs = []
        for d in face:
            e = km.edge_of[d]
            pairs.append((e, (e + 1) % m))
        out.append(pairs)
    return out


def _find_r1(code: KnotCode):
    """Monogon faces; returns the lexicographically first kink label."""
    sites = []
    for face in _faces_with_roles(code):
        if len(face) == 1:
            i, j = face[0]
            if code.events[i].label == code.events[j].label:
                sites.append(code.events[i].label)
    return min(sites) if sites else None


def _find_r2(code: KnotCode):
    """Bigon faces where one strand is over at both crossings."""
    sites = []
    for face in _faces_with_roles(code):
        if len(face) != 2:
            continue
        (i1, j1), (i2, j2) = face
        ev = code.events
        lab1 = {ev[i1].label, ev[j1].label}
        lab2 = {ev[i2].label, ev[j2].label}
        if lab1 != lab2 or len(lab1) != 2:
            continue
        roles1 = (ev[i1].role, ev[j1].role)
        roles2 = (ev[i2].role, ev[j2].role)
        if set(roles1) == {OVER} and set(roles2) == {UNDER}:
            sites.append(tuple(sorted(lab1)))
        elif set(roles1) == {UNDER} and set(roles2) == {OVER}:
            sites.append(tuple(sorted(lab1)))
    return min(sites) if sites else None


def _find_r3(code: KnotCode):
    """Triangle faces with roles {OO, UU, mixed}; list of index-pair triples."""
    sites = []
    ev = code.events
    for face in _faces_with_roles(code):
        if len(face) != 3:
            continue
        labels = set()
        for i, j in face:
            labels.add(ev[i].label)
            labels.add(ev[j].label)
        if len(labels) != 3:
            continue
        kinds = []
        for i, j in face:
            r = {ev[i].role, ev[j].role}
            kinds.append("O" if r == {OVER} else "U" if r == {UNDER} else "M")
        if sorted(kinds) == ["M", "O", "U"]:
            sites.append(tuple(sorted(face)))
    return sorted(set(sites))


def _drop_labels(code: KnotCode, labels: set[str]) -> KnotCode:
    return KnotCode(tuple(e for e in code.events if e.label not in labels))


def _apply_r3(code: KnotCode, site) -> KnotCode:
    events = list(code.events)
    m = len(events)
    for i, j in site:
        if (i + 1) % m != j:
            raise ValueError("R3 site is not an adjacent pair")
        events[i], events[j] = events[j], events[i]
    return KnotCode(tuple(events))


def simplify(code: KnotCode, budget: int = DEFAULT_BUDGET) -> tuple[KnotCode, MoveTrace]:
    """Greedy R1/R2 with budgeted R3 exploration; invariant-preserving."""
    validate_knot(code)
    trace = MoveTrace(initial_crossings=len(code))
    cur = code.canonical()
    steps = 0

    def reduce_greedy(c: KnotCode) -> KnotCode:
        nonlocal steps
        while steps < budget:
            lab = _find_r1(c)
            if lab is not None:
                c = _drop_labels(c, {lab}).canonical()
                trace.record("R1", (lab,))
                steps += 1
                continue
            pair = _find_r2(c)
            if pair is not None:
                c = _drop_labels(c, set(pair)).canonical()
                trace.record("R2", pair)
                steps += 1
                continue
            break
        return c

    cur = reduce_greedy(cur)
    while len(cur) > 0 and steps < budget:
        # Breadth-limited R3 search for a code that re-enables a reduction.
        start = cur.canonical()
        frontier = [(start, ())]
        seen = {start.events}
        found = None
        while frontier and steps < budget and found is None:
            nxt = []
            for c, path in frontier:
                for site in _find_r3(c):
                    if steps >= budget:
                        break
                    c2 = _apply_r3(c, site)
                    steps += 1
                    key = c2.canonical().events
                    if key in seen:
                        continue
                    seen.add(key)
                    if _find_r1(c2) is not None or _find_r2(c2) is not None:
                        found = (c2, path + (site,))
                        break
                    if len(path) < 3:
                        nxt.append((c2, path + (site,)))
                if found:
                    break
            frontier = nxt
        if found is None:
            break
        c2, path = found
        for site in path:
            trace.record("R3", tuple(f"{i}-{j}" for i, j in site))
        cur = reduce_greedy(c2.canonical())

    trace.final_crossings = len(cur)
    return cur.canonical(), trace
