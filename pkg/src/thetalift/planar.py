"""Rotation systems on the sphere: darts, edge pairings, face tracing.

A combinatorial map is stored as a list of vertex rotations (each a cyclic
tuple of darts in counterclockwise order) together with the edge involution
pairing each dart with the opposite end of its edge.  Faces are the orbits
of  d -> next_at_vertex(twin(d)),  and the genus comes from Euler's formula

    V - E + F = 2 - 2g.

A map with no darts at all is read as a bare circle on the sphere, which has
two faces and genus zero.
"""

from __future__ import annotations

from dataclasses import dataclass


class MapError(ValueError):
    """Raised when a rotation system is structurally ill-formed."""


@dataclass(frozen=True)
class PlanarMap:
    """Vertex rotations plus edge pairing; darts are arbitrary integers."""

    rotations: tuple[tuple[int, ...], ...]
    pairing: tuple[tuple[int, int], ...]

    def __post_init__(self):
        darts = [d for rot in self.rotations for d in rot]
        if len(darts) != len(set(darts)):
            raise MapError("a dart appears in more than one rotation slot")
        dart_set = set(darts)
        twin = {}
        for a, b in self.pairing:
            if a == b:
                raise MapError(f"dart {a} paired with itself")
            for d in (a, b):
                if d not in dart_set:
                    raise MapError(f"paired dart {d} missing from rotations")
                if d in twin:
                    raise MapError(f"dart {d} paired twice")
            twin[a] = b
            twin[b] = a
        if set(twin) != dart_set:
            raise MapError("pairing does not cover every dart")

    @property
    def twin(self) -> dict[int, int]:
        t = {}
        for a, b in self.pairing:
            t[a] = b
            t[b] = a
        return t

    def faces(self) -> list[tuple[int, ...]]:
        """Orbits of the face permutation, each a dart cycle."""
        nxt = {}
        for rot in self.rotations:
            for i, d in enumerate(rot):
                nxt[d] = rot[(i + 1) % len(rot)]
        twin = self.twin
        seen: set[int] = set()
        out = []
        for d0 in sorted(nxt):
            if d0 in seen:
                continue
            cycle = []
            d = d0
            while d not in seen:
                seen.add(d)
                cycle.append(d)
                d = nxt[twin[d]]
            out.append(tuple(cycle))
        return out


def face_trace(pmap: PlanarMap) -> tuple[int, int]:
    """Return (face count, genus) of the map.

    Total on well-formed maps; the empty map counts as a circle (2 faces).
    """
    n_darts = sum(len(r) for r in pmap.rotations)
    if n_darts == 0:
        return 2, 0
    v = len(pmap.rotations)
    e = n_darts // 2
    f = len(pmap.faces())
    euler = v - e + f
    genus2 = 2 - euler
    if genus2 % 2 != 0:
        raise MapError("odd Euler defect; map is not orientable-consistent")
    return f, genus2 // 2
