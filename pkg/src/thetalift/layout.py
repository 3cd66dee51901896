"""Straight-line plane layouts of genus-0 maps.

The map is stellated: every edge gets two interior nodes and every face a
center node joined to the boundary, which yields a simple planar
triangulation.  The largest face is taken as the outer face, its boundary is
pinned to a convex polygon, and interior nodes solve the barycentric
(Tutte) system.  Output positions are deterministic for identical input.
"""

from __future__ import annotations

import numpy as np

from .planar import PlanarMap


class LayoutError(ValueError):
    pass


def layout_map(pmap: PlanarMap) -> dict:
    """Coordinates for a genus-0 map.

    Returns {"vertex": {vertex_index: (x, y)}, "edge": {frozenset dart pair:
    [(x, y), ...] polyline including endpoints}, "outer_face": face index}.
    """
    rotations = pmap.rotations
    if sum(len(r) for r in rotations) == 0:
        raise LayoutError("empty map has no layout; draw a circle instead")
    twin = pmap.twin
    vertex_of = {}
    for vi, rot in enumerate(rotations):
        for d in rot:
            vertex_of[d] = vi

    faces = pmap.faces()
    outer = max(range(len(faces)), key=lambda fi: (len(faces[fi]), -faces[fi][0]))

    # Aux graph nodes: ("v", i), ("m", dart) near-midpoint per dart, ("f", fi).
    nodes: list[tuple] = []
    index: dict[tuple, int] = {}

    def nid(key: tuple) -> int:
        if key not in index:
            index[key] = len(nodes)
            nodes.append(key)
        return index[key]

    adj: dict[int, set[int]] = {}

    def link(a: int, b: int) -> None:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    for vi in range(len(rotations)):
        nid(("v", vi))
    for d in vertex_of:
        nid(("m", d))
    for d, vi in vertex_of.items():
        link(index[("v", vi)], index[("m", d)])
        link(index[("m", d)], index[("m", twin[d])])

    for fi, face in enumerate(faces):
        if fi == outer:
            continue
        f = nid(("f", fi))
        for d in face:
            link(f, index[("v", vertex_of[d])])
            link(f, index[("m", d)])
            link(f, index[("m", twin[d])])

    # Pin the outer face boundary walk: v(d), m(d), m(twin d) per dart.
    boundary: list[int] = []
    for d in faces[outer]:
        boundary.append(index[("v", vertex_of[d])])
        boundary.append(index[("m", d)])
        boundary.append(index[("m", twin[d])])
    seen = set()
    ring = []
    for b in boundary:
        if b not in seen:
            seen.add(b)
            ring.append(b)

    n = len(nodes)
    pinned = {}
    for k, b in enumerate(ring):
        ang = 2.0 * np.pi * k / len(ring)
        pinned[b] = (np.cos(ang), np.sin(ang))

    free = [i for i in range(n) if i not in pinned]
    fidx = {node: k for k, node in enumerate(free)}
    a_mat = np.zeros((len(free), len(free)))
    bx = np.zeros(len(free))
    by = np.zeros(len(free))
    for i in free:
        k = fidx[i]
        nbrs = sorted(adj.get(i, ()))
        if not nbrs:
            raise LayoutError("isolated node in stellation")
        a_mat[k, k] = len(nbrs)
        for j in nbrs:
            if j in pinned:
                bx[k] += pinned[j][0]
                by[k] += pinned[j][1]
            else:
                a_mat[k, fidx[j]] -= 1.0
    xs = np.linalg.solve(a_mat, bx)
    ys = np.linalg.solve(a_mat, by)

    pos = {}
    for node, i in index.items():
        if i in pinned:
            pos[node] = pinned[i]
        else:
            pos[node] = (float(xs[fidx[i]]), float(ys[fidx[i]]))

    vertex_pos = {vi: pos[("v", vi)] for vi in range(len(rotations))}
    edge_lines = {}
    for d, dt in twin.items():
        key = frozenset((d, dt))
        if key in edge_lines:
            continue
        a, b = min(d, dt), max(d, dt)
        edge_lines[key] = [
            vertex_pos[vertex_of[a]],
            pos[("m", a)],
            pos[("m", b)],
            vertex_pos[vertex_of[b]],
        ]
    return {"vertex": vertex_pos, "edge": edge_lines, "outer_face": outer}
