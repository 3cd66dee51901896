"""Numeric double-branched-cover lift, used as ground truth for the
combinatorial construction and by the Kinoshita generator.

The validated theta map is drawn with the branch circle as the exact unit
circle: each side of the circle is laid out by a pinned Tutte solve (the
outside through a plane inversion), the arc gets depth at its crossings, and
the embedding is verified by re-extracting the theta code from the projected
geometry (this self-calibrates all reflection conventions).  The arc is then
lifted through the honest angle-halving branched cover after a second
inversion straightens the circle into an axis, and the lifted knot's code is
read off the projection.

Honest geometry, no combinatorial conventions: authoritative up to global
mirror image.
"""

from __future__ import annotations

import math
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from thetalift.codes import (
    OVER,
    UNDER,
    GaussEvent,
    KnotCode,
    RailEvent,
    ThetaCode,
    validate_knot,
    validate_theta,
)

DEPTH = 0.08


class GeomError(RuntimeError):
    pass


def _face_sides(tm):
    """2-color the faces: crossing a kappa edge flips sides."""
    faces = tm.pmap.faces()
    face_of = {}
    for fi, f in enumerate(faces):
        for d in f:
            face_of[d] = fi
    kappa_edges = {frozenset(p) for p in tm.kappa_pairs}
    twin = tm.pmap.twin
    color = {0: 0}
    queue = [0]
    while queue:
        fi = queue.pop()
        for d in faces[fi]:
            fj = face_of[twin[d]]
            flip = 1 if frozenset((d, twin[d])) in kappa_edges else 0
            c = color[fi] ^ flip
            if fj not in color:
                color[fj] = c
                queue.append(fj)
            elif color[fj] != c:
                raise GeomError("kappa is not two-sided in this map")
    return faces, face_of, color, kappa_edges


def _side_positions(tm, theta, inside_color, global_mirror):
    """Tutte positions for all nodes, with kappa as the unit circle."""
    faces, face_of, color, kappa_edges = _face_sides(tm)
    twin = tm.pmap.twin
    vertex_of = {}
    for vi, rot in enumerate(tm.pmap.rotations):
        for d in rot:
            vertex_of[d] = vi

    ring = list(theta.rail_order)
    k = ring.index("v1")
    ring = ring[k:] + ring[:k]
    name_to_vertex = {}
    for vi, kind in enumerate(tm.vertex_kinds):
        if kind[0] in ("v1", "v2"):
            name_to_vertex[kind[0]] = vi
        elif kind[0] == "rail":
            name_to_vertex[kind[1]] = vi

    nring = len(ring)
    sgn = -1.0 if global_mirror else 1.0
    # slight deterministic wobble keeps symmetric inputs away from exact
    # degeneracies (a node at the origin would invert to infinity)
    def spot_theta(i):
        return sgn * 2 * math.pi * (i + 0.08 * math.sin(2.3 * i + 0.7)) / nring

    spot_angle = {name_to_vertex[name]: spot_theta(i) for i, name in enumerate(ring)}
    gap_angle = {i: (spot_theta(i) + spot_theta(i + 1)) / 2.0 for i in range(nring)}

    e_edges = [frozenset(p) for p in tm.arc_pairs]
    pos: dict[tuple, tuple[float, float]] = {}
    edge_lines: dict[frozenset, list[tuple[float, float]]] = {}
    for vi, ang in spot_angle.items():
        pos[("v", vi)] = (math.cos(ang), math.sin(ang))
    for i, pair in enumerate(tm.kappa_pairs):
        a, b = pair
        ang = gap_angle[i]
        pos[("km", frozenset((a, b)))] = (math.cos(ang), math.sin(ang))

    for side in (0, 1):
        is_inside = side == inside_color
        nodes: list[tuple] = []
        index: dict[tuple, int] = {}

        def nid(key):
            if key not in index:
                index[key] = len(nodes)
                nodes.append(key)
            return index[key]

        adj: dict[int, set[int]] = {}

        def link(a, b):
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)

        side_edges = [e for e in e_edges if color[face_of[next(iter(e))]] == side]
        side_vertices = set()
        for e in side_edges:
            for d in e:
                side_vertices.add(vertex_of[d])
        for e in side_edges:
            a, b = sorted(e)
            link(nid(("v", vertex_of[a])), nid(("m", a)))
            link(nid(("m", a)), nid(("m", b)))
            link(nid(("m", b)), nid(("v", vertex_of[b])))
        for fi, f in enumerate(faces):
            if color[fi] != side:
                continue
            cf = nid(("f", fi))
            for d in f:
                e = frozenset((d, twin[d]))
                link(cf, nid(("v", vertex_of[d])))
                if e in kappa_edges:
                    link(cf, nid(("km", e)))
                else:
                    link(cf, nid(("m", d)))
                    link(cf, nid(("m", twin[d])))

        pinned = {}
        for key, i in index.items():
            if key[0] == "v" and key[1] in spot_angle:
                pinned[i] = pos[("v", key[1])]
            elif key[0] == "km":
                pinned[i] = pos[key]

        free = [i for i in range(len(nodes)) if i not in pinned]
        if free:
            fidx = {i: k for k, i in enumerate(free)}
            a_mat = np.zeros((len(free), len(free)))
            bx = np.zeros(len(free))
            by = np.zeros(len(free))
            for i in free:
                kk = fidx[i]
                nbrs = sorted(adj.get(i, ()))
                if not nbrs:
                    raise GeomError("isolated node in side stellation")
                a_mat[kk, kk] = len(nbrs)
                for j in nbrs:
                    if j in pinned:
                        bx[kk] += pinned[j][0]
                        by[kk] += pinned[j][1]
                    else:
                        a_mat[kk, fidx[j]] -= 1.0
            xs = np.linalg.solve(a_mat, bx)
            ys = np.linalg.solve(a_mat, by)
        else:
            xs = ys = []

        def place(key):
            i = index[key]
            if i in pinned:
                return pinned[i]
            return float(xs[fidx[i]]), float(ys[fidx[i]])

        # polylines per side edge, built in disk coordinates and pushed
        # through the inversion pointwise for the outside
        for e in side_edges:
            a, b = sorted(e)
            chain = [
                place(("v", vertex_of[a])),
                place(("m", a)),
                place(("m", b)),
                place(("v", vertex_of[b])),
            ]
            fine = []
            for k in range(len(chain) - 1):
                p0 = np.asarray(chain[k])
                p1 = np.asarray(chain[k + 1])
                for j in range(0, 16):
                    fine.append(p0 + (p1 - p0) * (j / 16))
            fine.append(np.asarray(chain[-1]))
            if not is_inside:
                out = []
                for q in fine:
                    r2 = float(q @ q)
                    if r2 < 1e-12:
                        raise GeomError("outside point collapsed to the origin")
                    out.append(q / r2)
                fine = out
            edge_lines[e] = [tuple(q) for q in fine]
        for key in index:
            if key[0] == "v" and key not in pos:
                pos[key] = place(key)
    return pos, edge_lines


def _arc_polyline(tm, theta, pos, edge_lines, spread_ccw=True):
    """The arc as a 3D polyline with crossing depths, v1 to v2."""
    events = theta.arc_events
    vertex_of = {}
    for vi, rot in enumerate(tm.pmap.rotations):
        for d in rot:
            vertex_of[d] = vi

    pts: list[np.ndarray] = []
    # (index of crossing-vertex point, depth, enter dart, leave dart, rotation)
    marks: list[tuple] = []
    for i, (out_d, in_d) in enumerate(tm.arc_pairs):
        line2 = edge_lines[frozenset((out_d, in_d))]
        if out_d > in_d:
            line2 = list(reversed(line2))
        start = 1 if pts else 0
        for p in line2[start:]:
            pts.append(np.array([p[0], p[1], 0.0]))
        if i < len(events):
            ev = events[i]
            over = (ev.role == OVER) if isinstance(ev, GaussEvent) else (ev.tag == OVER)
            rot = tm.pmap.rotations[vertex_of[tm.enter[i]]]
            marks.append((len(pts) - 1, DEPTH if over else -DEPTH, tm.enter[i], tm.leave[i], rot))

    # Spread each self-crossing neighborhood: Tutte drawings may squash a
    # loop to a sliver, so rebuild a small disk around every crossing point
    # with the four branches entering at clean angles (their drawn cyclic
    # order is preserved; only the order is combinatorial data).
    pts_arr = np.array(pts)
    marked_set = {mk[0] for mk in marks}
    mark_info = {mk[0]: mk for mk in marks}
    by_xy: dict[tuple, list[int]] = {}
    for k in marked_set:
        key = (round(pts_arr[k][0], 9), round(pts_arr[k][1], 9))
        by_xy.setdefault(key, []).append(k)
    spread: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for key, ks in by_xy.items():
        if len(ks) != 2:
            continue  # rail spots and vertices keep their geometry
        v = pts_arr[ks[0]][:2]
        incident = set()
        for k in ks:
            incident.update(range(max(0, k - 200), min(len(pts_arr), k + 201)))
        rest = [i for i in range(len(pts_arr)) if i not in incident]
        caps = [0.1]
        if rest:
            caps.append(min(np.linalg.norm(pts_arr[i][:2] - v) for i in rest))
        # each branch's excursion before it returns near the vertex bounds
        # the spread radius (a kink loop may be tiny)
        for k in ks:
            for step in (-1, +1):
                i = k + step
                far = 0.0
                while 0 <= i < len(pts_arr):
                    d = np.linalg.norm(pts_arr[i][:2] - v)
                    far = max(far, d)
                    if i in marked_set and i != k:
                        break
                    i += step
                caps.append(far)
        eps = 0.3 * min(caps)
        if eps < 1e-7:
            raise GeomError("crossing neighborhood too crowded to spread")
        # branch exit points and darts; the cyclic order comes from the
        # map's own rotation (the drawing realizes it up to the global
        # reflections handled by the calibration loop)
        raw = {}
        for k in ks:
            _, _, in_dart, out_dart, rot = mark_info[k]
            for step, dart in ((-1, in_dart), (+1, out_dart)):
                i = k + step
                while 0 <= i < len(pts_arr) and np.linalg.norm(pts_arr[i][:2] - v) < eps:
                    i += step
                i = min(max(i, 0), len(pts_arr) - 1)
                raw[dart] = (k, step, i)
        rot = mark_info[ks[0]][4]
        order = [d for d in rot if d in raw]
        if len(order) != 4:
            raise GeomError("crossing rotation does not cover its branches")
        if not spread_ccw:
            order = list(reversed(order))
        k0, step0, i0 = raw[order[0]]
        base = math.atan2(*(pts_arr[i0][:2] - v)[::-1])
        for slot, dart in enumerate(order):
            k, step, i = raw[dart]
            target = base + slot * math.pi / 2.0
            # nudge each passage off the exact vertex so no three lifted
            # strands ever concur in projection
            nudge = 0.11 * eps * (1 if k == ks[0] else -1)
            off = nudge * np.array([math.cos(base + math.pi / 4), math.sin(base + math.pi / 4)])
            q = v + off + eps * np.array([math.cos(target), math.sin(target)])
            cur = spread.setdefault(k, [None, None])
            cur[0 if step < 0 else 1] = (q, i, eps)
    marked = {mk[0]: mk[1] for mk in marks}
    kill: set[int] = set()
    replace: dict[int, list[np.ndarray]] = {}
    for k in marked:
        if k in spread and spread[k][0] is not None and spread[k][1] is not None:
            depth = marked[k]
            (qa, ia, _), (qb, ib, _) = spread[k]
            kill.update(range(ia + 1, k))
            kill.update(range(k + 1, ib))
            replace[k] = [
                np.array([qa[0], qa[1], depth]),
                np.array([qb[0], qb[1], depth]),
            ]
    out: list[np.ndarray] = []
    for k, p in enumerate(pts_arr):
        if k in kill:
            continue
        if k in replace:
            out.extend(replace[k])
        elif k in marked:
            depth = marked[k]
            prev_p, next_p = pts_arr[k - 1], pts_arr[k + 1]
            a = p + (prev_p - p) * 0.04
            b = p + (next_p - p) * 0.04
            a[2] = depth
            b[2] = depth
            out.append(a)
            out.append(b)
        else:
            out.append(p)
    return np.array(out)


def _extract_theta(e_pts, tm, theta):
    """Re-read the theta code from the projected embedding."""
    n = len(e_pts)
    xy = e_pts[:, :2]
    z = e_pts[:, 2]
    events = []
    # self crossings: projected segment intersections
    hits = []
    for i in range(n - 1):
        a1, a2 = xy[i], xy[i + 1]
        da = a2 - a1
        for j in range(i + 2, n - 1):
            b1, b2 = xy[j], xy[j + 1]
            db = b2 - b1
            den = da[0] * db[1] - da[1] * db[0]
            if abs(den) < 1e-14:
                continue
            r = b1 - a1
            t = (r[0] * db[1] - r[1] * db[0]) / den
            u = (r[0] * da[1] - r[1] * da[0]) / den
            if not (1e-9 < t < 1 - 1e-9 and 1e-9 < u < 1 - 1e-9):
                continue
            za = z[i] + t * (z[i + 1] - z[i])
            zb = z[j] + u * (z[j + 1] - z[j])
            if abs(za - zb) < 1e-9:
                raise GeomError("tangent self crossing")
            hits.append((i + t, j + u, za > zb, da.copy(), db.copy()))
    for idx, (ta, tb, a_over, da, db) in enumerate(hits):
        d_over, d_under = (da, db) if a_over else (db, da)
        sign = 1 if (d_over[0] * d_under[1] - d_over[1] * d_under[0]) > 0 else -1
        events.append((ta, GaussEvent(f"x{idx}", "o" if a_over else "u", sign)))
        events.append((tb, GaussEvent(f"x{idx}", "u" if a_over else "o", sign)))
    # rail crossings: generic radius-1 transitions (the straddled passages
    # cross the circle at depth +-DEPTH near their spot)
    r = np.hypot(xy[:, 0], xy[:, 1])
    ring_hits = []
    for i in range(n - 1):
        if (r[i] - 1.0) * (r[i + 1] - 1.0) < 0:
            t = (1.0 - r[i]) / (r[i + 1] - r[i])
            zc = z[i] + t * (z[i + 1] - z[i])
            pc = xy[i] + t * (xy[i + 1] - xy[i])
            if abs(zc) < 1e-9:
                raise GeomError("arc crosses the circle at zero depth")
            ring_hits.append((i + t, zc, math.atan2(pc[1], pc[0])))
    for idx, (t, zc, ang) in enumerate(ring_hits):
        events.append((t, RailEvent(f"r{idx}", "o" if zc > 0 else "u")))

    events.sort(key=lambda kv: kv[0])
    arc = tuple(ev for _, ev in events)
    # rail order by angle, starting from v1's angle 0, counterclockwise
    ring_entries = [("v1", 0.0)]
    nring = len(theta.rail_order)
    v2_angle = 2 * math.pi * list(_rot_ring(theta)).index("v2") / nring
    ring_entries.append(("v2", v2_angle))
    for idx, (t, zc, ang) in enumerate(ring_hits):
        ring_entries.append((f"r{idx}", ang % (2 * math.pi)))
    ring_entries.sort(key=lambda kv: kv[1])
    ring = tuple(name for name, _ in ring_entries)
    return ThetaCode(arc, ring)


def _rot_ring(theta):
    ring = list(theta.rail_order)
    k = ring.index("v1")
    return ring[k:] + ring[:k]


def build_embedding(theta: ThetaCode):
    """Calibrated 3D embedding; the projected code equals the input code."""
    tm = validate_theta(theta)
    target = theta.canonical()
    for inside_color in (0, 1):
        for global_mirror in (False, True):
            for spread_ccw in (True, False):
                try:
                    pos, edge_lines = _side_positions(tm, theta, inside_color, global_mirror)
                    e_pts = _arc_polyline(tm, theta, pos, edge_lines, spread_ccw)
                    got = _extract_theta(e_pts, tm, theta)
                    got_c = got.canonical()
                except GeomError:
                    continue
                if got_c.arc_events == target.arc_events and _ring_equiv(got_c.rail_order, target.rail_order):
                    return e_pts
    raise GeomError("no calibration reproduces the input code")


def _ring_equiv(a, b):
    if len(a) != len(b):
        return False
    aa = list(a)
    k = aa.index("v1")
    aa = aa[k:] + aa[:k]
    bb = list(b)
    k = bb.index("v1")
    bb = bb[k:] + bb[:k]
    rev = [bb[0]] + list(reversed(bb[1:]))
    return aa == bb or aa == rev


def _dedup(points: np.ndarray, closed: bool = False) -> np.ndarray:
    keep = [0]
    for i in range(1, len(points)):
        if np.linalg.norm(points[i] - points[keep[-1]]) > 1e-12:
            keep.append(i)
    if closed and len(keep) > 1 and np.linalg.norm(points[keep[-1]] - points[keep[0]]) <= 1e-12:
        keep.pop()
    return points[keep]


def lift_geometrically(e_pts: np.ndarray, seed: int = 0) -> np.ndarray:
    """Invert the circle to an axis, halve angles, close both branches.

    A tiny seeded perturbation of the arc (applied before branching, so the
    deck symmetry of the result is exact) breaks accidental projective
    coincidences in the drawn input.
    """
    e_pts = _dedup(np.asarray(e_pts))
    # choose the inversion center on the circle, far from the arc
    best = None
    for k in range(64):
        ang = 2 * math.pi * (k + 0.5) / 64
        p = np.array([math.cos(ang), math.sin(ang), 0.0])
        dmin = np.min(np.linalg.norm(e_pts - p, axis=1))
        if best is None or dmin > best[1]:
            best = (p, dmin)
    p = best[0]
    if best[1] < 1e-3:
        raise GeomError("arc hugs the whole circle")

    q1 = (np.array([math.cos(0.0), math.sin(0.0), 0.0]) - p)
    q1 = q1 / np.dot(q1, q1)
    q2 = (np.array([math.cos(2.0), math.sin(2.0), 0.0]) - p)
    q2 = q2 / np.dot(q2, q2)
    u = q2 - q1
    u /= np.linalg.norm(u)
    x_axis = np.array([0.0, 0.0, 1.0])
    z_axis = u
    y_axis = np.cross(z_axis, x_axis)
    o = q1
    m = np.stack([x_axis, y_axis, z_axis])

    def to_frame(pts):
        d = pts - p
        inv = d / np.einsum("ij,ij->i", d, d)[:, None]
        return (inv - o) @ m.T

    # refine until angular steps around the axis are small
    for _ in range(24):
        e_f = to_frame(e_pts)
        phi = np.arctan2(e_f[1:-1, 1], e_f[1:-1, 0])
        steps = np.abs(np.diff(np.unwrap(phi)))
        bad = np.where(steps > 0.25)[0] + 1  # segment index in e_pts
        if len(bad) == 0:
            break
        mids = (e_pts[bad] + e_pts[bad + 1]) / 2.0
        e_pts = np.insert(e_pts, bad + 1, mids, axis=0)
    else:
        raise GeomError("angular refinement did not converge")

    e_f = to_frame(e_pts)
    if seed:
        rng = np.random.default_rng(seed)
        scale = 2e-4 * float(np.median(np.abs(e_f)))
        noise = rng.uniform(-scale, scale, size=e_f.shape)
        noise[0] = noise[-1] = 0.0
        e_f = e_f + noise
    r = np.hypot(e_f[:, 0], e_f[:, 1])
    phi = np.arctan2(e_f[:, 1], e_f[:, 0])
    r[0] = r[-1] = 0.0
    phi_u = np.array(phi)
    phi_u[1:-1] = np.unwrap(phi[1:-1])
    phi_u[0] = phi_u[1]
    phi_u[-1] = phi_u[-2]
    z = e_f[:, 2]

    def branch(shift):
        psi = phi_u / 2.0 + shift
        return np.stack([r * np.cos(psi), r * np.sin(psi), z], axis=1)

    b0 = branch(0.0)
    b1 = branch(math.pi)
    return _dedup(np.vstack([b0, b1[::-1][1:-1]]), closed=True)


def code_from_curve(k3d: np.ndarray, seed: int = 0) -> KnotCode:
    """Project a closed 3D polyline along +x and read off the signed code."""
    rng = random.Random(seed)
    ang = rng.uniform(0, 2 * math.pi)
    c, s = math.cos(ang), math.sin(ang)
    y = c * k3d[:, 1] - s * k3d[:, 2]
    z = s * k3d[:, 1] + c * k3d[:, 2]
    x = k3d[:, 0]
    n = len(k3d)
    pts2 = np.stack([y, z], axis=1)

    hits = []
    for i in range(n):
        a1, a2 = pts2[i], pts2[(i + 1) % n]
        da = a2 - a1
        if np.hypot(*da) < 1e-13:
            continue
        for j in range(i + 1, n):
            if (j + 1) % n == i or (i + 1) % n == j:
                continue
            b1, b2 = pts2[j], pts2[(j + 1) % n]
            db = b2 - b1
            if np.hypot(*db) < 1e-13:
                continue
            den = da[0] * db[1] - da[1] * db[0]
            if abs(den) < 1e-14:
                continue
            rr = b1 - a1
            t = (rr[0] * db[1] - rr[1] * db[0]) / den
            u = (rr[0] * da[1] - rr[1] * da[0]) / den
            if not (1e-9 < t < 1 - 1e-9 and 1e-9 < u < 1 - 1e-9):
                continue
            xa = x[i] + t * (x[(i + 1) % n] - x[i])
            xb = x[j] + u * (x[(j + 1) % n] - x[j])
            if abs(xa - xb) < 1e-10:
                raise GeomError("depth degenerate crossing")
            hits.append((i + t, j + u, xa > xb, da.copy(), db.copy()))

    keys = sorted(t for h in hits for t in (h[0], h[1]))
    for a, b in zip(keys, keys[1:]):
        if b - a < 1e-12:
            raise GeomError("coincident crossing parameters")
    events = {}
    for idx, (ta, tb, a_over, da, db) in enumerate(hits):
        label = str(idx + 1)
        d_over, d_under = (da, db) if a_over else (db, da)
        sign = 1 if (d_over[0] * d_under[1] - d_over[1] * d_under[0]) > 0 else -1
        events[ta] = GaussEvent(label, "o" if a_over else "u", sign)
        events[tb] = GaussEvent(label, "u" if a_over else "o", sign)
    code = KnotCode(tuple(events[k] for k in sorted(events))).canonical()
    validate_knot(code)
    return code


def numeric_lift(theta: ThetaCode, tries: int = 10) -> KnotCode:
    e_pts = build_embedding(theta)
    last = None
    for seed in range(tries):
        try:
            k3d = lift_geometrically(e_pts, seed=seed)
            return code_from_curve(k3d, seed=seed)
        except Exception as exc:
            last = exc
    raise GeomError(f"numeric lift failed: {last}")
