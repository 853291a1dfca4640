#!/usr/bin/env python3
"""Builds the cat-map golden geometric types from explicit Markov partitions.

Everything here is floating-point geometry on the torus R^2/Z^2 for the map
A = [[2,1],[1,1]]. Rectangles are boxes in eigen-coordinates (x along the
stable direction, y along the unstable one). The extracted combinatorial data
is written in the geometric-type text format.

Outputs (into the directory given as argv[1], default ../../goldens):
  t_aw.gt   two-rectangle partition of the cat map (torus)
  t_aw3.gt  partition grown from the fixed point and one period-2 orbit (torus)
  t_sq.gt   quotient of an (-I)-invariant partition (sphere, four spines)
  t_g2.gt   lift to the double cover branched over a period-2 orbit (genus 2)
"""

import itertools
import math
import os
import sys

import numpy as np

A = np.array([[2.0, 1.0], [1.0, 1.0]])
A_INV = np.array([[1.0, -1.0], [-1.0, 2.0]])
LAM = (3.0 + math.sqrt(5.0)) / 2.0

_eu = np.array([1.0, LAM - 2.0])
_eu /= np.linalg.norm(_eu)
_es = np.array([-_eu[1], _eu[0]])
# rows map standard coordinates to (stable, unstable)
E = np.array([_es, _eu])
E_INV = E.T

TOL = 1e-9


def eig(p):
    return E @ np.asarray(p, float)


def std(z):
    return E_INV @ np.asarray(z, float)


def lattice(k):
    pts = [(a, b) for a in range(-k, k + 1) for b in range(-k, k + 1)]
    return np.array(pts, float)


# ---------------------------------------------------------------------------
# partition construction


def two_rectangle_boxes():
    """Boxes of the two-rectangle fundamental domain for the basis -e1, e2."""
    a, mb = eig([-1.0, 0.0])
    c, d = eig([0.0, 1.0])
    b = -mb
    assert a > 0 and b > 0 and c > 0 and d > 0
    return [(0.0, a, 0.0, d), (-c, 0.0, 0.0, b)]


class Segments:
    """Finite stable/unstable segments through a set of points, with translates."""

    def __init__(self, q_std, m_half, k=10):
        self.q = [eig(q) for q in q_std]
        self.trans = np.array([eig(m) for m in lattice(k)])
        # unstable seeds
        u_lo = [m_half] * len(self.q)
        u_hi = [m_half] * len(self.q)
        # stable segments stop at the first seed crossing
        s_lo, s_hi = [], []
        for q in self.q:
            s_lo.append(self._first_vertical_hit(q, -1, u_lo, u_hi))
            s_hi.append(self._first_vertical_hit(q, +1, u_lo, u_hi))
        self.s_lo, self.s_hi = s_lo, s_hi
        # unstable segments grow beyond the seed until they meet a stable one
        self.u_lo, self.u_hi = [], []
        for q in self.q:
            self.u_lo.append(self._first_horizontal_hit(q, -1, m_half))
            self.u_hi.append(self._first_horizontal_hit(q, +1, m_half))
        self._build_arrays()

    def _vert_arrays(self, lo, hi):
        xs, ylo, yhi = [], [], []
        for q, a, b in zip(self.q, lo, hi):
            xs.append(q[0] + self.trans[:, 0])
            ylo.append(q[1] - a + self.trans[:, 1])
            yhi.append(q[1] + b + self.trans[:, 1])
        return np.concatenate(xs), np.concatenate(ylo), np.concatenate(yhi)

    def _first_vertical_hit(self, q, sign, lo, hi):
        xs, ylo, yhi = self._vert_arrays(lo, hi)
        dx = (xs - q[0]) * sign
        ok = (ylo < q[1]) & (q[1] < yhi) & (dx > TOL)
        return float(dx[ok].min())

    def _first_horizontal_hit(self, q, sign, start):
        ys, xlo, xhi = [], [], []
        for p, a, b in zip(self.q, self.s_lo, self.s_hi):
            ys.append(p[1] + self.trans[:, 1])
            xlo.append(p[0] - a + self.trans[:, 0])
            xhi.append(p[0] + b + self.trans[:, 0])
        ys, xlo, xhi = map(np.concatenate, (ys, xlo, xhi))
        dy = (ys - q[1]) * sign
        ok = (xlo < q[0]) & (q[0] < xhi) & (dy > start + TOL)
        return float(dy[ok].min())

    def _build_arrays(self):
        self.vx, self.vylo, self.vyhi = self._vert_arrays(self.u_lo, self.u_hi)
        ys, xlo, xhi = [], [], []
        for p, a, b in zip(self.q, self.s_lo, self.s_hi):
            ys.append(p[1] + self.trans[:, 1])
            xlo.append(p[0] - a + self.trans[:, 0])
            xhi.append(p[0] + b + self.trans[:, 0])
        self.hy, self.hxlo, self.hxhi = map(np.concatenate, (ys, xlo, xhi))

    def box_around(self, z):
        x, y = z
        on = (self.vylo < y) & (y < self.vyhi)
        right = self.vx[on & (self.vx > x)].min()
        left = self.vx[on & (self.vx < x)].max()
        on = (self.hxlo < x) & (x < self.hxhi)
        up = self.hy[on & (self.hy > y)].min()
        down = self.hy[on & (self.hy < y)].max()
        return (float(left), float(right), float(down), float(up))

    def boxes(self, samples=4000, seed=7):
        rng = np.random.default_rng(seed)
        found = {}
        for p in rng.random((samples, 2)):
            box = self.box_around(eig(p))
            key = box_key(box)
            if key not in found:
                found[key] = box
        boxes = list(found.values())
        # every box must be stable under re-casting from its own interior
        for box in boxes:
            for _ in range(6):
                t = rng.random(2)
                z = (box[0] + t[0] * (box[1] - box[0]), box[2] + t[1] * (box[3] - box[2]))
                assert box_key(self.box_around(z)) == box_key(box), "not a rectangle"
        area = sum((b[1] - b[0]) * (b[3] - b[2]) for b in boxes)
        assert abs(area - 1.0) < 1e-7, area
        boxes.sort(key=lambda b: box_key(b))
        return boxes


def reduce_std(p):
    return p - np.floor(p + 1e-12)


def box_key(box):
    corner = reduce_std(std((box[0], box[2])))
    corner = np.where(corner > 1 - 1e-7, 0.0, corner)
    return (round(corner[0], 6), round(corner[1], 6), round(box[1] - box[0], 6), round(box[3] - box[2], 6))


class Partition:
    """A list of boxes tiling the torus, with point location."""

    def __init__(self, boxes):
        self.boxes = boxes
        self.keys = [box_key(b) for b in boxes]
        self.trans = np.array([eig(m) for m in lattice(4)])
        area = sum((b[1] - b[0]) * (b[3] - b[2]) for b in boxes)
        assert abs(area - 1.0) < 1e-7, area

    def locate(self, z):
        """Returns (index, shifted point inside the chosen lift of that box)."""
        hits = []
        for idx, (l, r, d, u) in enumerate(self.boxes):
            w = z[None, :] - self.trans
            ok = (w[:, 0] > l + 1e-10) & (w[:, 0] < r - 1e-10) & (w[:, 1] > d + 1e-10) & (w[:, 1] < u - 1e-10)
            for t in np.nonzero(ok)[0]:
                hits.append((idx, w[t]))
        assert len(hits) == 1, (z, hits)
        return hits[0]

    def index_of_box(self, box):
        return self.keys.index(box_key(box))


# ---------------------------------------------------------------------------
# extraction of the combinatorial data


def apply_a(z):
    return np.array([z[0] / LAM, z[1] * LAM])


def strips(part, i, samples=6000):
    """Horizontal sub-rectangles of box i, bottom to top.

    Each entry: (target index, x-offset of the image centre in the target lift,
    centre point of the strip in the lift of box i, image point in the target lift).
    """
    l, r, d, u = part.boxes[i]
    xm = 0.5 * (l + r) + 1e-7 * (r - l)
    ys = d + (u - d) * (np.arange(samples) + 0.5) / samples
    runs = []
    for y in ys:
        z = np.array([xm, y])
        k, w = part.locate(apply_a(z))
        off = w[0] - part.boxes[k][0]
        tag = (k, round(off, 6))
        if runs and runs[-1][0] == tag:
            runs[-1][1].append(y)
        else:
            runs.append((tag, [y]))
    tags = [t for t, _ in runs]
    assert len(tags) == len(set(tags)), "strip split by sampling"
    out = []
    for (k, _), yl in runs:
        yc = 0.5 * (yl[0] + yl[-1])
        z = np.array([xm, yc])
        k2, w = part.locate(apply_a(z))
        assert k2 == k
        out.append((k, w[0] - part.boxes[k][0], z, w))
    return out


def torus_type(part):
    n = len(part.boxes)
    all_strips = [strips(part, i) for i in range(n)]
    return assemble(n, all_strips, lambda i, j, s: (s[0], s[1], +1))


def assemble(n, all_strips, target):
    """target(i, j, strip) -> (k, offset in k, sign)."""
    images = {}
    for i in range(n):
        for j, s in enumerate(all_strips[i]):
            k, off, e = target(i, j, s)
            images.setdefault(k, []).append((off, i, j, e))
    phi = {}
    v = [0] * n
    for k, lst in images.items():
        lst.sort()
        offs = [o for o, *_ in lst]
        assert all(b - a > 1e-6 for a, b in zip(offs, offs[1:])), "columns collide"
        v[k] = len(lst)
        for l, (_, i, j, e) in enumerate(lst):
            phi[(i, j)] = (k, l, e)
    h = [len(s) for s in all_strips]
    return n, h, v, phi


def write_type(path, n, h, v, phi, comment):
    lines = ["# " + c for c in comment]
    lines.append(f"n {n}")
    for i in range(n):
        lines.append(f"hv {i + 1} {h[i]} {v[i]}")
    for (i, j) in sorted(phi):
        k, l, e = phi[(i, j)]
        lines.append(f"phi {i + 1} {j + 1} {k + 1} {l + 1} {'+1' if e > 0 else '-1'}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# sphere quotient by -I


def sphere_type(part):
    n_t = len(part.boxes)
    partner = []
    for b in part.boxes:
        partner.append(part.index_of_box((-b[1], -b[0], -b[3], -b[2])))
    assert all(partner[partner[i]] == i and partner[i] != i for i in range(n_t))
    reps = [i for i in range(n_t) if i < partner[i]]
    sphere_index = {t: s for s, t in enumerate(reps)}
    all_strips = [strips(part, t) for t in reps]

    def target(i, j, s):
        k, off, _, w = s
        if k in sphere_index:
            return sphere_index[k], off, +1
        k2, w2 = part.locate(-w)
        assert k2 == partner[k] and k2 in sphere_index
        return sphere_index[k2], w2[0] - part.boxes[k2][0], -1

    return assemble(len(reps), all_strips, target)


# ---------------------------------------------------------------------------
# double cover branched over a period-2 orbit


def seg_cross(p, q, a, b):
    """Proper intersection test for segments pq and ab in the plane."""

    def orient(u, v, w):
        return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0])

    d1, d2 = orient(a, b, p), orient(a, b, q)
    d3, d4 = orient(p, q, a), orient(p, q, b)
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)


class Cut:
    def __init__(self, start_std, vec_std, k=6):
        self.segs = []
        for m in lattice(k):
            a = np.asarray(start_std, float) + m
            self.segs.append((a, a + np.asarray(vec_std, float)))

    def parity(self, p_std, q_std):
        c = 0
        for a, b in self.segs:
            if seg_cross(p_std, q_std, a, b):
                c += 1
        return c % 2


def cover_type(part, q1, d):
    n = len(part.boxes)
    gamma = Cut(q1, d)
    q2 = A_INV @ np.asarray(q1, float)
    pulled = Cut(q2, A_INV @ np.asarray(d, float))
    base = np.array([0.1234567, 0.3456789])

    def c_of(x_std):
        return (gamma.parity(base, x_std) + pulled.parity(base, x_std)) % 2

    centres = []
    for (l, r, dd, u) in part.boxes:
        centres.append(std((0.5 * (l + r) + 1.1e-6, 0.5 * (dd + u) + 0.7e-6)))
    all_strips = [strips(part, i) for i in range(n)]
    n2, h2, v2, phi2 = torus_type(part)
    big = {}
    for i in range(n):
        for j, (k, off, z, w) in enumerate(all_strips[i]):
            x = std(z)
            y = std(w)
            delta = (gamma.parity(centres[i], x) + c_of(x) + gamma.parity(centres[k], y)) % 2
            kk, ll, e = phi2[(i, j)]
            assert kk == k
            for s in range(2):
                big[(2 * i + s, j)] = (2 * k + (s + delta) % 2, ll, e)
    h = [h2[i // 2] for i in range(2 * n)]
    v = [v2[i // 2] for i in range(2 * n)]
    return 2 * n, h, v, big


# ---------------------------------------------------------------------------


def incidence(n, phi):
    a = np.zeros((n, n), int)
    for (i, _), (k, _, _) in phi.items():
        a[i, k] += 1
    return a


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "..", "goldens")
    os.makedirs(out, exist_ok=True)

    aw = Partition(two_rectangle_boxes())
    n, h, v, phi = torus_type(aw)
    print("t_aw incidence", incidence(n, phi).tolist())
    write_type(os.path.join(out, "t_aw.gt"), n, h, v, phi,
               ["cat map [[2,1],[1,1]] on the torus, two-rectangle partition",
                "generated by tools/goldens/build_goldens.py"])

    q1 = np.array([0.8, 0.6])
    q2 = np.array([0.2, 0.4])
    seg = Segments([np.zeros(2), q1, q2], m_half=0.45)
    part3 = Partition(seg.boxes())
    n, h, v, phi = torus_type(part3)
    print("t_aw3 rectangles", n, "cells", sum(h))
    write_type(os.path.join(out, "t_aw3.gt"), n, h, v, phi,
               ["cat map [[2,1],[1,1]] on the torus, partition whose boundary",
                "passes through the fixed point and the period-2 orbit {(4/5,3/5),(1/5,2/5)}",
                "generated by tools/goldens/build_goldens.py"])

    halves = [np.zeros(2), np.array([0.5, 0.0]), np.array([0.0, 0.5]), np.array([0.5, 0.5])]
    segq = Segments(halves, m_half=0.3)
    partq = Partition(segq.boxes())
    n, h, v, phi = sphere_type(partq)
    print("t_sq rectangles", n, "cells", sum(h))
    write_type(os.path.join(out, "t_sq.gt"), n, h, v, phi,
               ["cat map [[2,1],[1,1]] pushed to the sphere torus/(-I)",
                "four 1-prong singularities at the half-periods",
                "generated by tools/goldens/build_goldens.py"])

    # the cut from q1 to q2 + (1,1) makes the class invariant under A
    d = np.array([0.4, 0.8])
    n, h, v, phi = cover_type(part3, q1, d)
    print("t_g2 rectangles", n, "cells", sum(h))
    write_type(os.path.join(out, "t_g2.gt"), n, h, v, phi,
               ["lift of the cat map to the double cover of the torus",
                "branched over the period-2 orbit {(4/5,3/5),(1/5,2/5)} (genus 2)",
                "generated by tools/goldens/build_goldens.py"])


if __name__ == "__main__":
    main()
