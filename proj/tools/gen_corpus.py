#!/usr/bin/env python3
"""Regenerate the triangulated surfaces under data/.

Every mesh is purely combinatorial; OFF files carry placeholder coordinates
except the icosahedron and cube, which get their usual embeddings.
"""
import itertools
import math
import pathlib
import sys

OUT = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data")


def write_tri(name, tris, comment):
    lines = [f"# {comment}"] + [" ".join(map(str, t)) for t in tris]
    (OUT / name).write_text("\n".join(lines) + "\n")


def write_off(name, coords, tris):
    lines = ["OFF", f"{len(coords)} {len(tris)} 0"]
    lines += [" ".join(f"{c:.6f}" for c in p) for p in coords]
    lines += ["3 " + " ".join(map(str, t)) for t in tris]
    (OUT / name).write_text("\n".join(lines) + "\n")


def torus7():
    # Moebius/Csaszar 7-vertex torus
    return [sorted(((i) % 7, (i + 1) % 7, (i + 3) % 7)) for i in range(7)] + \
           [sorted(((i) % 7, (i + 2) % 7, (i + 3) % 7)) for i in range(7)]


def rp2_6():
    # hemi-icosahedron
    return [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]]


def connected_sum(a, b):
    """Glue two closed surfaces along a removed triangle of each."""
    na = max(max(t) for t in a) + 1
    ra = a[0]
    rb = b[0]
    relabel = {}
    nxt = na
    nb = max(max(t) for t in b) + 1
    for v in range(nb):
        if v in rb:
            relabel[v] = ra[rb.index(v)]
        else:
            relabel[v] = nxt
            nxt += 1
    out = [list(t) for t in a[1:]]
    out += [[relabel[v] for v in t] for t in b[1:]]
    return out


def icosahedron():
    p = (1 + math.sqrt(5)) / 2
    coords = [(-1, p, 0), (1, p, 0), (-1, -p, 0), (1, -p, 0),
              (0, -1, p), (0, 1, p), (0, -1, -p), (0, 1, -p),
              (p, 0, -1), (p, 0, 1), (-p, 0, -1), (-p, 0, 1)]
    tris = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
            [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
            [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
            [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]
    return coords, tris


def cube():
    coords = list(itertools.product((0, 1), repeat=3))
    quads = [[0, 1, 3, 2], [4, 6, 7, 5], [0, 4, 5, 1],
             [2, 3, 7, 6], [0, 2, 6, 4], [1, 5, 7, 3]]
    tris = []
    for a, b, c, d in quads:
        tris += [[a, b, c], [a, c, d]]
    return coords, tris


def annulus(n=4):
    tris = []
    for i in range(n):
        o0, o1 = i, (i + 1) % n
        i0, i1 = n + i, n + (i + 1) % n
        tris += [[o0, o1, i0], [o1, i1, i0]]
    return tris


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    write_tri("triangle.tri", [[0, 1, 2]], "single 2-simplex")
    write_tri("disk_fan.tri", [[0, i, i % 6 + 1] for i in range(1, 7)], "hexagonal fan around vertex 0")
    write_off("tetra.off", [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
              [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    write_off("icosa.off", *icosahedron())
    write_off("cube.off", *cube())
    write_tri("torus7.tri", torus7(), "7-vertex minimal torus")
    write_tri("rp2_6.tri", rp2_6(), "6-vertex real projective plane")
    write_tri("klein.tri", connected_sum(rp2_6(), rp2_6()), "Klein bottle as RP2 # RP2")
    write_tri("genus2.tri", connected_sum(torus7(), torus7()), "genus-2 surface as torus # torus")
    write_tri("annulus.tri", annulus(), "annulus, 4 outer + 4 inner vertices")
    write_tri("mobius.tri", [sorted([i, (i + 1) % 5, (i + 2) % 5]) for i in range(5)], "5-vertex Moebius band")
    tet = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    write_tri("two_components.tri", tet + [[4, 5, 6]], "tetrahedron boundary plus a disjoint triangle")
    write_tri("bowtie.tri", [[0, 1, 2], [0, 3, 4]], "two triangles pinched at vertex 0 (not a manifold)")
    write_tri("fin.tri", [[0, 1, 2], [0, 1, 3], [0, 1, 4]], "three triangles on one edge (not a manifold)")


if __name__ == "__main__":
    main()
