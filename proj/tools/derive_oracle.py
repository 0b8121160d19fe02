#!/usr/bin/env python3
"""Independent reference values for the test-suite, written to tests/golden/.

Homology is computed with sympy's Smith normal form on the full simplicial
boundary matrices; Betti numbers mod p come from Gaussian elimination over
GF(p). Nothing here shares code with the C++ library.
"""
import itertools
import json
import pathlib
import sys

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

ROOT = pathlib.Path(__file__).resolve().parent.parent


def read_mesh(path):
    lines = [l.split("#")[0].strip() for l in path.read_text().splitlines()]
    lines = [l for l in lines if l]
    if path.suffix == ".off":
        nv, nf = map(int, lines[1].split()[:2])
        faces = [list(map(int, l.split()[1:4])) for l in lines[2 + nv:2 + nv + nf]]
        return nv, faces
    faces = [list(map(int, l.split())) for l in lines]
    return max(max(f) for f in faces) + 1, faces


def boundary(nv, faces):
    tris = sorted(tuple(sorted(f)) for f in faces)
    edges = sorted({e for t in tris for e in itertools.combinations(t, 2)})
    eidx = {e: i for i, e in enumerate(edges)}
    d1 = [[0] * len(edges) for _ in range(nv)]
    for j, (a, b) in enumerate(edges):
        d1[a][j] -= 1
        d1[b][j] += 1
    d2 = [[0] * len(tris) for _ in edges]
    for j, (a, b, c) in enumerate(tris):
        d2[eidx[(b, c)]][j] += 1
        d2[eidx[(a, c)]][j] -= 1
        d2[eidx[(a, b)]][j] += 1
    return d1, d2, len(edges), len(tris)


def invariant_factors(m):
    if not m or not m[0]:
        return []
    s = smith_normal_form(Matrix(m), domain=ZZ)
    return [abs(int(s[i, i])) for i in range(min(s.shape)) if s[i, i] != 0]


def rank_mod(m, p):
    a = [[x % p for x in row] for row in m]
    rank, rows = 0, len(a)
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [(x * inv) % p for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % p for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def group(free, factors):
    tors = [f for f in factors if f > 1]
    return {"free_rank": free, "torsion": tors}


def describe(path):
    nv, faces = read_mesh(path)
    d1, d2, ne, nt = boundary(nv, faces)
    f1, f2 = invariant_factors(d1), invariant_factors(d2)
    r1, r2 = len(f1), len(f2)
    out = {
        "cells": [nv, ne, nt],
        "homology": [group(nv - r1, f1), group(ne - r1 - r2, f2), group(nt - r2, [])],
    }
    for p in (2, 3):
        q1, q2 = rank_mod(d1, p), rank_mod(d2, p)
        out[f"betti_mod{p}"] = [nv - q1, ne - q1 - q2, nt - q2]
    return out


def snf_examples():
    return {"[[2,4],[6,8]]": invariant_factors([[2, 4], [6, 8]])}


def main():
    data = ROOT / "data"
    meshes = {p.name: describe(p) for p in sorted(data.iterdir()) if p.suffix in (".tri", ".off")}
    out = {"meshes": meshes, "snf": snf_examples()}
    target = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "tests" / "golden" / "derived.json"
    target.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
