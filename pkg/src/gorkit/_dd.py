"""Double description for pointed polyhedral cones ``{y : A y >= 0}``.

Rays are returned as primitive integer vectors together with a bitmask of
the rows of ``A`` they are tight on.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .lattice import primitive, rank, solve_unique


def _prim(v) -> tuple[int, ...]:
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = den * x.denominator // gcd(den, x.denominator)
    w = tuple(int(x * den) for x in v)
    return primitive(w)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def extreme_rays(A: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of the pointed cone ``{y : A y >= 0}``.

    ``A`` must have full column rank. Returns ``(ray, tight_mask)`` pairs,
    where bit ``i`` of the mask is set when row ``i`` vanishes on the ray.
    """
    A = [tuple(int(x) for x in row) for row in A]
    n = len(A[0])
    # pick linearly independent starting rows
    basis: list[int] = []
    for i, row in enumerate(A):
        if rank([A[j] for j in basis] + [row]) > len(basis):
            basis.append(i)
            if len(basis) == n:
                break
    if len(basis) < n:
        raise ValueError("cone is not pointed")

    def dots(y):
        return [sum(a * b for a, b in zip(row, y)) for row in A]

    # initial simplicial cone: columns of the inverse of A_B
    rays: list[tuple[tuple[int, ...], int]] = []
    AB = [A[i] for i in basis]
    for k in range(n):
        rhs = [int(j == k) for j in range(n)]
        y = _prim(solve_unique(AB, rhs))
        mask = 0
        for j, i in enumerate(basis):
            if j != k:
                mask |= 1 << i
        rays.append((y, mask))
    done_mask = 0
    for i in basis:
        done_mask |= 1 << i

    for i, row in enumerate(A):
        if i in basis:
            continue
        vals = [sum(a * b for a, b in zip(row, y)) for y, _ in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        new = [rays[k] for k in pos] + [(rays[k][0], rays[k][1] | (1 << i)) for k in zero]
        if neg:
            masks = [m for _, m in rays]
            for p in pos:
                for q in neg:
                    common = masks[p] & masks[q]
                    if _popcount(common) < n - 2:
                        continue
                    adjacent = True
                    for k, m in enumerate(masks):
                        if k != p and k != q and (m & common) == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    yp, yq = rays[p][0], rays[q][0]
                    vp, vq = vals[p], -vals[q]
                    y = primitive(tuple(vq * a + vp * b for a, b in zip(yp, yq)))
                    new.append((y, common | (1 << i)))
        rays = new
        done_mask |= 1 << i

    # recompute masks against all rows (rows processed early are already in)
    out = []
    for y, _ in rays:
        d = dots(y)
        mask = 0
        for i, v in enumerate(d):
            if v == 0:
                mask |= 1 << i
        out.append((y, mask))
    out.sort()
    return out
