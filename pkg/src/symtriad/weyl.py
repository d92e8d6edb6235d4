"""Affine reflections of the flat that preserve the orbit structure.

Reflections in the hyperplanes beta(Z) = k*pi (vertical roots) and
beta(Z) = (k + 1/2)*pi (horizontal roots) generate a group for which the
closed fundamental cell is a fundamental domain: every orbit meets its
closure in exactly one point.  Canonicalizing an arbitrary point into the
cell lets published coordinates that were quoted in a neighbouring chamber
be compared against solver output.

In simple-root evaluation coordinates a reflection through beta's mirror at
level c acts affinely with integer-like pairings <beta_i, beta^v> computed
from a Gram matrix of the simple roots.  The Gram matrix is recovered from
root strings: for simple roots i != j, <beta_j, beta_i^v> equals minus the
largest k with beta_j + k*beta_i still a root.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import Angle
from .triads import CellPoint, SymmetricTriad

_MAX_REFLECTIONS = 1000


@lru_cache(maxsize=None)
def gram_matrix(t: SymmetricTriad) -> tuple[tuple[Fraction, ...], ...] | None:
    """Gram matrix of the simple roots, normalized to |beta_1|^2 = 2.

    Requires every simple root to occur in the root list (true for all
    catalog triads); returns None when the geometry cannot be recovered.
    """
    n = t.rank
    rootset = {r.coeffs for r in t.roots}
    for i in range(n):
        unit = tuple(1 if k == i else 0 for k in range(n))
        if unit not in rootset:
            return None

    def cartan(i: int, j: int) -> int:
        # <beta_j, beta_i^v> = -max{k >= 0 : beta_j + k beta_i is a root}
        k = 0
        while True:
            cand = tuple((1 if m == j else 0) + (k + 1) * (1 if m == i else 0)
                         for m in range(n))
            if cand in rootset:
                k += 1
            else:
                return -k

    lengths: list[Fraction | None] = [None] * n
    lengths[0] = Fraction(2)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j or lengths[i] is None or lengths[j] is not None:
                    continue
                cij, cji = cartan(i, j), cartan(j, i)
                if cij != 0 and cji != 0:
                    lengths[j] = lengths[i] * cij / cji
                    changed = True
    # Disconnected simple roots get the default normalization.
    lengths = [l if l is not None else Fraction(2) for l in lengths]
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = lengths[i]
        for j in range(i + 1, n):
            cij = cartan(i, j)           # <beta_j, beta_i^v> = 2<bi,bj>/|bi|^2
            gram[i][j] = gram[j][i] = cij * lengths[i] / 2
    return tuple(tuple(row) for row in gram)


def _pairings(t: SymmetricTriad, root: Sequence[int]) -> tuple[Fraction, ...] | None:
    """<beta_i, root^v> for all simple roots i; rational and exact."""
    gram = gram_matrix(t)
    if gram is None:
        return None
    n = t.rank
    inner = [sum((Fraction(root[k]) * gram[k][i] for k in range(n)), Fraction(0))
             for i in range(n)]
    norm = sum((Fraction(root[k]) * inner[k] for k in range(n)), Fraction(0))
    if norm == 0:
        return None
    return tuple(2 * v / norm for v in inner)


def canonicalize(t: SymmetricTriad, coords_units: Sequence[Fraction | float]
                 ) -> tuple[tuple, bool]:
    """Map a point (coordinates in units of pi) into the closed cell.

    Repeatedly reflects across the nearest mirror of a violated cell
    constraint; exact Fraction coordinates stay exact.  Returns the mapped
    coordinates and a success flag (False when the triad's geometry is not
    recoverable or the iteration cap is hit).
    """
    if gram_matrix(t) is None:
        return tuple(coords_units), False
    coords = list(coords_units)
    exact = all(isinstance(c, Fraction) for c in coords)
    eps = 0 if exact else 1e-12    # floating jitter on the boundary is not a violation

    def value(root: Sequence[int]):
        return sum(n * c for n, c in zip(root, coords))

    for _ in range(_MAX_REFLECTIONS):
        violated = None
        for r in t.roots:
            if r.mV > 0:
                v = value(r.coeffs)
                if v < -eps or v > 1 + eps:
                    violated = (r.coeffs, "V", v)
                    break
            if r.mH > 0:
                v = value(r.coeffs)
                if v < Fraction(-1, 2) - eps or v > Fraction(1, 2) + eps:
                    violated = (r.coeffs, "H", v)
                    break
        if violated is None:
            return tuple(coords), True
        root, kind, v = violated
        if kind == "V":
            c = Fraction(round(v)) if exact else float(round(v))
        else:
            c = (Fraction(round(v - Fraction(1, 2))) + Fraction(1, 2) if exact
                 else float(round(v - 0.5)) + 0.5)
        pair = _pairings(t, root)
        if pair is None:
            return tuple(coords), False
        shift = v - c
        coords = [x - shift * (p if exact else float(p))
                  for x, p in zip(coords, pair)]
    return tuple(coords), False


def canonical_cell_point(t: SymmetricTriad, Z: CellPoint) -> tuple[CellPoint, bool]:
    """CellPoint version of canonicalize; exactness of coordinates preserved."""
    if Z.is_exact:
        units: list = [c.pi_fraction for c in Z.coords]
    else:
        units = [c.radians / math.pi for c in Z.coords]
    mapped, ok = canonicalize(t, units)
    if Z.is_exact:
        return CellPoint(tuple(Angle.of_pi(u) for u in mapped)), ok
    return CellPoint.numeric(*(u * math.pi for u in mapped)), ok
