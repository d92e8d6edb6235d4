"""Symmetric triad data model, validation, the built-in catalog, and generators.

A symmetric triad records the combinatorial data of a commutative Hermann
action: positive restricted roots as integer coefficient vectors over the
simple roots, each split into a vertical multiplicity mV (dimension of the
root space's intersection with the -1 eigenspace of the second involution)
and a horizontal multiplicity mH (intersection with the +1 eigenspace).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import Angle, angle_from_json, format_angle, parse_angle


@dataclass(frozen=True)
class TriadRoot:
    """A positive root with split multiplicities; mV + mH >= 1."""

    coeffs: tuple[int, ...]
    mV: int = 0
    mH: int = 0

    def __str__(self) -> str:
        return f"{root_str(self.coeffs)} (mV={self.mV}, mH={self.mH})"


def root_str(coeffs: Sequence[int]) -> str:
    """Readable form of a coefficient vector, e.g. (2, 1) -> "2b1+b2"."""
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        head = "" if c == 1 else str(c)
        parts.append(f"{head}b{i + 1}")
    return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class SymmetricTriad:
    name: str
    rank: int
    roots: tuple[TriadRoot, ...]
    centralizer_dim: int = 0
    ambient_dim: int | None = None
    cohomogeneity_equals_rank: bool = True
    description: str = ""

    def v_roots(self) -> Iterable[TriadRoot]:
        return (r for r in self.roots if r.mV > 0)

    def h_roots(self) -> Iterable[TriadRoot]:
        return (r for r in self.roots if r.mH > 0)

    @property
    def vh_disjoint(self) -> bool:
        return all(not (r.mV > 0 and r.mH > 0) for r in self.roots)

    def multiplicity_sum(self) -> int:
        return sum(r.mV + r.mH for r in self.roots)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "roots": [{"coeffs": list(r.coeffs), "mV": r.mV, "mH": r.mH}
                      for r in self.roots],
            "centralizer_dim": self.centralizer_dim,
            "ambient_dim": self.ambient_dim,
            "cohomogeneity_equals_rank": self.cohomogeneity_equals_rank,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SymmetricTriad":
        roots = tuple(
            TriadRoot(tuple(int(c) for c in r["coeffs"]),
                      int(r.get("mV", 0)), int(r.get("mH", 0)))
            for r in obj["roots"]
        )
        return cls(
            name=str(obj.get("name", "unnamed")),
            rank=int(obj["rank"]),
            roots=roots,
            centralizer_dim=int(obj.get("centralizer_dim", 0)),
            ambient_dim=(None if obj.get("ambient_dim") is None
                         else int(obj["ambient_dim"])),
            cohomogeneity_equals_rank=bool(obj.get("cohomogeneity_equals_rank", True)),
            description=str(obj.get("description", "")),
        )


def validate(t: SymmetricTriad) -> list[str]:
    """All invariant violations of a triad; empty list means valid."""
    bad: list[str] = []
    if t.rank < 1:
        bad.append("rank must be positive")
    if t.centralizer_dim < 0:
        bad.append("centralizer_dim must be non-negative")
    seen: set[tuple[int, ...]] = set()
    for r in t.roots:
        label = root_str(r.coeffs)
        if len(r.coeffs) != t.rank:
            bad.append(f"root {label}: coefficient vector length != rank")
        if all(c == 0 for c in r.coeffs):
            bad.append("zero root vector")
        if any(c < 0 for c in r.coeffs):
            bad.append(f"root {label}: negative coefficient (positive roots only)")
        if r.mV < 0 or r.mH < 0:
            bad.append(f"root {label}: negative multiplicity")
        if r.mV + r.mH < 1:
            bad.append(f"root {label}: mV + mH must be at least 1")
        if r.coeffs in seen:
            bad.append(f"duplicate root vector {label}")
        seen.add(r.coeffs)
    if t.ambient_dim is not None:
        total = t.rank + t.centralizer_dim + t.multiplicity_sum()
        if total != t.ambient_dim:
            bad.append(
                f"dimension identity broken: rank + centralizer + multiplicities "
                f"= {total} != ambient_dim {t.ambient_dim}"
            )
    return bad


@dataclass(frozen=True)
class CellPoint:
    """A point Z of the flat, stored by its simple-root evaluations b_i(Z)."""

    coords: tuple[Angle, ...]

    @classmethod
    def exact(cls, *fracs: Fraction | int | tuple[int, int]) -> "CellPoint":
        coords = []
        for f in fracs:
            if isinstance(f, tuple):
                coords.append(Angle.of_pi(f[0], f[1]))
            else:
                coords.append(Angle.of_pi(Fraction(f)))
        return cls(tuple(coords))

    @classmethod
    def numeric(cls, *values: float) -> "CellPoint":
        return cls(tuple(Angle.from_radians(float(v)) for v in values))

    @classmethod
    def parse(cls, text: str) -> "CellPoint":
        return cls(tuple(parse_angle(tok) for tok in split_coords(text)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return all(c.is_exact for c in self.coords)

    def evaluate(self, coeffs: Sequence[int]) -> Angle:
        """beta(Z) for beta = sum of n_i * b_i; exactness propagates."""
        if self.is_exact:
            return Angle(pi=sum((n * c.pi_fraction for n, c in
                                 zip(coeffs, self.coords)), Fraction(0)))
        return Angle(radians=sum(n * c.radians for n, c in
                                 zip(coeffs, self.coords)))

    def radians(self) -> tuple[float, ...]:
        return tuple(c.radians for c in self.coords)

    def approx_eq(self, other: "CellPoint", tol: float = 1e-9) -> bool:
        return (self.rank == other.rank and
                all(a.approx_eq(b, tol) for a, b in zip(self.coords, other.coords)))

    def __str__(self) -> str:
        return "(" + ", ".join(format_angle(c) for c in self.coords) + ")"

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, arr: list[dict]) -> "CellPoint":
        return cls(tuple(angle_from_json(o) for o in arr))


def split_coords(text: str) -> list[str]:
    """Split "a,b" on commas that are not inside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


# ---------------------------------------------------------------------------
# Built-in catalog: the sixteen cohomogeneity-two actions.
# ---------------------------------------------------------------------------

def _roots(*entries: tuple) -> tuple[TriadRoot, ...]:
    return tuple(TriadRoot(tuple(cs), mV, mH) for (cs, mV, mH) in entries)


def _sym_roots(coeff_list: list[tuple[int, ...]], m: int) -> tuple[TriadRoot, ...]:
    return tuple(TriadRoot(cs, m, m) for cs in coeff_list)


_A2 = [(1, 0), (0, 1), (1, 1)]
_B2 = [(1, 0), (0, 1), (1, 1), (2, 1)]
_G2 = [(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]


def catalog() -> list[SymmetricTriad]:
    """The sixteen built-in rank-two triads.

    Five have equal vertical and horizontal multiplicities on every root;
    eleven have disjoint vertical and horizontal root sets (dual actions).
    Ambient dimensions are the dimensions of the acted-on spaces; the
    dimension identity rank + centralizer + sum(mV + mH) = ambient holds
    for every entry.
    """
    out: list[SymmetricTriad] = []

    # Equal-multiplicity actions.
    out.append(SymmetricTriad(
        "su6-sp3-sym", 2, _sym_roots(_A2, 2), ambient_dim=14,
        description="SO(6) acting on SU(6)/Sp(3)"))
    out.append(SymmetricTriad(
        "so5xso5-sym", 2, _sym_roots(_B2, 1), ambient_dim=10,
        description="SO(2)^2 x SO(3)^2 acting on (SO(5)xSO(5))/SO(5)"))
    out.append(SymmetricTriad(
        "sp2xsp2-sym", 2, _sym_roots(_B2, 1), ambient_dim=10,
        description="SU(2)^2 . SO(2)^2 acting on (Sp(2)xSp(2))/Sp(2)"))
    out.append(SymmetricTriad(
        "e6-f4-sym", 2, _sym_roots(_A2, 4), ambient_dim=26,
        description="Sp(4) acting on E6/F4"))
    out.append(SymmetricTriad(
        "g2xg2-sym", 2, _sym_roots(_G2, 1), ambient_dim=14,
        description="SU(2)^4 acting on (G2xG2)/G2"))

    # Dual actions (disjoint vertical/horizontal root sets).
    out.append(SymmetricTriad(
        "su3-so3-dual", 2,
        _roots(((1, 0), 1, 0), ((0, 1), 0, 1), ((1, 1), 0, 1)),
        ambient_dim=5, description="SO0(1,2)* acting on SU(3)/SO(3)"))
    out.append(SymmetricTriad(
        "su6-sp3-dual", 2,
        _roots(((1, 0), 4, 0), ((0, 1), 0, 4), ((1, 1), 0, 4)),
        ambient_dim=14, description="Sp(1,2)* acting on SU(6)/Sp(3)"))
    out.append(SymmetricTriad(
        "so10-u5-dual", 2,
        _roots(((1, 0), 4, 0), ((2, 0), 1, 0), ((2, 2), 1, 0),
               ((0, 1), 0, 4), ((1, 1), 0, 4), ((2, 1), 0, 4)),
        ambient_dim=20, description="U(2,3)* acting on SO(10)/U(5)"))
    out.append(SymmetricTriad(
        "so5xso5-dual", 2,
        _roots(((1, 0), 2, 0), ((0, 1), 0, 2), ((1, 1), 0, 2), ((2, 1), 0, 2)),
        ambient_dim=10, description="SO0(2,3)* acting on (SO(5)xSO(5))/SO(5)"))
    out.append(SymmetricTriad(
        "sp2-u2-dual", 2,
        _roots(((0, 1), 1, 0), ((2, 1), 1, 0), ((1, 0), 0, 1), ((1, 1), 0, 1)),
        ambient_dim=6, description="U(1,1)* acting on Sp(2)/U(2)"))
    out.append(SymmetricTriad(
        "sp2xsp2-sp2r-dual", 2,
        _roots(((1, 0), 2, 0), ((0, 1), 0, 2), ((1, 1), 0, 2), ((2, 1), 0, 2)),
        ambient_dim=10, description="Sp(2,R)* acting on (Sp(2)xSp(2))/Sp(2)"))
    out.append(SymmetricTriad(
        "sp2xsp2-sp11-dual", 2,
        _roots(((0, 1), 2, 0), ((2, 1), 2, 0), ((1, 0), 0, 2), ((1, 1), 0, 2)),
        ambient_dim=10, description="Sp(1,1)* acting on (Sp(2)xSp(2))/Sp(2)"))
    out.append(SymmetricTriad(
        "e6-spin10-dual", 2,
        _roots(((1, 0), 8, 0), ((2, 0), 1, 0), ((2, 2), 1, 0),
               ((0, 1), 0, 6), ((1, 1), 0, 9), ((2, 1), 0, 5)),
        ambient_dim=32, description="(SO*(10).U(1))* acting on E6/Spin(10).U(1)"))
    out.append(SymmetricTriad(
        "e6-f4-dual", 2,
        _roots(((1, 0), 8, 0), ((0, 1), 0, 8), ((1, 1), 0, 8)),
        ambient_dim=26, description="(F4^-20)* acting on E6/F4"))
    out.append(SymmetricTriad(
        "g2-so4-dual", 2,
        _roots(((1, 0), 1, 0), ((3, 2), 1, 0),
               ((0, 1), 0, 1), ((1, 1), 0, 1), ((2, 1), 0, 1), ((3, 1), 0, 1)),
        ambient_dim=8, description="(SL(2,R)xSL(2,R))* acting on G2/SO(4)"))
    out.append(SymmetricTriad(
        "g2xg2-dual", 2,
        _roots(((1, 0), 2, 0), ((3, 2), 2, 0),
               ((0, 1), 0, 2), ((1, 1), 0, 2), ((2, 1), 0, 2), ((3, 1), 0, 2)),
        ambient_dim=14, description="(G2^2)* acting on (G2xG2)/G2"))
    return out


CATALOG: dict[str, SymmetricTriad] = {t.name: t for t in catalog()}


def get_triad(name: str) -> SymmetricTriad:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown triad {name!r}; see `triads list`") from None


def load_triad(source: str) -> SymmetricTriad:
    """Resolve a builtin catalog name or a JSON file path."""
    if source in CATALOG:
        return CATALOG[source]
    if source.endswith(".json"):
        with open(source) as fh:
            return SymmetricTriad.from_json(json.load(fh))
    raise KeyError(f"unknown triad {source!r} (not a catalog name or .json path)")


# ---------------------------------------------------------------------------
# Parametric families (isotropy actions; all multiplicities vertical).
# ---------------------------------------------------------------------------

def _a_type_roots(rank: int) -> list[tuple[int, ...]]:
    """Positive roots b_i + ... + b_j of type a_rank, ordered by (i, j)."""
    out = []
    for i in range(1, rank + 1):
        for j in range(i, rank + 1):
            cs = [0] * rank
            for k in range(i - 1, j):
                cs[k] = 1
            out.append(tuple(cs))
    return out


def example_triad_A(n: int, m: int = 1) -> SymmetricTriad:
    """Rank 3n+2 triad of type a_(3n+2); every root has mV = m, mH = 0.

    m = 1 models the isotropy action of SU(3n+3)/SO(3n+3); m = 4 models the
    isotropy action of SU(6n+6)/Sp(3n+3).
    """
    if m not in (1, 4):
        raise ValueError("multiplicity m must be 1 or 4 for this family")
    rank = 3 * n + 2
    roots = tuple(TriadRoot(cs, m, 0) for cs in _a_type_roots(rank))
    if m == 1:
        ambient = (rank) * (rank + 3) // 2          # dim SU(N)/SO(N), N = rank+1
        desc = f"isotropy action of SU({3 * n + 3})/SO({3 * n + 3})"
    else:
        ambient = rank * (2 * rank + 3)             # dim SU(2M)/Sp(M), M = rank+1
        desc = f"isotropy action of SU({6 * n + 6})/Sp({3 * n + 3})"
    return SymmetricTriad(f"a{rank}-iso-m{m}", rank, roots,
                          ambient_dim=ambient, description=desc)


def example_triad_C(n: int) -> SymmetricTriad:
    """Rank 3n+2 triad of type c_(3n+2): isotropy action of Sp(3n+2)/U(3n+2).

    Roots: b_ij = b_i+...+b_j (i <= j), the long roots
    bhat_i = 2(b_i+...+b_{r-1}) + b_r (i <= r-1), and
    bhat_ij = b_i+...+b_{j-1} + 2(b_j+...+b_{r-1}) + b_r (i < j <= r-1),
    where r = 3n+2; every root has mV = 1, mH = 0.
    """
    rank = 3 * n + 2
    coeffs: list[tuple[int, ...]] = list(_a_type_roots(rank))
    for i in range(1, rank):
        cs = [0] * rank
        for k in range(i - 1, rank - 1):
            cs[k] = 2
        cs[rank - 1] = 1
        coeffs.append(tuple(cs))
    for i in range(1, rank):
        for j in range(i + 1, rank):
            cs = [0] * rank
            for k in range(i - 1, j - 1):
                cs[k] = 1
            for k in range(j - 1, rank - 1):
                cs[k] = 2
            cs[rank - 1] = 1
            coeffs.append(tuple(cs))
    roots = tuple(TriadRoot(cs, 1, 0) for cs in coeffs)
    return SymmetricTriad(
        f"c{rank}-iso", rank, roots, ambient_dim=rank * (rank + 1),
        description=f"isotropy action of Sp({rank})/U({rank})")


def example_triad_CP2() -> SymmetricTriad:
    """Rank 1 triad of the isotropy action of SU(3)/S(U(1)xU(2))."""
    return SymmetricTriad(
        "cp2-iso", 1, _roots(((1,), 2, 0), ((2,), 1, 0)),
        ambient_dim=4, description="isotropy action of SU(3)/S(U(1)xU(2))")


def example_Z(which: int, n: int = 0) -> CellPoint:
    """The distinguished base point of each worked family.

    Families 1, 2 (type a): b_{n+1}(Z) = b_{2n+2}(Z) = pi/3, all other
    coordinates 0.  Family 3: the single coordinate is pi/3.  Family 4
    (type c): additionally b_{3n+2}(Z) = pi/3.  For family 4 at n = 0 the
    index formulas collide (2n+2 = 3n+2); assignments are applied in listed
    order, so the collision is harmless but flagged by example_case().
    """
    if which in (1, 2, 4):
        rank = 3 * n + 2
        fr = [Fraction(0)] * rank
        positions = [n + 1, 2 * n + 2] + ([3 * n + 2] if which == 4 else [])
        for pos in positions:
            fr[pos - 1] = Fraction(1, 3)
        return CellPoint.exact(*fr)
    if which == 3:
        return CellPoint.exact((1, 3))
    raise ValueError("example id must be 1, 2, 3 or 4")


def example_case(which: int, n: int = 0) -> tuple[SymmetricTriad, CellPoint, list[str]]:
    """Triad, base point and notes for a worked family."""
    notes: list[str] = []
    if which == 1:
        t = example_triad_A(n, 1)
    elif which == 2:
        t = example_triad_A(n, 4)
    elif which == 3:
        t = example_triad_CP2()
    elif which == 4:
        t = example_triad_C(n)
        if n == 0:
            notes.append("index collision at n=0: positions 2n+2 and 3n+2 "
                         "coincide; assignments applied in listed order")
    else:
        raise ValueError("example id must be 1, 2, 3 or 4")
    return t, example_Z(which, n), notes
