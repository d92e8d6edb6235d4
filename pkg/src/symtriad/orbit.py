"""Orbit geometry at a point of the flat: dimensions, shape-operator spectrum,
mean curvature, and the minimal/austere/totally-geodesic classifiers.

At a point Z the orbit's tangent space collects the root spaces of
nonsingular roots (vertical roots with beta(Z) != 0 mod pi, horizontal roots
with beta(Z) != pi/2 mod pi); the shape operator in a normal direction v acts
on the vertical block of beta by -beta(v) * cot(beta(Z)) and on the
horizontal block by beta(v) * tan(beta(Z)).  Everything below is a direct
computation with that block structure, kept exact over Q(sqrt(3)) whenever
the angles allow it.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .exact import (DEFAULT_TOL, INF, Angle, ExactValue, Infinite, Surd,
                    cot_exact, format_angle, tan_exact)
from .triads import CellPoint, SymmetricTriad, TriadRoot, root_str

#: congruence classes (in units of pi, mod 1) entering the two conditions
CONDITION_I_CLASSES = frozenset(
    Fraction(k, 6) for k in (0, 1, 2, 3, 4, 5))
CONDITION_II_CLASSES = frozenset(
    Fraction(k, 4) for k in (0, 1, 2, 3))


class PoleError(ValueError):
    """A nonsingular root sits numerically on a pole of its cot/tan."""


def _mod_one(f: Fraction) -> Fraction:
    return f % 1


def value_class(angle: Angle, tol: float = DEFAULT_TOL):
    """beta(Z)/pi mod 1 as an exact Fraction, or (float, snapped) for numerics.

    Numeric values within tol of a rational class with denominator <= 12 are
    snapped to it (and reported as snapped).
    """
    if angle.is_exact:
        return _mod_one(angle.pi_fraction), False
    u = (angle.radians / math.pi) % 1.0
    for q in range(1, 13):
        p = round(u * q)
        if abs(u - p / q) * math.pi <= tol:
            return _mod_one(Fraction(p, q)), True
    return u, False


def is_zero_mod_pi(angle: Angle, tol: float = DEFAULT_TOL) -> bool:
    if angle.is_exact:
        return angle.pi_fraction % 1 == 0
    return abs(math.sin(angle.radians)) <= tol


def is_half_mod_pi(angle: Angle, tol: float = DEFAULT_TOL) -> bool:
    if angle.is_exact:
        return angle.pi_fraction % 1 == Fraction(1, 2)
    return abs(math.cos(angle.radians)) <= tol


def singular_sets(t: SymmetricTriad, Z: CellPoint, tol: float = DEFAULT_TOL
                  ) -> tuple[set[tuple[int, ...]], set[tuple[int, ...]]]:
    """Vertical roots with beta(Z) = 0 mod pi; horizontal with beta(Z) = pi/2."""
    v_sing: set[tuple[int, ...]] = set()
    h_sing: set[tuple[int, ...]] = set()
    for r in t.roots:
        val = Z.evaluate(r.coeffs)
        if r.mV > 0 and is_zero_mod_pi(val, tol):
            v_sing.add(r.coeffs)
        if r.mH > 0 and is_half_mod_pi(val, tol):
            h_sing.add(r.coeffs)
    return v_sing, h_sing


def orbit_dimension(t: SymmetricTriad, Z: CellPoint, tol: float = DEFAULT_TOL) -> int:
    v_sing, h_sing = singular_sets(t, Z, tol)
    dim = t.centralizer_dim
    for r in t.roots:
        if r.mV > 0 and r.coeffs not in v_sing:
            dim += r.mV
        if r.mH > 0 and r.coeffs not in h_sing:
            dim += r.mH
    return dim


def normal_dimension(t: SymmetricTriad, Z: CellPoint, tol: float = DEFAULT_TOL) -> int:
    v_sing, h_sing = singular_sets(t, Z, tol)
    dim = t.rank
    for r in t.roots:
        if r.mV > 0 and r.coeffs in v_sing:
            dim += r.mV
        if r.mH > 0 and r.coeffs in h_sing:
            dim += r.mH
    return dim


@dataclass(frozen=True)
class SpectrumEntry:
    """Eigenvalue functional v -> coeff * beta(v) on a block of dimension mult."""

    root: tuple[int, ...]
    kind: Literal["V", "H"]
    coeff: ExactValue
    mult: int

    def coeff_float(self) -> float:
        return float(self.coeff)


@dataclass(frozen=True)
class ShapeSpectrum:
    """Nonzero principal-curvature functionals plus the common kernel dimension.

    Blocks whose coefficient vanishes identically (vertical roots at pi/2,
    horizontal roots at 0 mod pi) belong to the kernel of every shape
    operator and are counted in kernel_dim, not listed as entries.
    """

    entries: tuple[SpectrumEntry, ...]
    kernel_dim: int

    def tangent_dim(self, centralizer_dim: int = 0) -> int:
        return self.kernel_dim + sum(e.mult for e in self.entries)

    def trace_at(self, v: Sequence[float]) -> float:
        return sum(e.coeff_float() * _pair(e.root, v) * e.mult
                   for e in self.entries)

    def to_json(self) -> dict:
        return {
            "entries": [{
                "root": list(e.root), "kind": e.kind, "mult": e.mult,
                "coeff": (e.coeff.to_json() if isinstance(e.coeff, Surd)
                          else float(e.coeff)),
            } for e in self.entries],
            "kernel_dim": self.kernel_dim,
        }


def _pair(coeffs: Sequence[int], v: Sequence[float]) -> float:
    return sum(n * x for n, x in zip(coeffs, v))


def shape_spectrum(t: SymmetricTriad, Z: CellPoint,
                   tol: float = DEFAULT_TOL) -> ShapeSpectrum:
    v_sing, h_sing = singular_sets(t, Z, tol)
    entries: list[SpectrumEntry] = []
    kernel = t.centralizer_dim
    for r in t.roots:
        val = Z.evaluate(r.coeffs)
        if r.mV > 0 and r.coeffs not in v_sing:
            if is_half_mod_pi(val, tol):
                kernel += r.mV
            else:
                c = cot_exact(val)
                if isinstance(c, Infinite):
                    raise PoleError(f"cot pole at nonsingular root {root_str(r.coeffs)}")
                entries.append(SpectrumEntry(r.coeffs, "V", _negate(c), r.mV))
        if r.mH > 0 and r.coeffs not in h_sing:
            if is_zero_mod_pi(val, tol):
                kernel += r.mH
            else:
                s = tan_exact(val)
                if isinstance(s, Infinite):
                    raise PoleError(f"tan pole at nonsingular root {root_str(r.coeffs)}")
                entries.append(SpectrumEntry(r.coeffs, "H", s, r.mH))
    return ShapeSpectrum(tuple(entries), kernel)


def _negate(v: ExactValue) -> ExactValue:
    return -v if isinstance(v, Surd) else -float(v)


def mean_curvature_components(t: SymmetricTriad, Z: CellPoint,
                              tol: float = DEFAULT_TOL) -> list[ExactValue]:
    """F_i = sum_V n_i mV cot(beta(Z)) - sum_H n_i mH tan(beta(Z)) over
    nonsingular roots; the orbit is minimal exactly when every F_i vanishes.

    Exact surds whenever every contributing angle has an exact tan/cot;
    one numeric term degrades the whole vector to floats.
    """
    v_sing, h_sing = singular_sets(t, Z, tol)
    terms: list[tuple[tuple[int, ...], int, ExactValue]] = []
    for r in t.roots:
        val = Z.evaluate(r.coeffs)
        if r.mV > 0 and r.coeffs not in v_sing:
            c = cot_exact(val)
            if isinstance(c, Infinite):
                raise PoleError(f"cot pole at nonsingular root {root_str(r.coeffs)}")
            terms.append((r.coeffs, r.mV, c))
        if r.mH > 0 and r.coeffs not in h_sing:
            s = tan_exact(val)
            if isinstance(s, Infinite):
                raise PoleError(f"tan pole at nonsingular root {root_str(r.coeffs)}")
            terms.append((r.coeffs, -r.mH, s))
    exact = all(isinstance(v, Surd) for (_, _, v) in terms)
    out: list[ExactValue] = []
    for i in range(t.rank):
        if exact:
            acc: ExactValue = Surd(0, 0)
            for coeffs, weight, v in terms:
                acc = acc + v * (coeffs[i] * weight)
        else:
            acc = 0.0
            for coeffs, weight, v in terms:
                acc += float(v) * coeffs[i] * weight
        out.append(acc)
    return out


def is_minimal(t: SymmetricTriad, Z: CellPoint, tol: float = DEFAULT_TOL) -> bool:
    comps = mean_curvature_components(t, Z, tol)
    if all(isinstance(c, Surd) for c in comps):
        return all(c.is_zero() for c in comps)
    return all(abs(float(c)) < tol for c in comps)


def _covector_key(entry: SpectrumEntry):
    """The functional coeff * beta as a hashable exact covector, or None."""
    if not isinstance(entry.coeff, Surd):
        return None
    vec = tuple(entry.coeff * n for n in entry.root)
    return tuple((c.a, c.b) for c in vec)


def is_austere(t: SymmetricTriad, Z: CellPoint, tol: float = DEFAULT_TOL) -> bool:
    """Whether the principal-curvature multiset is symmetric under negation.

    Entries are compared as functionals coeff * beta (so proportional roots
    such as beta and 2*beta can cancel each other); multiplicities of equal
    functionals aggregate before matching.
    """
    spec = shape_spectrum(t, Z, tol)
    if not spec.entries:
        return True
    if all(isinstance(e.coeff, Surd) for e in spec.entries):
        counts: Counter = Counter()
        for e in spec.entries:
            counts[_covector_key(e)] += e.mult
        for key, mult in counts.items():
            neg = tuple((-a, -b) for (a, b) in key)
            if counts.get(neg, 0) != mult:
                return False
        return True
    return _numeric_symmetric([(tuple(e.coeff_float() * n for n in e.root), e.mult)
                               for e in spec.entries], tol)


def _numeric_symmetric(vectors: list[tuple[tuple[float, ...], int]],
                       tol: float) -> bool:
    # Cluster equal covectors within tolerance, then demand the negated
    # cluster carries the same total multiplicity.
    clusters: list[tuple[tuple[float, ...], int]] = []
    for vec, mult in vectors:
        for k, (cvec, cmult) in enumerate(clusters):
            if max(abs(a - b) for a, b in zip(vec, cvec)) <= tol:
                clusters[k] = (cvec, cmult + mult)
                break
        else:
            clusters.append((vec, mult))
    for vec, mult in clusters:
        neg = tuple(-x for x in vec)
        partner = next((m for (cvec, m) in clusters
                        if max(abs(a - b) for a, b in zip(neg, cvec)) <= tol), 0)
        if partner != mult:
            return False
    return True


def is_totally_geodesic(t: SymmetricTriad, Z: CellPoint,
                        tol: float = DEFAULT_TOL) -> bool:
    return not shape_spectrum(t, Z, tol).entries


def _exact_classes(t: SymmetricTriad, Z: CellPoint
                   ) -> list[tuple[TriadRoot, Fraction]] | None:
    if not Z.is_exact:
        return None
    return [(r, _mod_one(Z.evaluate(r.coeffs).pi_fraction)) for r in t.roots]


def check_condition_I(t: SymmetricTriad, Z: CellPoint) -> bool:
    """Membership of every root value in {0, pi/6, pi/3, pi/2, 2pi/3, 5pi/6}
    mod pi, plus the 3/1-weighted balance per simple-root index.

    Requires exact coordinates; numeric points never satisfy the condition.
    """
    classes = _exact_classes(t, Z)
    if classes is None:
        return False
    if any(cls not in CONDITION_I_CLASSES for _, cls in classes):
        return False
    sixth = Fraction(1, 6)
    weights_lhs = {  # (kind, class) -> weight on the left-hand side
        ("V", 1 * sixth): 3, ("V", 2 * sixth): 1,
        ("H", 4 * sixth): 3, ("H", 5 * sixth): 1,
    }
    weights_rhs = {
        ("V", 4 * sixth): 1, ("V", 5 * sixth): 3,
        ("H", 1 * sixth): 1, ("H", 2 * sixth): 3,
    }
    for i in range(t.rank):
        lhs = rhs = 0
        for r, cls in classes:
            for kind, mult in (("V", r.mV), ("H", r.mH)):
                if mult == 0:
                    continue
                lhs += weights_lhs.get((kind, cls), 0) * r.coeffs[i] * mult
                rhs += weights_rhs.get((kind, cls), 0) * r.coeffs[i] * mult
        if lhs != rhs:
            return False
    return True


def check_condition_II(t: SymmetricTriad, Z: CellPoint) -> bool:
    """Membership in {0, pi/4, pi/2, 3pi/4} mod pi plus the unweighted balance."""
    classes = _exact_classes(t, Z)
    if classes is None:
        return False
    if any(cls not in CONDITION_II_CLASSES for _, cls in classes):
        return False
    quarter = Fraction(1, 4)
    for i in range(t.rank):
        lhs = rhs = 0
        for r, cls in classes:
            if r.mV > 0:
                if cls == quarter:
                    lhs += r.coeffs[i] * r.mV
                elif cls == 3 * quarter:
                    rhs += r.coeffs[i] * r.mV
            if r.mH > 0:
                if cls == 3 * quarter:
                    lhs += r.coeffs[i] * r.mH
                elif cls == quarter:
                    rhs += r.coeffs[i] * r.mH
        if lhs != rhs:
            return False
    return True


_METRIC_CONSTANTS = {"F": Fraction(1), "C": Fraction(3, 4),
                     "D": Fraction(1, 4), "E": Fraction(1, 2)}

_TAG_ANGLE_SETS = {
    # tag -> (vertical classes, horizontal classes), in units of pi mod 1
    "C": ({Fraction(0), Fraction(1, 3), Fraction(2, 3)},
          {Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)}),
    "D": ({Fraction(0), Fraction(1, 6), Fraction(5, 6)},
          {Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)}),
    "E": ({Fraction(0), Fraction(1, 4), Fraction(3, 4)},
          {Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)}),
}


def theorem_tags(t: SymmetricTriad, Z: CellPoint,
                 cond_I: bool | None = None,
                 cond_II: bool | None = None) -> frozenset:
    """Which of the five classification patterns the point satisfies.

    B: balanced multiplicities (mV = mH on every root) with all values in
       {0, pi/4, pi/2, 3pi/4} and one of the two conditions holding.
    C/D/E: disjoint vertical/horizontal root sets, the appropriate condition,
       and the tabulated per-family congruence classes.
    F: disjoint root sets with every value in {0, pi/2} mod pi.
    """
    classes = _exact_classes(t, Z)
    if classes is None:
        return frozenset()
    if cond_I is None:
        cond_I = check_condition_I(t, Z)
    if cond_II is None:
        cond_II = check_condition_II(t, Z)
    v_classes = {cls for r, cls in classes if r.mV > 0}
    h_classes = {cls for r, cls in classes if r.mH > 0}
    all_classes = {cls for _, cls in classes}
    disjoint = t.vh_disjoint
    tags = set()
    if ((cond_I or cond_II)
            and all(r.mV == r.mH for r in t.roots)
            and all_classes <= CONDITION_II_CLASSES):
        tags.add("B")
    for tag, (v_ok, h_ok) in _TAG_ANGLE_SETS.items():
        cond = cond_I if tag in ("C", "D") else cond_II
        if cond and disjoint and v_classes <= v_ok and h_classes <= h_ok:
            tags.add(tag)
    if disjoint and all_classes <= {Fraction(0), Fraction(1, 2)}:
        tags.add("F")
    return frozenset(tags)


def metric_constant(t: SymmetricTriad, tags: frozenset) -> Fraction | None:
    if not t.cohomogeneity_equals_rank:
        return None
    for tag in ("F", "C", "D", "E"):
        if tag in tags:
            return _METRIC_CONSTANTS[tag]
    return None


MINIMAL_ORBIT_NOTE = ("minimal orbit: admits a Killing-orthogonal reductive "
                      "decomposition whose canonical connection equals the "
                      "normal connection")


@dataclass(frozen=True)
class OrbitReport:
    Z: CellPoint
    dim_orbit: int
    dim_normal: int
    kernel_dim: int
    minimal: bool
    austere: bool
    totally_geodesic: bool
    condition_I: bool
    condition_II: bool
    theorem_tags: frozenset
    metric_constant: Fraction | None
    spectrum: ShapeSpectrum
    mean_curvature: tuple
    snapped: bool = False
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        mc = None
        if self.metric_constant is not None:
            mc = [self.metric_constant.numerator, self.metric_constant.denominator]
        return {
            "Z": self.Z.to_json(),
            "Z_str": str(self.Z),
            "dim_orbit": self.dim_orbit,
            "dim_normal": self.dim_normal,
            "kernel_dim": self.kernel_dim,
            "minimal": self.minimal,
            "austere": self.austere,
            "totally_geodesic": self.totally_geodesic,
            "condition_I": self.condition_I,
            "condition_II": self.condition_II,
            "theorem_tags": sorted(self.theorem_tags),
            "metric_constant": mc,
            "spectrum": self.spectrum.to_json(),
            "mean_curvature": [c.to_json() if isinstance(c, Surd) else float(c)
                               for c in self.mean_curvature],
            "snapped": self.snapped,
            "notes": list(self.notes),
        }


def classify(t: SymmetricTriad, Z: CellPoint, tol: float = DEFAULT_TOL) -> OrbitReport:
    """Full pointwise classification of the orbit through Z."""
    spec = shape_spectrum(t, Z, tol)
    comps = mean_curvature_components(t, Z, tol)
    if all(isinstance(c, Surd) for c in comps):
        minimal = all(c.is_zero() for c in comps)
    else:
        minimal = all(abs(float(c)) < tol for c in comps)
    austere = is_austere(t, Z, tol)
    tg = not spec.entries
    cond_I = check_condition_I(t, Z)
    cond_II = check_condition_II(t, Z)
    tags = theorem_tags(t, Z, cond_I, cond_II)
    notes: list[str] = []
    if minimal:
        notes.append(MINIMAL_ORBIT_NOTE)
    snapped = False
    if not Z.is_exact:
        snapped = any(value_class(Z.evaluate(r.coeffs), tol)[1] for r in t.roots)
        if snapped:
            notes.append("numeric congruences within tolerance were snapped")
        notes.append("conditions (I)/(II) require exact coordinates; "
                     "reported false for numeric input")
    return OrbitReport(
        Z=Z,
        dim_orbit=orbit_dimension(t, Z, tol),
        dim_normal=normal_dimension(t, Z, tol),
        kernel_dim=spec.kernel_dim,
        minimal=minimal,
        austere=austere,
        totally_geodesic=tg,
        condition_I=cond_I,
        condition_II=cond_II,
        theorem_tags=tags,
        metric_constant=metric_constant(t, tags),
        spectrum=spec,
        mean_curvature=tuple(comps),
        snapped=snapped,
        notes=tuple(notes),
    )


def theorem_label(report: OrbitReport) -> str:
    """The classification column label: F beats C/D/E, else 'other'."""
    for tag in ("F", "C", "D", "E"):
        if tag in report.theorem_tags:
            return tag
    return "other"


def orbit_label(report: OrbitReport) -> str:
    if report.dim_orbit == 0:
        return "point"
    if report.totally_geodesic:
        return "totally_geodesic"
    return "austere" if report.austere else "not_austere"


def render_report(report: OrbitReport) -> str:
    lines = [f"Z = {report.Z}"]
    lines.append(f"  dim orbit = {report.dim_orbit}, dim normal = "
                 f"{report.dim_normal}, kernel = {report.kernel_dim}")
    lines.append(f"  minimal = {report.minimal}, austere = {report.austere}, "
                 f"totally geodesic = {report.totally_geodesic}")
    lines.append(f"  condition I = {report.condition_I}, "
                 f"condition II = {report.condition_II}")
    tags = ", ".join(sorted(report.theorem_tags)) or "none"
    lines.append(f"  theorem tags: {tags}")
    if report.metric_constant is not None:
        lines.append(f"  metric constant c = {report.metric_constant}")
    if report.spectrum.entries:
        lines.append("  principal curvature functionals:")
        for e in report.spectrum.entries:
            c = str(e.coeff) if isinstance(e.coeff, Surd) else f"{float(e.coeff):.9g}"
            lines.append(f"    {e.kind} {root_str(e.root)}: coeff {c} x{e.mult}")
    for n in report.notes:
        lines.append(f"  note: {n}")
    return "\n".join(lines)
