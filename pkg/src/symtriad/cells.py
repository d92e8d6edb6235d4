"""Fundamental cell geometry and minimal-orbit enumeration.

The closed fundamental cell is cut out by 0 <= beta(Z) <= pi for vertical
roots and -pi/2 <= beta(Z) <= pi/2 for horizontal roots.  Its faces are
enumerated from consistent active subsets of those boundary hyperplanes; on
the relative interior of each face the orbit log-volume

    sum_V mV log sin(beta(Z)) + sum_H mH log cos(beta(Z))

(over roots not pinned to a singular value on the face) is strictly concave
wherever the active roots span the face directions, and its unique maximizer
is the one minimal orbit the face carries.  Newton iteration with the
analytic Hessian finds it; rational-multiple-of-pi maximizers are snapped
and re-verified exactly.

Cell geometry is done in units of pi with exact Fractions; only the Newton
iteration itself runs in floating point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .exact import Angle, Surd
from .orbit import OrbitReport, classify, mean_curvature_components
from .triads import CellPoint, SymmetricTriad, root_str

_FEAS_TOL = 1e-9


@dataclass(frozen=True)
class Hyperplane:
    """One boundary constraint sense*(beta(Z) - rhs) >= 0, rhs in units of pi."""

    coeffs: tuple[int, ...]
    rhs: Fraction
    sense: int                  # +1: beta >= rhs, -1: beta <= rhs
    kind: str                   # V_zero | V_pi | H_neg | H_pos

    @property
    def label(self) -> str:
        value = {"V_zero": "0", "V_pi": "pi",
                 "H_neg": "-pi/2", "H_pos": "pi/2"}[self.kind]
        return f"{root_str(self.coeffs)}={value}"


def cell_hyperplanes(t: SymmetricTriad) -> list[Hyperplane]:
    out: list[Hyperplane] = []
    for r in t.roots:
        if r.mV > 0:
            out.append(Hyperplane(r.coeffs, Fraction(0), +1, "V_zero"))
            out.append(Hyperplane(r.coeffs, Fraction(1), -1, "V_pi"))
        if r.mH > 0:
            out.append(Hyperplane(r.coeffs, Fraction(-1, 2), +1, "H_neg"))
            out.append(Hyperplane(r.coeffs, Fraction(1, 2), -1, "H_pos"))
    return out


def _dot(coeffs: Sequence[int], vec: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(c) * v for c, v in zip(coeffs, vec)), Fraction(0))


def _solve_affine(rows: list[Sequence[int]], rhs: list[Fraction], n: int):
    """Exact solution set of rows . x = rhs: (particular, nullspace basis) or None."""
    m = [list(map(Fraction, r)) + [b] for r, b in zip(rows, rhs)]
    piv_cols: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][n] != 0:
            return None
    base = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        base[c] = m[i][n]
    basis = []
    for fc in (c for c in range(n) if c not in piv_cols):
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, c in enumerate(piv_cols):
            v[c] = -m[i][fc]
        basis.append(tuple(v))
    return tuple(base), tuple(basis)


@dataclass(frozen=True)
class Face:
    """A stratum of the closed cell: identically-active constraints plus an
    exact parametrization base + span(basis) of its affine span."""

    active: tuple[int, ...]
    base: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]
    dim: int
    cheb: tuple[float, ...]          # relative-interior point, span coordinates
    label: str

    def point_at(self, y: Sequence[float]) -> tuple[float, ...]:
        """Ambient coordinates (units of pi) of span coordinates y."""
        out = [float(b) for b in self.base]
        for yj, bj in zip(y, self.basis):
            for i, c in enumerate(bj):
                out[i] += yj * float(c)
        return tuple(out)

    def sort_key(self) -> tuple:
        return (self.dim, self.active)


def enumerate_faces(t: SymmetricTriad) -> tuple[list[Face], bool]:
    """Every nonempty face of the closed cell, each exactly once.

    Exhaustive for rank <= 3.  For higher rank only faces of codimension
    <= 3 are generated and the second return value flags incompleteness.
    """
    hps = cell_hyperplanes(t)
    n = t.rank
    max_k = n if n <= 3 else 3
    incomplete = n > 3
    found: dict[frozenset, Face] = {}
    for k in range(0, max_k + 1):
        for subset in combinations(range(len(hps)), k):
            sol = _solve_affine([hps[i].coeffs for i in subset],
                                [hps[i].rhs for i in subset], n)
            if sol is None:
                continue
            base, basis = sol
            active, infeasible = [], False
            for idx, h in enumerate(hps):
                if all(_dot(h.coeffs, b) == 0 for b in basis):
                    val = _dot(h.coeffs, base)
                    if val == h.rhs:
                        active.append(idx)
                    elif h.sense * (val - h.rhs) < 0:
                        infeasible = True
                        break
            if infeasible:
                continue
            key = frozenset(active)
            if key in found:
                continue
            face = _relative_interior(hps, tuple(active), base, basis)
            if face is not None:
                found[key] = face
    return sorted(found.values(), key=Face.sort_key), incomplete


def _relative_interior(hps: list[Hyperplane], active: tuple[int, ...],
                       base: tuple[Fraction, ...],
                       basis: tuple[tuple[Fraction, ...], ...]) -> Face | None:
    """Chebyshev-style interior point of the face, or None if it is empty."""
    label = " & ".join(hps[i].label for i in active) or "interior"
    d = len(basis)
    if d == 0:
        return Face(tuple(active), base, basis, 0, (), label)
    rows, rhs = [], []
    for idx, h in enumerate(hps):
        if idx in active:
            continue
        g = np.array([float(_dot(h.coeffs, b)) for b in basis])
        nrm = float(np.linalg.norm(g))
        if nrm == 0.0:
            continue
        # sense*(g.y + v0 - rhs) >= s*nrm  ->  -sense*g.y + nrm*s <= sense*(v0-rhs)
        v0 = float(_dot(h.coeffs, base))
        rows.append(np.concatenate([-h.sense * g, [nrm]]))
        rhs.append(h.sense * (v0 - float(h.rhs)))
    rows.append(np.concatenate([np.zeros(d), [1.0]]))   # cap s <= 1
    rhs.append(1.0)
    c = np.zeros(d + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(None, None)] * d + [(None, 1.0)], method="highs")
    if not res.success or res.x[-1] <= _FEAS_TOL:
        return None
    y = res.x[:d]
    return Face(tuple(active), base, basis, d, tuple(y), label)


@dataclass(frozen=True)
class _Term:
    """One log sin / log cos summand restricted to a face."""

    sign: str                   # "V" (log sin) or "H" (log cos)
    mult: int
    const: float                # units of pi
    grad: np.ndarray            # reduced functional over span coordinates
    coeffs: tuple[int, ...]


@lru_cache(maxsize=None)
def _face_terms(t: SymmetricTriad, face: Face) -> list[_Term]:
    terms = []
    for r in t.roots:
        const = _dot(r.coeffs, face.base)
        grad_fr = [_dot(r.coeffs, b) for b in face.basis]
        constant = all(g == 0 for g in grad_fr)
        grad = np.array([float(g) for g in grad_fr])
        if r.mV > 0 and not (constant and const % 1 == 0):
            terms.append(_Term("V", r.mV, float(const), grad, r.coeffs))
        if r.mH > 0 and not (constant and const % 1 == Fraction(1, 2)):
            terms.append(_Term("H", r.mH, float(const), grad, r.coeffs))
    return terms


def log_volume(t: SymmetricTriad, face: Face, y: Sequence[float]) -> float:
    """Orbit log-volume at span coordinates y of the face (natural log).

    Sum of mV*log sin(beta(Z)) and mH*log cos(beta(Z)) over roots not pinned
    to a singular value on the face; -inf outside the strict region.
    """
    total = 0.0
    for term in _face_terms(t, face):
        x = math.pi * (term.const + float(term.grad @ np.asarray(y, dtype=float)))
        v = math.sin(x) if term.sign == "V" else math.cos(x)
        if v <= 0.0:
            return -math.inf
        total += term.mult * math.log(v)
    return total


@dataclass
class FaceSolution:
    face: Face
    point: CellPoint | None
    exact: bool = False
    converged: bool = False
    degenerate: bool = False
    iterations: int = 0
    grad_norm: float = math.nan
    message: str = ""

    def to_json(self) -> dict:
        return {
            "face": self.face.label,
            "face_dim": self.face.dim,
            "point": None if self.point is None else self.point.to_json(),
            "point_str": None if self.point is None else str(self.point),
            "exact": self.exact,
            "converged": self.converged,
            "degenerate": self.degenerate,
            "iterations": self.iterations,
            "grad_norm": None if math.isnan(self.grad_norm) else self.grad_norm,
            "message": self.message,
        }


def _objective(terms: list[_Term], y: np.ndarray):
    val, grad, hess = 0.0, np.zeros(len(y)), np.zeros((len(y), len(y)))
    for term in terms:
        x = math.pi * (term.const + float(term.grad @ y))
        if term.sign == "V":
            s = math.sin(x)
            if s <= 0.0:
                return -math.inf, grad, hess
            val += term.mult * math.log(s)
            slope = term.mult * math.pi / math.tan(x)
            curv = term.mult * (math.pi / s) ** 2
        else:
            c = math.cos(x)
            if c <= 0.0:
                return -math.inf, grad, hess
            val += term.mult * math.log(c)
            slope = -term.mult * math.pi * math.tan(x)
            curv = term.mult * (math.pi / c) ** 2
        grad += slope * term.grad
        hess -= curv * np.outer(term.grad, term.grad)
    return val, grad, hess


def solve_face(t: SymmetricTriad, face: Face, start: Sequence[float] | None = None,
               grad_tol: float = 1e-12, max_iter: int = 200) -> FaceSolution:
    """The unique log-volume maximizer on the face's relative interior.

    Vertices are returned as-is.  On positive-dimensional faces, damped
    Newton from the face's interior point converges globally because the
    objective is strictly concave and tends to -inf toward the relative
    boundary.  A Hessian that is not negative definite (active roots fail
    to span the face) is reported as degenerate, not guessed around.
    """
    if face.dim == 0:
        point = CellPoint(tuple(Angle.of_pi(b) for b in face.base))
        return FaceSolution(face, point, exact=True, converged=True, grad_norm=0.0)
    terms = _face_terms(t, face)
    y = np.array(start if start is not None else face.cheb, dtype=float)
    val, grad, hess = _objective(terms, y)
    if not math.isfinite(val):
        return FaceSolution(face, None, message="infeasible start")
    eigs = np.linalg.eigvalsh(hess) if terms else np.zeros(face.dim)
    if not terms or eigs.max() > -1e-10:
        return FaceSolution(face, None, degenerate=True,
                            message="active roots do not span the face; "
                                    "maximizer may be non-isolated")
    for it in range(1, max_iter + 1):
        gnorm = float(np.abs(grad).max())
        if gnorm < grad_tol:
            return _finish(t, face, y, it, gnorm)
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            return FaceSolution(face, None, iterations=it, grad_norm=gnorm,
                                message="singular Hessian")
        alpha, slope = 1.0, float(grad @ step)
        while alpha > 1e-14:
            cand = y + alpha * step
            cval, cgrad, chess = _objective(terms, cand)
            if math.isfinite(cval) and cval >= val + 1e-4 * alpha * slope:
                y, val, grad, hess = cand, cval, cgrad, chess
                break
            alpha *= 0.5
        else:
            return FaceSolution(face, None, iterations=it, grad_norm=gnorm,
                                message="line search stalled")
    return FaceSolution(face, None, iterations=max_iter,
                        grad_norm=float(np.abs(grad).max()),
                        message="no convergence")


def _finish(t: SymmetricTriad, face: Face, y: np.ndarray,
            iterations: int, gnorm: float) -> FaceSolution:
    units = face.point_at(y)
    snapped = _try_exact(t, face, units)
    if snapped is not None:
        return FaceSolution(face, snapped, exact=True, converged=True,
                            iterations=iterations, grad_norm=gnorm)
    point = CellPoint.numeric(*(u * math.pi for u in units))
    return FaceSolution(face, point, exact=False, converged=True,
                        iterations=iterations, grad_norm=gnorm)


def _try_exact(t: SymmetricTriad, face: Face,
               units: tuple[float, ...]) -> CellPoint | None:
    """Snap to rational multiples of pi and re-verify everything exactly."""
    fracs: list[Fraction] = []
    for u in units:
        best = None
        for q in range(1, 13):
            p = round(u * q)
            if abs(u - p / q) * math.pi <= 1e-9:
                best = Fraction(p, q)
                break
        if best is None:
            return None
        fracs.append(best)
    hps = cell_hyperplanes(t)
    for idx, h in enumerate(hps):
        val = _dot(h.coeffs, fracs)
        if idx in face.active:
            if val != h.rhs:
                return None
        elif h.sense * (val - h.rhs) <= 0:
            return None
    point = CellPoint(tuple(Angle.of_pi(f) for f in fracs))
    comps = mean_curvature_components(t, point)
    if not all(isinstance(c, Surd) and c.is_zero() for c in comps):
        return None
    return point


@dataclass
class OrbitSolution:
    face: Face
    solution: FaceSolution
    report: OrbitReport


@dataclass
class MinimalOrbitSet:
    triad: SymmetricTriad
    solutions: list[OrbitSolution]
    failures: list[FaceSolution]
    face_count: int
    incomplete: bool = False

    def points(self) -> list[CellPoint]:
        return [s.solution.point for s in self.solutions]

    def to_json(self, verbose: bool = False) -> dict:
        out = {
            "triad": self.triad.name,
            "face_count": self.face_count,
            "solution_count": len(self.solutions),
            "incomplete": self.incomplete,
            "solutions": [{
                "face": s.face.label,
                "face_dim": s.face.dim,
                "point": s.solution.point.to_json(),
                "point_str": str(s.solution.point),
                "exact": s.solution.exact,
                "report": s.report.to_json(),
            } for s in self.solutions],
            "failures": [f.to_json() for f in self.failures],
        }
        if verbose:
            for s, js in zip(self.solutions, out["solutions"]):
                js["diagnostics"] = {
                    "iterations": s.solution.iterations,
                    "grad_norm": s.solution.grad_norm,
                    "converged": s.solution.converged,
                }
        return out


def enumerate_minimal_orbits(t: SymmetricTriad, tol: float = 1e-9,
                             parallel: bool = False) -> MinimalOrbitSet:
    """Solve every face of the cell and classify the resulting orbit points.

    Faces are processed lowest-dimension first so that deduplication keeps
    the lowest-dimensional face's record; per-face failures are collected
    without aborting the remaining faces.
    """
    faces, incomplete = enumerate_faces(t)
    if parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda f: solve_face(t, f), faces))
    else:
        results = [solve_face(t, f) for f in faces]
    solutions: list[OrbitSolution] = []
    failures: list[FaceSolution] = []
    for face, sol in zip(faces, results):
        if sol.point is None or not sol.converged:
            failures.append(sol)
            continue
        if any(sol.point.approx_eq(s.solution.point, tol) for s in solutions):
            continue
        report = classify(t, sol.point, tol)
        solutions.append(OrbitSolution(face, sol, report))
    return MinimalOrbitSet(t, solutions, failures, len(faces), incomplete)
