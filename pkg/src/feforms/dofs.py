"""Degrees of freedom: face-attached integral functionals and unisolvence.

Every functional has the shape  u -> integral over a face f of
(trace of u on f) wedge q,  where q is a weight form on the reference
face.  Vertices are zero-dimensional faces; their "integral" is point
evaluation, consistent with the convention that the weight space on a
vertex is the constants.

Weight spaces per family, for a face of dimension d >= k:

  Pminus   q in P_(r+k-d-1) (d-k)-forms on the face
  P        q in Pminus_(r+k-d) (d-k)-forms on the face
  S        q in P_(r-2(d-k))  (d-k)-forms on the face
  Qminus   monomial (d-k)-forms with per-axis degree <= r-2 on the weight
           alternator axes and <= r-1 on the others (the tensor-product
           construction materialized as explicit face moments)

with the convention that a space of negative degree is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from feforms import linalg, spaces
from feforms.combinatorics import enumerate_sigma
from feforms.forms import (
    AffineEmbedding,
    PolyForm,
    integrate_std_simplex,
    integrate_unit_box,
    pullback,
    wedge,
)
from feforms.spaces import SpaceSpec, monomial_forms


@dataclass(frozen=True, eq=False)
class FaceRef:
    """One face of a reference element with its chart into the element."""
    kind: str          # "simplex" | "box"
    n: int             # element dimension
    dim: int           # face dimension
    index: int         # position in the canonical enumeration
    label: tuple       # simplex: vertex indices; box: (free axes, fixed bits)
    embedding: AffineEmbedding = field(repr=False)


@dataclass(frozen=True, eq=False)
class DofFunctional:
    face: FaceRef
    weight: PolyForm  # (d - k)-form on the reference face


@dataclass(frozen=True, eq=False)
class DofSet:
    spec: SpaceSpec
    functionals: tuple


def reference_vertex(n: int, i: int) -> tuple:
    """Vertex i of the reference simplex: the origin, then e_1 ... e_n."""
    if i == 0:
        return (Fraction(0),) * n
    return tuple(Fraction(int(j == i - 1)) for j in range(n))


@lru_cache(maxsize=None)
def reference_faces(kind: str, n: int) -> tuple[FaceRef, ...]:
    """Canonical face enumeration: dimension ascending, labels lexicographic."""
    out = []
    if kind == "simplex":
        for d in range(n + 1):
            for subset in combinations(range(n + 1), d + 1):
                emb = AffineEmbedding.from_simplex(
                    [reference_vertex(n, i) for i in subset])
                out.append(FaceRef(kind, n, d, len(out), subset, emb))
    elif kind == "box":
        for d in range(n + 1):
            for axes in combinations(range(1, n + 1), d):
                fixed = [i for i in range(1, n + 1) if i not in axes]
                for bits in product((0, 1), repeat=n - d):
                    values = dict(zip(fixed, bits))
                    rows = []
                    offset = []
                    for axis in range(1, n + 1):
                        if axis in axes:
                            pos = axes.index(axis)
                            rows.append(tuple(Fraction(int(j == pos))
                                              for j in range(d)))
                            offset.append(Fraction(0))
                        else:
                            rows.append((Fraction(0),) * d)
                            offset.append(Fraction(values[axis]))
                    emb = AffineEmbedding(tuple(rows), tuple(offset))
                    out.append(FaceRef(kind, n, d, len(out), (axes, bits), emb))
    else:
        raise ValueError(f"unknown element kind {kind!r}")
    return tuple(out)


@lru_cache(maxsize=None)
def weight_basis(family: str, r: int, k: int, d: int, kind: str) -> tuple[PolyForm, ...]:
    """Weight forms spanning the functionals attached to one d-face."""
    if d < k:
        return ()
    j = d - k
    if family == "Pminus":
        s = r + k - d - 1
        return tuple(monomial_forms(d, j, s)) if s >= 0 else ()
    if family == "P":
        s = r + k - d
        if s < 1:
            return ()
        return tuple(spaces.basis_Pminus(s, j, d).forms)
    if family == "S":
        s = r - 2 * j
        return tuple(monomial_forms(d, j, s)) if s >= 0 else ()
    if family == "Qminus":
        out = []
        for tau in enumerate_sigma(j, d):
            inside = set(tau)
            caps = [r - 2 if (i + 1) in inside else r - 1 for i in range(d)]
            if any(c < 0 for c in caps):
                continue
            for alpha in product(*(range(c + 1) for c in caps)):
                out.append(PolyForm.monomial(d, alpha, tau))
        return tuple(out)
    raise ValueError(f"unknown family {family!r}")


@lru_cache(maxsize=None)
def dofs_for(spec: SpaceSpec) -> DofSet:
    functionals = []
    for face in reference_faces(spec.element, spec.n):
        for q in weight_basis(spec.family, spec.r, spec.k, face.dim, spec.element):
            functionals.append(DofFunctional(face, q))
    return DofSet(spec, tuple(functionals))


def dofs_P(r: int, k: int, n: int) -> DofSet:
    return dofs_for(spaces.make_spec("P", n, r, k))


def dofs_Pminus(r: int, k: int, n: int) -> DofSet:
    return dofs_for(spaces.make_spec("Pminus", n, r, k))


def dofs_Qminus(r: int, k: int, n: int) -> DofSet:
    return dofs_for(spaces.make_spec("Qminus", n, r, k))


def dofs_S(r: int, k: int, n: int) -> DofSet:
    return dofs_for(spaces.make_spec("S", n, r, k))


def dofs_lagrange(r: int, n: int) -> DofSet:
    """Vertex values plus face moments of degree r-d-1: the 0-form case."""
    return dofs_for(spaces.make_spec("P", n, r, 0))


def apply(phi: DofFunctional, u: PolyForm) -> Fraction:
    """Exact value of the functional: trace to the face, wedge, integrate."""
    face = phi.face
    tr = pullback(u, face.embedding)
    w = wedge(tr, phi.weight)
    return _integrate_face(w, face)


def _integrate_face(w: PolyForm, face: FaceRef) -> Fraction:
    if face.dim == 0:
        return w.component(()).evaluate(())
    if face.kind == "simplex":
        return integrate_std_simplex(w)
    return integrate_unit_box(w)


def dof_matrix(forms, dofset: DofSet) -> list[list[Fraction]]:
    """M[i][j] = functional i applied to form j.

    Traces are computed once per face and reused across the face's weights.
    """
    forms = list(getattr(forms, "forms", forms))
    rows: list[list[Fraction]] = []
    by_face: dict[int, list[DofFunctional]] = {}
    order = []
    for phi in dofset.functionals:
        if phi.face.index not in by_face:
            by_face[phi.face.index] = []
            order.append(phi.face)
        by_face[phi.face.index].append(phi)
    for face in order:
        traces = [pullback(f, face.embedding) for f in forms]
        for phi in by_face[face.index]:
            rows.append([_integrate_face(wedge(tr, phi.weight), face)
                         for tr in traces])
    return rows


def per_face_counts(spec: SpaceSpec) -> list[dict]:
    """DOF count attached to a single face of each dimension."""
    return [{"d": d,
             "count_per_face": len(weight_basis(spec.family, spec.r, spec.k,
                                                d, spec.element))}
            for d in range(spec.n + 1)]


def unisolvence_check(spec: SpaceSpec) -> dict:
    """Count check plus exact nonsingularity of the DOF matrix."""
    basis = spaces.basis_for(spec)
    dofset = dofs_for(spec)
    matrix = dof_matrix(basis.forms, dofset)
    count_ok = len(dofset.functionals) == basis.dim
    if count_ok and basis.dim > 0:
        invertible = linalg.is_nonsingular(matrix)
    elif count_ok:
        invertible = True
    else:
        invertible = False
    return {
        "spec": spec.as_dict(),
        "dim": basis.dim,
        "dof_count": len(dofset.functionals),
        "per_face": per_face_counts(spec),
        "count_ok": count_ok,
        "determinant_nonzero": invertible,
    }


def trace_moment_vanishing_check(r: int, k: int, n: int) -> dict:
    """Nullspace test behind unisolvence on the reference simplex.

    A degree-(r-1) k-form whose trace vanishes on every facet and whose
    moments against all (n-k)-form weights of degree r+k-n-1 vanish must be
    zero; equivalently the stacked constraint matrix has full column rank.
    """
    forms = monomial_forms(n, k, r - 1)
    cols = len(forms)
    ech = linalg.Echelon()
    facets = [f for f in reference_faces("simplex", n) if f.dim == n - 1]
    for face in facets:
        trace_dicts = [pullback(f, face.embedding).coefficient_dict()
                       for f in forms]
        keys = sorted({key for td in trace_dicts for key in td})
        for key in keys:
            row = {j: td[key] for j, td in enumerate(trace_dicts) if key in td}
            if row:
                ech.add_fractions(row)
    for q in monomial_forms(n, n - k, r + k - n - 1):
        row = {}
        for j, f in enumerate(forms):
            v = integrate_std_simplex(wedge(f, q))
            if v:
                row[j] = v
        if row:
            ech.add_fractions(row)
    return {
        "r": r, "k": k, "n": n,
        "space_dim": cols,
        "constraint_rank": ech.rank,
        "nullity": cols - ech.rank,
        "pass": cols == ech.rank,
    }
