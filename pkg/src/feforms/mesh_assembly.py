"""Small conforming meshes, global DOF assembly, and commuting projections.

A mesh is a list of rational vertices plus ordered vertex-id tuples per
element (simplices, or axis-aligned boxes with corners listed in binary
order: bit j of the corner position selects the high end of axis j+1).

Global degrees of freedom are attached to mesh faces.  A face of dimension
d carries the same weight forms as the corresponding reference face; the
functional is evaluated through the face's canonical chart (sorted global
vertex order for simplex faces, increasing free axes for box faces)
composed into each adjacent element's reference coordinates.  Because the
weight spans are invariant under the affine reparametrizations between
charts, every adjacent element induces the same functional, which is what
makes shared-face DOFs single-valued without explicit sign tables.

Piecewise forms are dicts element index -> PolyForm in the element's
reference coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from feforms import linalg, spaces
from feforms.forms import (
    AffineEmbedding,
    PolyForm,
    exterior_derivative,
    form_to_string,
    pullback,
    wedge,
    integrate_std_simplex,
    integrate_unit_box,
)
from feforms.dofs import reference_vertex, weight_basis
from feforms.polynomial import barycentric, rational_to_string


class MeshError(ValueError):
    pass


class NonconformingMeshError(MeshError):
    pass


class DegenerateElementError(MeshError):
    pass


@dataclass(frozen=True, eq=False)
class MeshFace:
    dim: int
    ids: tuple            # sorted global vertex ids
    adjacent: tuple       # ((element index, psi), ...) in element order
    index: int


class Mesh:
    """A validated conforming mesh of simplices or axis-aligned boxes."""

    def __init__(self, kind: str, n: int, vertices, elements):
        if kind not in ("simplicial", "cubical"):
            raise MeshError(f"unknown mesh kind {kind!r}")
        self.kind = kind
        self.n = n
        self.vertices = tuple(tuple(Fraction(c) for c in v) for v in vertices)
        self.elements = tuple(tuple(int(i) for i in e) for e in elements)
        self._faces = None
        self._element_charts = None
        self._box_bounds = None
        self._validate()

    @property
    def element_kind(self) -> str:
        return "simplex" if self.kind == "simplicial" else "box"

    # -- validation -----------------------------------------------------

    def _validate(self):
        n = self.n
        for v in self.vertices:
            if len(v) != n:
                raise MeshError(f"vertex {v} does not have {n} coordinates")
        if len(set(self.vertices)) != len(self.vertices):
            raise MeshError("duplicate vertex coordinates")
        per_elem = (n + 1) if self.kind == "simplicial" else 2 ** n
        for e in self.elements:
            if len(e) != per_elem or len(set(e)) != per_elem:
                raise MeshError(f"element {e} must list {per_elem} distinct vertices")
            if any(not 0 <= i < len(self.vertices) for i in e):
                raise MeshError(f"element {e} references a missing vertex")
        if self.kind == "simplicial":
            for e in self.elements:
                chart = AffineEmbedding.from_simplex([self.vertices[i] for i in e])
                if chart.jacobian_det() == 0:
                    raise DegenerateElementError(f"element {e} is degenerate")
            self._check_simplicial_conformity()
        else:
            self._box_bounds = tuple(self._validate_box(e) for e in self.elements)
            self._check_cubical_conformity()

    def _validate_box(self, elem):
        n = self.n
        corners = [self.vertices[i] for i in elem]
        lo = corners[0]
        hi = corners[-1]
        if any(l >= h for l, h in zip(lo, hi)):
            raise DegenerateElementError(f"element {elem} has empty extent")
        for pos, c in enumerate(corners):
            want = tuple(hi[ax] if (pos >> ax) & 1 else lo[ax] for ax in range(n))
            if c != want:
                raise MeshError(
                    f"element {elem} corners are not in binary order for an "
                    "axis-aligned box")
        return tuple(zip(lo, hi))

    def _check_simplicial_conformity(self):
        for a, b in combinations(range(len(self.elements)), 2):
            ea, eb = self.elements[a], self.elements[b]
            shared = sorted(set(ea) & set(eb))
            if set(ea) == set(eb):
                raise NonconformingMeshError(
                    f"elements {a} and {b} have identical vertices")
            for pt in _simplex_intersection_vertices(
                    [self.vertices[i] for i in ea],
                    [self.vertices[i] for i in eb]):
                if not shared or not _in_subsimplex(
                        pt, [self.vertices[i] for i in shared]):
                    raise NonconformingMeshError(
                        f"elements {a} and {b} meet outside a common face")

    def _check_cubical_conformity(self):
        for a, b in combinations(range(len(self.elements)), 2):
            ba, bb = self._box_bounds[a], self._box_bounds[b]
            inter = [(max(l1, l2), min(h1, h2))
                     for (l1, h1), (l2, h2) in zip(ba, bb)]
            if any(lo > hi for lo, hi in inter):
                continue  # disjoint
            degenerate_axes = 0
            for (lo, hi), (l1, h1), (l2, h2) in zip(inter, ba, bb):
                if lo == hi:
                    degenerate_axes += 1
                    if lo not in (l1, h1) or lo not in (l2, h2):
                        raise NonconformingMeshError(
                            f"elements {a} and {b} touch at a hanging point")
                else:
                    if (lo, hi) != (l1, h1) or (lo, hi) != (l2, h2):
                        raise NonconformingMeshError(
                            f"elements {a} and {b} share a partial face")
            if degenerate_axes == 0:
                raise NonconformingMeshError(
                    f"elements {a} and {b} have overlapping interiors")

    # -- geometry --------------------------------------------------------

    def element_chart(self, e: int) -> AffineEmbedding:
        """Affine chart from the reference element onto element e."""
        if self._element_charts is None:
            self._element_charts = {}
        got = self._element_charts.get(e)
        if got is None:
            elem = self.elements[e]
            if self.kind == "simplicial":
                got = AffineEmbedding.from_simplex([self.vertices[i] for i in elem])
            else:
                got = AffineEmbedding.from_box(self._box_bounds[e])
            self._element_charts[e] = got
        return got

    # -- face enumeration --------------------------------------------------

    def faces(self) -> tuple[MeshFace, ...]:
        if self._faces is None:
            table: dict[tuple, list] = {}
            if self.kind == "simplicial":
                for ei, elem in enumerate(self.elements):
                    for d in range(self.n + 1):
                        for subset in combinations(sorted(elem), d + 1):
                            psi = self._simplex_face_psi(elem, subset)
                            table.setdefault(subset, []).append((ei, psi))
            else:
                for ei, elem in enumerate(self.elements):
                    for d in range(self.n + 1):
                        for axes in combinations(range(1, self.n + 1), d):
                            fixed = [i for i in range(1, self.n + 1)
                                     if i not in axes]
                            for bits in product((0, 1), repeat=self.n - d):
                                ids, psi = self._box_face(elem, axes,
                                                          dict(zip(fixed, bits)))
                                table.setdefault(ids, []).append((ei, psi))
            faces = []
            for ids in sorted(table, key=lambda t: (len(t), t)):
                dim = (len(ids) - 1 if self.kind == "simplicial"
                       else len(ids).bit_length() - 1)
                adjacent = tuple(sorted(table[ids], key=lambda p: p[0]))
                faces.append(MeshFace(dim, ids, adjacent, len(faces)))
            self._faces = tuple(faces)
        return self._faces

    def _simplex_face_psi(self, elem, subset) -> AffineEmbedding:
        # map the standard face simplex onto the reference-element face,
        # following the sorted global vertex order of the mesh face
        points = [reference_vertex(self.n, elem.index(g)) for g in subset]
        return AffineEmbedding.from_simplex(points)

    def _box_face(self, elem, axes, fixed_bits) -> tuple[tuple, AffineEmbedding]:
        n = self.n
        ids = []
        for pos, vid in enumerate(elem):
            ok = True
            for ax, bit in fixed_bits.items():
                if (pos >> (ax - 1)) & 1 != bit:
                    ok = False
                    break
            if ok:
                ids.append(vid)
        d = len(axes)
        rows, offset = [], []
        for axis in range(1, n + 1):
            if axis in axes:
                pos = axes.index(axis)
                rows.append(tuple(Fraction(int(j == pos)) for j in range(d)))
                offset.append(Fraction(0))
            else:
                rows.append((Fraction(0),) * d)
                offset.append(Fraction(fixed_bits[axis]))
        return tuple(sorted(ids)), AffineEmbedding(tuple(rows), tuple(offset))

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "vertices": [[rational_to_string(c) for c in v]
                         for v in self.vertices],
            "elements": [list(e) for e in self.elements],
        }


def read_mesh(source) -> Mesh:
    """Build a validated mesh from a dict, a JSON string, or a file path."""
    if isinstance(source, Mesh):
        return source
    if isinstance(source, dict):
        doc = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text, "r", encoding="utf-8") as handle:
                doc = json.load(handle)
    try:
        return Mesh(doc["kind"], int(doc["n"]),
                    [[Fraction(c) for c in v] for v in doc["vertices"]],
                    doc["elements"])
    except KeyError as exc:
        raise MeshError(f"mesh document is missing key {exc}") from exc


# -- exact conformity helpers ------------------------------------------------


def _affine_parts(poly):
    """(gradient, constant) of an affine polynomial."""
    n = poly.n
    grad = [Fraction(0)] * n
    const = Fraction(0)
    for alpha, c in poly.terms.items():
        deg = sum(alpha)
        if deg == 0:
            const = c
        elif deg == 1:
            grad[alpha.index(1)] = c
        else:
            raise ValueError("polynomial is not affine")
    return grad, const


def _simplex_intersection_vertices(verts_a, verts_b):
    """Vertices of the intersection polytope of two simplices.

    Brute force over n-subsets of the combined barycentric hyperplanes;
    each nonsingular subset contributes its solution when it satisfies all
    the halfspace constraints.
    """
    n = len(verts_a[0])
    planes = []
    for verts in (verts_a, verts_b):
        for lam in barycentric(verts).lambdas:
            planes.append(_affine_parts(lam))
    seen = set()
    out = []
    for subset in combinations(range(len(planes)), n):
        rows = [planes[i][0] for i in subset]
        rhs = [-planes[i][1] for i in subset]
        try:
            x = linalg.solve([list(r) for r in rows], rhs)
        except linalg.SingularMatrixError:
            continue
        point = tuple(x)
        if point in seen:
            continue
        seen.add(point)
        if all(sum(g * xi for g, xi in zip(grad, point)) + c >= 0
               for grad, c in planes):
            out.append(point)
    return out


def _in_subsimplex(point, verts) -> bool:
    """Membership of a point in the convex hull of affinely independent verts."""
    rows = [[Fraction(1)] * len(verts)]
    rhs = [Fraction(1)]
    for i in range(len(point)):
        rows.append([v[i] for v in verts])
        rhs.append(Fraction(point[i]))
    reduced, pivots = linalg.rref([row + [b] for row, b in zip(rows, rhs)])
    ncols = len(verts)
    if ncols in pivots:
        return False  # inconsistent system: point outside the affine hull
    mu = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        mu[c] = reduced[r][ncols]
    return all(m >= 0 for m in mu)


# -- global spaces -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GlobalDof:
    index: int
    face: MeshFace
    weight: PolyForm


class GlobalSpace:
    """A finite element space assembled from per-face degrees of freedom."""

    def __init__(self, mesh: Mesh, family: str, r: int, k: int):
        if family in spaces.SIMPLEX_FAMILIES and mesh.kind != "simplicial":
            raise MeshError(f"family {family} needs a simplicial mesh")
        if family in spaces.BOX_FAMILIES and mesh.kind != "cubical":
            raise MeshError(f"family {family} needs a cubical mesh")
        self.mesh = mesh
        self.family = family
        self.r = r
        self.k = k
        self.spec = spaces.make_spec(family, mesh.n, r, k)
        self.basis = spaces.basis_for(self.spec)
        self.dofs: list[GlobalDof] = []
        element_dofs: list[list] = [[] for _ in mesh.elements]
        for face in mesh.faces():
            weights = weight_basis(family, r, k, face.dim, mesh.element_kind)
            for q in weights:
                dof = GlobalDof(len(self.dofs), face, q)
                self.dofs.append(dof)
                for ei, psi in face.adjacent:
                    element_dofs[ei].append((dof, psi))
        self.element_dofs = [tuple(lst) for lst in element_dofs]
        self._lu: dict[int, linalg.LUFactor] = {}

    @property
    def dimension(self) -> int:
        return len(self.dofs)

    def face_dof_count(self) -> dict:
        counts: dict[int, int] = {}
        for dof in self.dofs:
            counts[dof.face.dim] = counts.get(dof.face.dim, 0) + 1
        return counts

    # -- functional evaluation ------------------------------------------

    def _local_value(self, piece: PolyForm, psi: AffineEmbedding,
                     weight: PolyForm, dim: int) -> Fraction:
        w = wedge(pullback(piece, psi), weight)
        if dim == 0:
            return w.component(()).evaluate(())
        if self.mesh.element_kind == "simplex":
            return integrate_std_simplex(w)
        return integrate_unit_box(w)

    def dof_values(self, pieces: dict) -> list[Fraction]:
        """Global DOF values of a piecewise form, taken from the first
        adjacent element of each face."""
        out = []
        for dof in self.dofs:
            ei, psi = dof.face.adjacent[0]
            out.append(self._local_value(pieces[ei], psi, dof.weight,
                                         dof.face.dim))
        return out

    def _integrate_face(self, w: PolyForm, dim: int) -> Fraction:
        if dim == 0:
            return w.component(()).evaluate(())
        if self.mesh.element_kind == "simplex":
            return integrate_std_simplex(w)
        return integrate_unit_box(w)

    def _element_matrix(self, ei: int) -> linalg.LUFactor:
        got = self._lu.get(ei)
        if got is None:
            rows = []
            trace_cache: dict[int, list] = {}
            for dof, psi in self.element_dofs[ei]:
                traces = trace_cache.get(id(psi))
                if traces is None:
                    traces = [pullback(b, psi) for b in self.basis.forms]
                    trace_cache[id(psi)] = traces
                rows.append([self._integrate_face(wedge(tr, dof.weight),
                                                  dof.face.dim)
                             for tr in traces])
            got = linalg.LUFactor(rows)
            self._lu[ei] = got
        return got

    def as_pieces(self, u) -> dict:
        """Normalize input to reference-coordinate pieces per element."""
        if isinstance(u, PolyForm):
            return {ei: pullback(u, self.mesh.element_chart(ei))
                    for ei in range(len(self.mesh.elements))}
        return dict(u)

    def project(self, u) -> dict:
        """DOF interpolation onto the space; exact on per-element polynomials."""
        pieces = self.as_pieces(u)
        values = self.dof_values(pieces)
        out = {}
        for ei in range(len(self.mesh.elements)):
            rhs = [values[dof.index] for dof, _ in self.element_dofs[ei]]
            coeffs = self._element_matrix(ei).solve(rhs)
            piece = PolyForm.zero(self.mesh.n, self.k)
            for c, b in zip(coeffs, self.basis.forms):
                if c:
                    piece = piece + c * b
            out[ei] = piece
        return out

    def global_basis_function(self, index: int) -> dict:
        """The piecewise form with DOF `index` equal to one, others zero."""
        out = {}
        for ei in range(len(self.mesh.elements)):
            rhs = [Fraction(int(dof.index == index))
                   for dof, _ in self.element_dofs[ei]]
            coeffs = self._element_matrix(ei).solve(rhs)
            piece = PolyForm.zero(self.mesh.n, self.k)
            for c, b in zip(coeffs, self.basis.forms):
                if c:
                    piece = piece + c * b
            out[ei] = piece
        return out


def assemble(mesh: Mesh, family: str, r: int, k: int) -> GlobalSpace:
    return GlobalSpace(mesh, family, r, k)


def face_sum_dimension(mesh: Mesh, family: str, r: int, k: int) -> int:
    """Sum over mesh faces of the per-face DOF counts."""
    total = 0
    for face in mesh.faces():
        total += len(weight_basis(family, r, k, face.dim, mesh.element_kind))
    return total


def assembled_dimension_by_rank(space: GlobalSpace) -> int:
    """Dimension of the matching-constraint solution space, computed by rank.

    Variables are per-element basis coefficients; each shared-face DOF
    contributes equality constraints between its adjacent elements.  This
    recomputes the assembled dimension without assuming the face-sum
    formula.
    """
    nel = len(space.mesh.elements)
    dimv = space.basis.dim
    ech = linalg.Echelon()
    trace_cache: dict[int, list] = {}

    def traces(psi):
        got = trace_cache.get(id(psi))
        if got is None:
            got = [pullback(b, psi) for b in space.basis.forms]
            trace_cache[id(psi)] = got
        return got

    for dof in space.dofs:
        adj = dof.face.adjacent
        if len(adj) < 2:
            continue
        e0, psi0 = adj[0]
        base = [space._integrate_face(wedge(tr, dof.weight), dof.face.dim)
                for tr in traces(psi0)]
        for ei, psi in adj[1:]:
            other = [space._integrate_face(wedge(tr, dof.weight), dof.face.dim)
                     for tr in traces(psi)]
            row = {}
            for j in range(dimv):
                if base[j]:
                    row[(e0, j)] = base[j]
                if other[j]:
                    row[(ei, j)] = row.get((ei, j), Fraction(0)) - other[j]
            row = {key: v for key, v in row.items() if v}
            if row:
                ech.add_fractions(row)
    return nel * dimv - ech.rank


def continuity_check(space: GlobalSpace, pieces: dict) -> bool:
    """Traces agree, as forms, on every shared face."""
    for face in space.mesh.faces():
        if len(face.adjacent) < 2:
            continue
        e0, psi0 = face.adjacent[0]
        ref = pullback(pieces[e0], psi0)
        for ei, psi in face.adjacent[1:]:
            if pullback(pieces[ei], psi) != ref:
                return False
    return True


def pieces_equal(a: dict, b: dict) -> bool:
    return set(a) == set(b) and all(a[e] == b[e] for e in a)


def pieces_d(pieces: dict) -> dict:
    return {e: exterior_derivative(p) for e, p in pieces.items()}


def pieces_to_json_dict(pieces: dict) -> dict:
    return {str(e): form_to_string(p) for e, p in sorted(pieces.items())}


def check_commuting(mesh: Mesh, family: str, r: int, u) -> "Certificate":
    """d(projection at level k) equals projection at level k+1 of du.

    `r` is the polynomial degree at the level of u; the next level keeps
    the degree for the constant-degree families and drops it by one for
    the decreasing-degree families.
    """
    from feforms.complexes import Certificate

    k = u.k if isinstance(u, PolyForm) else next(iter(u.values())).k
    r_next = r if family in ("Pminus", "Qminus") else r - 1
    rmin = 0 if family == "P" else 1
    if k + 1 > mesh.n or r_next < max(rmin, 1):
        raise MeshError("the next chain level does not exist for these parameters")
    space_k = assemble(mesh, family, r, k)
    space_k1 = assemble(mesh, family, r_next, k + 1)
    pieces = space_k.as_pieces(u)
    left = pieces_d(space_k.project(pieces))
    right = space_k1.project(pieces_d(pieces))
    ok = pieces_equal(left, right)
    witness = {"dim_k": space_k.dimension, "dim_k1": space_k1.dimension}
    if not ok:
        witness["left"] = pieces_to_json_dict(left)
        witness["right"] = pieces_to_json_dict(right)
    params = {"family": family, "r": r, "k": k,
              "input": form_to_string(u) if isinstance(u, PolyForm) else "piecewise"}
    return Certificate("commuting", params, "pass" if ok else "fail", witness)


# -- sample meshes -----------------------------------------------------------


def two_triangle_square() -> Mesh:
    return Mesh("simplicial", 2,
                [(0, 0), (1, 0), (0, 1), (1, 1)],
                [(0, 1, 2), (1, 3, 2)])


def crisscross_square() -> Mesh:
    return Mesh("simplicial", 2,
                [(0, 0), (1, 0), (1, 1), (0, 1),
                 (Fraction(1, 2), Fraction(1, 2))],
                [(0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)])


def two_tetrahedra() -> Mesh:
    return Mesh("simplicial", 3,
                [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
                [(0, 1, 2, 3), (1, 2, 3, 4)])


def two_boxes_2d() -> Mesh:
    return Mesh("cubical", 2,
                [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)],
                [(0, 1, 3, 4), (1, 2, 4, 5)])


def grid_boxes_2x2() -> Mesh:
    verts = [(x, y) for y in range(3) for x in range(3)]
    elems = []
    for y in range(2):
        for x in range(2):
            i = y * 3 + x
            elems.append((i, i + 1, i + 3, i + 4))
    return Mesh("cubical", 2, verts, elems)


def two_cubes_3d() -> Mesh:
    verts = [(x, y, z) for z in (0, 1) for y in (0, 1) for x in (0, 1, 2)]
    def vid(x, y, z):
        return z * 6 + y * 3 + x
    elems = []
    for x0 in (0, 1):
        elems.append(tuple(vid(x0 + dx, dy, dz)
                           for dz in (0, 1) for dy in (0, 1) for dx in (0, 1)))
    return Mesh("cubical", 3, verts, elems)


SAMPLE_MESHES = {
    "two_triangle_square": two_triangle_square,
    "crisscross_square": crisscross_square,
    "two_tetrahedra": two_tetrahedra,
    "two_boxes_2d": two_boxes_2d,
    "grid_boxes_2x2": grid_boxes_2x2,
    "two_cubes_3d": two_cubes_3d,
}
