"""Polynomial differential forms and their exact calculus.

A k-form u = sum_sigma a_sigma dx^sigma is stored componentwise: increasing
index tuples sigma map to Polynomial coefficients a_sigma.  Everything here
(wedge, exterior derivative, contraction with the position field, affine
pullback, integration over simplices and boxes) stays inside rational
arithmetic.

Degree bookkeeping: forms of degree k > n are identically zero and
normalize to the empty component map, so chain-complex code needs no
special cases at the ends.  Contraction of a 0-form returns the zero
0-form for the same reason.  Zero forms compare equal regardless of their
nominal degree and may be added to a form of any degree.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from feforms.combinatorics import check_sigma, enumerate_sigma, merge
from feforms.polynomial import (
    DegenerateSimplexError,
    NEG_INF,
    Polynomial,
    monomial_string,
    rational_from_string,
    substitute,
)


class PolyForm:
    """Immutable polynomial differential k-form on R^n."""

    __slots__ = ("n", "k", "components")

    def __init__(self, n: int, k: int, components: dict | None = None):
        if n < 0 or k < 0:
            raise ValueError(f"need n >= 0 and k >= 0, got n={n}, k={k}")
        clean: dict[tuple, Polynomial] = {}
        if k <= n:
            for sigma, a in (components or {}).items():
                sigma = check_sigma(sigma, n)
                if len(sigma) != k:
                    raise ValueError(f"alternator {sigma!r} has length != {k}")
                if not isinstance(a, Polynomial):
                    a = Polynomial.constant(n, a)
                if a.n != n:
                    raise ValueError("coefficient dimension mismatch")
                if not a.is_zero:
                    clean[sigma] = a
        self.n = n
        self.k = k
        self.components = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int, k: int) -> "PolyForm":
        return cls(n, k, {})

    @classmethod
    def monomial(cls, n: int, alpha, sigma, coeff=1) -> "PolyForm":
        return cls(n, len(sigma), {tuple(sigma): Polynomial.monomial(n, alpha, coeff)})

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "PolyForm":
        return cls(p.n, 0, {(): p})

    @classmethod
    def dx(cls, n: int, i: int) -> "PolyForm":
        return cls(n, 1, {(i,): Polynomial.constant(n, 1)})

    @classmethod
    def volume(cls, n: int) -> "PolyForm":
        """The constant top form dx^1 ^ ... ^ dx^n."""
        return cls(n, n, {tuple(range(1, n + 1)): Polynomial.constant(n, 1)})

    # -- access -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.components

    def component(self, sigma) -> Polynomial:
        return self.components.get(tuple(sigma), Polynomial.zero(self.n))

    def items(self):
        """Components as (sigma, Polynomial) pairs in lexicographic order."""
        return [(s, self.components[s]) for s in sorted(self.components)]

    def degree(self):
        """Largest coefficient degree, NEG_INF for the zero form."""
        if not self.components:
            return NEG_INF
        return max(a.degree() for a in self.components.values())

    def coefficient_dict(self) -> dict:
        """Flat {(sigma, alpha): Fraction} view used by rank computations."""
        out = {}
        for sigma, a in self.components.items():
            for alpha, c in a.terms.items():
                out[(sigma, alpha)] = c
        return out

    # -- linear structure -------------------------------------------------

    def _check_add(self, other: "PolyForm"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")
        if self.k != other.k and not (self.is_zero or other.is_zero):
            raise ValueError(f"form degree mismatch: {self.k} vs {other.k}")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check_add(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        comps = dict(self.components)
        for s, a in other.components.items():
            b = comps.get(s)
            comps[s] = a if b is None else b + a
        return PolyForm(self.n, self.k, comps)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.n, self.k, {s: -a for s, a in self.components.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __mul__(self, other) -> "PolyForm":
        """Multiply by a scalar or a Polynomial, componentwise."""
        if isinstance(other, PolyForm):
            raise TypeError("use wedge() for products of forms")
        return PolyForm(self.n, self.k,
                        {s: a * other for s, a in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return (self.n == other.n and self.k == other.k
                and self.components == other.components)

    __hash__ = None

    def __repr__(self):
        return f"PolyForm({self.n}, {self.k}, {form_to_string(self)!r})"

    def wedge(self, other: "PolyForm") -> "PolyForm":
        return wedge(self, other)


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    """Exterior product, computed componentwise through merge signs."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    k = a.k + b.k
    comps: dict = {}
    for sa, pa in a.components.items():
        for sb, pb in b.components.items():
            sign, merged = merge(sa, sb)
            if sign == 0:
                continue
            term = pa * pb
            if sign < 0:
                term = -term
            old = comps.get(merged)
            comps[merged] = term if old is None else old + term
    return PolyForm(a.n, k, comps)


def exterior_derivative(u: PolyForm) -> PolyForm:
    """d(a dx^sigma) = sum_j (da/dx^j) dx^j ^ dx^sigma."""
    n = u.n
    comps: dict = {}
    for sigma, a in u.components.items():
        inside = set(sigma)
        for j in range(1, n + 1):
            if j in inside:
                continue
            da = a.partial(j)
            if da.is_zero:
                continue
            sign, merged = merge((j,), sigma)
            term = da if sign > 0 else -da
            old = comps.get(merged)
            comps[merged] = term if old is None else old + term
    return PolyForm(n, u.k + 1, comps)


def koszul(u: PolyForm) -> PolyForm:
    """Contraction with the position field x (based at the origin).

    Takes k-forms to (k-1)-forms, raising coefficient degree by one:
    a dx^sigma maps to sum_i (-1)^(i-1) a x^(sigma_i) dx^(sigma minus
    sigma_i).  On 0-forms the contraction is zero.
    """
    if u.k == 0:
        return PolyForm.zero(u.n, 0)
    comps: dict = {}
    for sigma, a in u.components.items():
        for pos, s in enumerate(sigma):
            term = a * Polynomial.variable(u.n, s)
            if pos % 2:
                term = -term
            rest = sigma[:pos] + sigma[pos + 1:]
            old = comps.get(rest)
            comps[rest] = term if old is None else old + term
    return PolyForm(u.n, u.k - 1, comps)


def ldeg(alpha, sigma) -> int:
    """Linear degree of the monomial form x^alpha dx^sigma.

    Counts variables that appear to the first power in the coefficient and
    do not occur in the alternator.
    """
    inside = set(sigma)
    return sum(1 for i, e in enumerate(alpha) if e == 1 and (i + 1) not in inside)


# -- affine maps and pullback ---------------------------------------------


class AffineEmbedding:
    """Affine map t -> offset + matrix @ t from Q^m into Q^n.

    Caches substitution powers and alternator minors, so reusing one
    embedding across many pullbacks (as the degree-of-freedom machinery
    does) stays cheap.
    """

    __slots__ = ("source_dim", "target_dim", "matrix", "offset",
                 "_powers", "_minors", "_images")

    def __init__(self, matrix, offset):
        matrix = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        offset = tuple(Fraction(v) for v in offset)
        n = len(offset)
        if len(matrix) != n:
            raise ValueError("matrix row count does not match offset length")
        m = len(matrix[0]) if matrix else 0
        if any(len(row) != m for row in matrix):
            raise ValueError("ragged matrix")
        self.source_dim = m
        self.target_dim = n
        self.matrix = matrix
        self.offset = offset
        self._powers: dict = {}
        self._minors: dict = {}
        self._images = None

    @classmethod
    def identity(cls, n: int) -> "AffineEmbedding":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n))
                         for i in range(n)), (Fraction(0),) * n)

    @classmethod
    def translation(cls, shift) -> "AffineEmbedding":
        n = len(shift)
        e = cls.identity(n)
        return cls(e.matrix, tuple(Fraction(v) for v in shift))

    @classmethod
    def from_simplex(cls, vertices) -> "AffineEmbedding":
        """Chart of the standard simplex onto conv(vertices), vertex order kept."""
        verts = [tuple(Fraction(c) for c in v) for v in vertices]
        d = len(verts) - 1
        n = len(verts[0]) if verts else 0
        if any(len(v) != n for v in verts):
            raise ValueError("ragged vertex list")
        matrix = tuple(tuple(verts[j + 1][i] - verts[0][i] for j in range(d))
                       for i in range(n))
        return cls(matrix, verts[0])

    @classmethod
    def from_box(cls, bounds) -> "AffineEmbedding":
        """Chart of the unit box onto the axis-aligned box with given bounds."""
        bounds = [(Fraction(lo), Fraction(hi)) for lo, hi in bounds]
        n = len(bounds)
        matrix = tuple(tuple((b[1] - b[0]) if i == j else Fraction(0)
                             for j, b in enumerate(bounds)) for i in range(n))
        return cls(matrix, tuple(b[0] for b in bounds))

    def apply(self, t):
        t = [Fraction(v) for v in t]
        if len(t) != self.source_dim:
            raise ValueError("point dimension mismatch")
        return tuple(c + sum(row[j] * t[j] for j in range(self.source_dim))
                     for row, c in zip(self.matrix, self.offset))

    def compose(self, inner: "AffineEmbedding") -> "AffineEmbedding":
        """self after inner: (self . inner)(t) = self(inner(t))."""
        if inner.target_dim != self.source_dim:
            raise ValueError("composition shape mismatch")
        m = inner.source_dim
        matrix = tuple(
            tuple(sum(self.matrix[i][l] * inner.matrix[l][j]
                      for l in range(self.source_dim)) for j in range(m))
            for i in range(self.target_dim))
        offset = tuple(
            self.offset[i] + sum(self.matrix[i][l] * inner.offset[l]
                                 for l in range(self.source_dim))
            for i in range(self.target_dim))
        return AffineEmbedding(matrix, offset)

    def substitute(self, p: Polynomial) -> Polynomial:
        """Exact composition p(offset + matrix @ t), with shared power cache."""
        if p.n != self.target_dim:
            raise ValueError("polynomial dimension mismatch")
        if self._images is None:
            from feforms.polynomial import affine_polynomial
            self._images = [affine_polynomial(self.source_dim, row, c)
                            for row, c in zip(self.matrix, self.offset)]
        return substitute(p, self._images, self.source_dim, self._powers)

    def minor(self, sigma, tau) -> Fraction:
        """det of the submatrix with rows sigma and columns tau (1-based)."""
        key = (sigma, tau)
        got = self._minors.get(key)
        if got is None:
            got = _det([[self.matrix[s - 1][t - 1] for t in tau] for s in sigma])
            self._minors[key] = got
        return got

    def jacobian_det(self) -> Fraction:
        if self.source_dim != self.target_dim:
            raise ValueError("jacobian determinant needs a square map")
        d = self.source_dim
        full = tuple(range(1, d + 1))
        return self.minor(full, full)


def _det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    if n == 2:
        return Fraction(rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0])
    total = Fraction(0)
    sign = 1
    for j in range(n):
        if rows[0][j]:
            sub = [[row[l] for l in range(n) if l != j] for row in rows[1:]]
            total += sign * rows[0][j] * _det(sub)
        sign = -sign
    return total


def pullback(u: PolyForm, f: AffineEmbedding) -> PolyForm:
    """Pullback of a k-form on the target through the affine map f.

    Coefficients are composed with f; each alternator dx^sigma turns into
    the wedge of the pulled-back coordinate differentials, whose dt^tau
    coefficient is the (sigma, tau) minor of the linear part.
    """
    if u.n != f.target_dim:
        raise ValueError(f"form lives on R^{u.n}, map targets R^{f.target_dim}")
    m = f.source_dim
    k = u.k
    if k > m:
        return PolyForm.zero(m, k)
    taus = enumerate_sigma(k, m)
    comps: dict = {}
    for sigma, a in u.components.items():
        a_t = f.substitute(a)
        if a_t.is_zero:
            continue
        for tau in taus:
            det = f.minor(sigma, tau)
            if det:
                term = a_t * det
                old = comps.get(tau)
                comps[tau] = term if old is None else old + term
    return PolyForm(m, k, comps)


def trace_to_face(u: PolyForm, face: AffineEmbedding) -> PolyForm:
    """Trace of u on an embedded face: the pullback along the face chart."""
    return pullback(u, face)


def translate(u: PolyForm, shift) -> PolyForm:
    """Substitute x -> x + shift (the pullback through that translation)."""
    return pullback(u, AffineEmbedding.translation(shift))


# -- exact integration -----------------------------------------------------


@lru_cache(maxsize=None)
def _std_simplex_monomial_integral(alpha) -> Fraction:
    # barycentric monomial rule with exponents (0, alpha); the volume
    # factor 1/d! of the standard simplex is already folded in
    d = len(alpha)
    num = 1
    for e in alpha:
        num *= factorial(e)
    return Fraction(num, factorial(sum(alpha) + d))


def barycentric_monomial_integral(exponents) -> Fraction:
    """Integral over the standard d-simplex of prod_i lambda_i^(a_i).

    `exponents` lists the d+1 barycentric exponents (a_0, ..., a_d); the
    closed form is d! vol (prod a_i!) / (|a| + d)! with vol = 1/d!.
    """
    d = len(exponents) - 1
    num = 1
    for e in exponents:
        num *= factorial(e)
    return Fraction(num, factorial(sum(exponents) + d))


def integrate_std_simplex(u: PolyForm) -> Fraction:
    """Integral of a top-degree form over the standard simplex in R^d."""
    d = u.n
    if u.k != d:
        raise ValueError(f"need a {d}-form on R^{d}, got a {u.k}-form")
    if d == 0:
        return u.component(()).evaluate(())
    top = u.component(tuple(range(1, d + 1)))
    total = Fraction(0)
    for alpha, c in top.terms.items():
        total += c * _std_simplex_monomial_integral(alpha)
    return total


def integrate_simplex(u: PolyForm, vertices) -> Fraction:
    """Integral of a top form over the simplex with the given ordered vertices.

    The orientation is that of the vertex order: swapping two vertices
    flips the sign.  Raises DegenerateSimplexError on flat input.
    """
    verts = [tuple(Fraction(c) for c in v) for v in vertices]
    d = len(verts) - 1
    if u.k != d or u.n != d:
        raise ValueError(f"need a {d}-form on R^{d} for a {d}-simplex")
    if d == 0:
        return u.component(()).evaluate(())
    chart = AffineEmbedding.from_simplex(verts)
    if chart.jacobian_det() == 0:
        raise DegenerateSimplexError("simplex vertices are affinely dependent")
    return integrate_std_simplex(pullback(u, chart))


def integrate_box(u: PolyForm, bounds) -> Fraction:
    """Integral of a top form over an axis-aligned box given as (lo, hi) pairs."""
    bounds = [(Fraction(lo), Fraction(hi)) for lo, hi in bounds]
    n = len(bounds)
    if u.k != n or u.n != n:
        raise ValueError(f"need an {n}-form on R^{n} for an {n}-box")
    if any(lo >= hi for lo, hi in bounds):
        raise ValueError("box bounds must satisfy lo < hi on every axis")
    if n == 0:
        return u.component(()).evaluate(())
    top = u.component(tuple(range(1, n + 1)))
    total = Fraction(0)
    for alpha, c in top.terms.items():
        v = c
        for (lo, hi), e in zip(bounds, alpha):
            v *= (hi ** (e + 1) - lo ** (e + 1)) / (e + 1)
        total += v
    return total


def integrate_unit_box(u: PolyForm) -> Fraction:
    return integrate_box(u, [(0, 1)] * u.n)


def std_simplex_vertices(d: int):
    """Vertices (0, e_1, ..., e_d) of the standard simplex in Q^d."""
    zero = tuple(Fraction(0) for _ in range(d))
    verts = [zero]
    for i in range(d):
        verts.append(tuple(Fraction(int(j == i)) for j in range(d)))
    return verts


def std_simplex_facets(d: int):
    """(sign, chart) per boundary facet of the standard d-simplex.

    Facet i omits vertex i and carries the sign (-1)^i, so that the signed
    facet integrals of a trace add up to the integral of the derivative.
    """
    verts = std_simplex_vertices(d)
    out = []
    for i in range(d + 1):
        sub = [v for j, v in enumerate(verts) if j != i]
        sign = -1 if i % 2 else 1
        out.append((sign, AffineEmbedding.from_simplex(sub)))
    return out


def unit_box_facets(n: int):
    """(sign, chart) per facet of the unit box, outward-consistent."""
    out = []
    for i in range(1, n + 1):
        for side in (0, 1):
            rows = []
            offset = []
            for axis in range(1, n + 1):
                if axis == i:
                    rows.append(tuple(Fraction(0) for _ in range(n - 1)))
                    offset.append(Fraction(side))
                else:
                    pos = axis - 1 if axis < i else axis - 2
                    rows.append(tuple(Fraction(int(j == pos))
                                      for j in range(n - 1)))
                    offset.append(Fraction(0))
            sign = (1 if side else -1) * (-1 if (i - 1) % 2 else 1)
            out.append((sign, AffineEmbedding(tuple(rows), tuple(offset))))
    return out


# -- canonical text rendering ----------------------------------------------


def form_to_string(u: PolyForm) -> str:
    """Render as "coef x-part dx-part" terms in lexicographic (sigma, alpha) order."""
    if u.is_zero:
        return "0"
    parts = []
    for sigma, poly in u.items():
        dx = "^".join(f"dx{s}" for s in sigma)
        for alpha in sorted(poly.terms):
            term = monomial_string(poly.terms[alpha], alpha)
            parts.append(f"{term} {dx}".strip())
    return " + ".join(parts)


def form_from_string(text: str, n: int, k: int) -> PolyForm:
    """Parse the canonical rendering back into a form on R^n of degree k."""
    text = text.strip()
    if text == "0" or not text:
        return PolyForm.zero(n, k)
    total = PolyForm.zero(n, k)
    for term in text.split(" + "):
        toks = term.split()
        coeff = rational_from_string(toks[0])
        alpha = [0] * n
        sigma: tuple = ()
        for tok in toks[1:]:
            if tok.startswith("dx"):
                sigma = tuple(int(p[2:]) for p in tok.split("^"))
            elif tok.startswith("x"):
                if "^" in tok:
                    var, exp = tok.split("^")
                    alpha[int(var[1:]) - 1] = int(exp)
                else:
                    alpha[int(tok[1:]) - 1] = 1
            else:
                raise ValueError(f"cannot parse token {tok!r}")
        if len(sigma) != k:
            raise ValueError(f"term {term!r} has alternator length != {k}")
        total = total + PolyForm.monomial(n, tuple(alpha), sigma, coeff)
    return total
