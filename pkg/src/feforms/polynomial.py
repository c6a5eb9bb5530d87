"""Exact multivariate polynomials over the rationals.

A polynomial in the Cartesian variables x1..xn is a dict mapping length-n
exponent tuples to Fraction coefficients; zero coefficients are never
stored and the zero polynomial is the empty dict.  The degree of the zero
polynomial is the sentinel NEG_INF, so predicates like ``p.degree() <= r``
accept zero for every r.

Rationals serialize as canonical reduced "p/q" strings ("0/1" for zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from feforms import linalg
from feforms.combinatorics import MultiIndex

NEG_INF = float("-inf")

Point = tuple  # rational coordinates


class DegenerateSimplexError(ValueError):
    pass


def rational_to_string(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_string(s: str) -> Fraction:
    return Fraction(s.strip())


class Polynomial:
    """Immutable exact polynomial; do not mutate `terms` after construction."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        if n < 0:
            raise ValueError(f"ambient dimension must be nonnegative, got {n}")
        clean: dict[MultiIndex, Fraction] = {}
        for alpha, c in (terms or {}).items():
            if len(alpha) != n or any(e < 0 for e in alpha):
                raise ValueError(f"bad exponent tuple {alpha!r} for n={n}")
            c = Fraction(c)
            if c:
                clean[tuple(alpha)] = c
        self.n = n
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, {})

    @classmethod
    def constant(cls, n: int, value) -> "Polynomial":
        return cls(n, {(0,) * n: Fraction(value)})

    @classmethod
    def variable(cls, n: int, j: int) -> "Polynomial":
        """The coordinate x^j, 1-based."""
        if not 1 <= j <= n:
            raise ValueError(f"variable index {j} out of range 1..{n}")
        alpha = tuple(1 if i == j - 1 else 0 for i in range(n))
        return cls(n, {alpha: Fraction(1)})

    @classmethod
    def monomial(cls, n: int, alpha, coeff=1) -> "Polynomial":
        return cls(n, {tuple(alpha): Fraction(coeff)})

    # -- ring operations ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Polynomial"):
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.n, other)
        self._check(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            s = terms.get(a, 0) + c
            if s:
                terms[a] = s
            else:
                terms.pop(a, None)
        return Polynomial(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if not c:
                return Polynomial.zero(self.n)
            return Polynomial(self.n, {a: c * v for a, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                s = out.get(key, 0) + ca * cb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.n == other.n
                and self.terms == other.terms)

    __hash__ = None

    def __repr__(self):
        return f"Polynomial({self.n}, {self.to_string()!r})"

    # -- calculus and structure ------------------------------------------

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(a) for a in self.terms)

    def partial(self, j: int) -> "Polynomial":
        """Exact partial derivative with respect to x^j, 1-based."""
        if not 1 <= j <= self.n:
            raise ValueError(f"variable index {j} out of range 1..{self.n}")
        i = j - 1
        out = {}
        for a, c in self.terms.items():
            if a[i]:
                b = a[:i] + (a[i] - 1,) + a[i + 1:]
                out[b] = out.get(b, 0) + c * a[i]
        return Polynomial(self.n, out)

    def antiderivative(self, j: int) -> "Polynomial":
        """Antiderivative in x^j with zero constant term."""
        if not 1 <= j <= self.n:
            raise ValueError(f"variable index {j} out of range 1..{self.n}")
        i = j - 1
        out = {}
        for a, c in self.terms.items():
            b = a[:i] + (a[i] + 1,) + a[i + 1:]
            out[b] = c / (a[i] + 1)
        return Polynomial(self.n, out)

    def homogeneous_part(self, r: int) -> "Polynomial":
        return Polynomial(self.n, {a: c for a, c in self.terms.items()
                                   if sum(a) == r})

    def evaluate(self, point) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, need {self.n}")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for a, c in self.terms.items():
            v = c
            for x, e in zip(pt, a):
                if e:
                    v *= x ** e
            total += v
        return total

    def compose_affine(self, matrix, offset) -> "Polynomial":
        """Exact substitution x = offset + matrix @ t.

        `matrix` has n rows of length m; the result lives in m variables.
        """
        if len(matrix) != self.n or len(offset) != self.n:
            raise ValueError("affine map shape does not match ambient dimension")
        m = len(matrix[0]) if self.n else 0
        images = [affine_polynomial(m, row, c) for row, c in zip(matrix, offset)]
        return substitute(self, images, m)

    def sdeg(self):
        """Superlinear degree: max over monomials, NEG_INF for zero."""
        if not self.terms:
            return NEG_INF
        return max(sdeg_exponents(a) for a in self.terms)

    def to_string(self, var: str = "x") -> str:
        if not self.terms:
            return "0/1"
        parts = []
        for a in sorted(self.terms):
            parts.append(monomial_string(self.terms[a], a, var=var))
        return " + ".join(parts)


def monomial_string(coeff, alpha, var: str = "x") -> str:
    toks = [rational_to_string(coeff)]
    for i, e in enumerate(alpha):
        if e == 1:
            toks.append(f"{var}{i + 1}")
        elif e > 1:
            toks.append(f"{var}{i + 1}^{e}")
    return " ".join(toks)


def sdeg_exponents(alpha) -> int:
    """Total degree ignoring variables that enter to the first power."""
    return sum(e for e in alpha if e != 1)


def affine_polynomial(m: int, coeffs, constant) -> Polynomial:
    """The affine polynomial constant + sum_j coeffs[j] * t_j in m variables."""
    p = Polynomial.constant(m, constant)
    for j, c in enumerate(coeffs):
        if c:
            p = p + Polynomial.monomial(
                m, tuple(1 if i == j else 0 for i in range(m)), c)
    return p


def substitute(p: Polynomial, images: list[Polynomial], m: int,
               power_cache: dict | None = None) -> Polynomial:
    """Substitute images[i] for x^(i+1) in p; all images live in m variables.

    `power_cache` maps (variable index, exponent) to cached powers; pass a
    shared dict to reuse work across many substitutions into the same map.
    """
    if power_cache is None:
        power_cache = {}

    def power(i: int, e: int) -> Polynomial:
        got = power_cache.get((i, e))
        if got is None:
            if e == 0:
                got = Polynomial.constant(m, 1)
            else:
                got = power(i, e - 1) * images[i]
            power_cache[(i, e)] = got
        return got

    total = Polynomial.zero(m)
    for alpha, c in p.terms.items():
        term = Polynomial.constant(m, c)
        for i, e in enumerate(alpha):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


@dataclass(frozen=True)
class BarycentricSystem:
    """The affine coordinates of a nondegenerate simplex.

    lambdas[i] is the affine polynomial with lambdas[i](v_j) = delta_ij;
    the lambdas sum to the constant 1.
    """
    vertices: tuple
    lambdas: tuple


def barycentric(vertices) -> BarycentricSystem:
    """Barycentric coordinate polynomials for n+1 points in Q^n."""
    verts = tuple(tuple(Fraction(c) for c in v) for v in vertices)
    if not verts:
        raise ValueError("no vertices given")
    n = len(verts[0])
    if len(verts) != n + 1 or any(len(v) != n for v in verts):
        raise ValueError(f"need {n + 1} points in Q^{n}")
    rows = [[Fraction(1), *v] for v in verts]
    try:
        lu = linalg.LUFactor(rows)
    except linalg.SingularMatrixError as exc:
        raise DegenerateSimplexError(
            "vertices are affinely dependent") from exc
    lams = []
    for i in range(n + 1):
        e = [Fraction(int(j == i)) for j in range(n + 1)]
        sol = lu.solve(e)
        lams.append(affine_polynomial(n, sol[1:], sol[0]))
    return BarycentricSystem(verts, tuple(lams))
