"""Bases for the polynomial differential form families on reference elements.

Public families (reference simplex conv{0, e_1, ..., e_n}, reference box
[0,1]^n):

  P       full k-forms with coefficients of degree <= r      (simplex)
  Pminus  trimmed family: P_(r-1) plus contractions of homogeneous
          degree-(r-1) (k+1)-forms                            (simplex)
  Qminus  tensor-product family: monomial forms with per-axis degree
          capped at r-1 on alternator axes and r elsewhere    (box)
  S       serendipity-type family: P_r + J_r + d J_(r+1)      (box)

plus the graded pieces used in the constructions: H (homogeneous forms),
Hrl (homogeneous forms of linear degree >= l) and J (sums of contractions
of the Hrl pieces).  A basis of a sum of spaces is produced by feeding the
generators in a fixed order to an exact echelon and keeping those that
enlarge the span; all bases are therefore rank-certified at construction.
Construction is memoized per spec and safe for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from feforms import linalg
from feforms.combinatorics import enumerate_sigma, multiindices, multiindices_exact
from feforms.forms import (
    PolyForm,
    exterior_derivative,
    form_to_string,
    koszul,
    ldeg,
)

PUBLIC_FAMILIES = ("P", "Pminus", "Qminus", "S")
_INTERNAL_FAMILIES = ("H", "Hrl", "J")
SIMPLEX_FAMILIES = ("P", "Pminus")
BOX_FAMILIES = ("Qminus", "S")


@dataclass(frozen=True)
class SpaceSpec:
    family: str
    n: int
    r: int
    k: int
    element: str
    l: int | None = None

    def __post_init__(self):
        if self.family not in PUBLIC_FAMILIES + _INTERNAL_FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.element not in ("simplex", "box"):
            raise ValueError(f"unknown element kind {self.element!r}")
        if self.family in SIMPLEX_FAMILIES and self.element != "simplex":
            raise ValueError(f"family {self.family} lives on simplices")
        if self.family in BOX_FAMILIES and self.element != "box":
            raise ValueError(f"family {self.family} lives on boxes")
        if self.n < 0 or not 0 <= self.k <= self.n:
            raise ValueError(f"need 0 <= k <= n, got k={self.k}, n={self.n}")
        rmin = 0 if self.family in ("P", "H", "Hrl") else 1
        if self.r < rmin:
            raise ValueError(f"family {self.family} needs r >= {rmin}, got {self.r}")

    def as_dict(self) -> dict:
        out = {"family": self.family, "n": self.n, "r": self.r,
               "k": self.k, "element": self.element}
        if self.l is not None:
            out["l"] = self.l
        return out


def make_spec(family: str, n: int, r: int, k: int, l: int | None = None) -> SpaceSpec:
    element = "box" if family in BOX_FAMILIES + ("J",) else "simplex"
    return SpaceSpec(family, n, r, k, element, l)


class SpanChecker:
    """Exact span membership tester over a growing set of forms."""

    def __init__(self, forms=()):
        self._ech = linalg.Echelon()
        for f in forms:
            self.add(f)

    @property
    def rank(self) -> int:
        return self._ech.rank

    def add(self, form: PolyForm) -> bool:
        if form.is_zero:
            return False
        return self._ech.add_fractions(form.coefficient_dict())

    def contains(self, form: PolyForm) -> bool:
        if form.is_zero:
            return True
        return self._ech.contains(form.coefficient_dict())


class SpaceBasis:
    """A rank-certified list of forms spanning one family member."""

    def __init__(self, spec: SpaceSpec, forms):
        self.spec = spec
        self.forms = tuple(forms)
        self._checker = None

    @property
    def dim(self) -> int:
        return len(self.forms)

    def checker(self) -> SpanChecker:
        if self._checker is None:
            chk = SpanChecker()
            for f in self.forms:
                if not chk.add(f):
                    raise RuntimeError(f"basis for {self.spec} is not independent")
            self._checker = chk
        return self._checker

    def contains(self, form: PolyForm) -> bool:
        if form.is_zero:
            return True
        if form.n != self.spec.n or form.k != self.spec.k:
            raise ValueError("form shape does not match the space")
        return self.checker().contains(form)

    def __repr__(self):
        return f"SpaceBasis({self.spec}, dim={self.dim})"


def select_independent(forms) -> list[PolyForm]:
    """Greedy maximal independent subset, scanned in the given order."""
    chk = SpanChecker()
    return [f for f in forms if chk.add(f)]


def span_rank(forms) -> int:
    chk = SpanChecker()
    for f in forms:
        chk.add(f)
    return chk.rank


def spans_equal(forms_a, forms_b) -> bool:
    forms_a, forms_b = list(forms_a), list(forms_b)
    ra = span_rank(forms_a)
    rb = span_rank(forms_b)
    return ra == rb == span_rank(forms_a + forms_b)


def monomial_forms(n: int, k: int, max_degree: int) -> list[PolyForm]:
    """Monomial k-forms of coefficient degree <= max_degree, (sigma, alpha) lex."""
    if k < 0 or k > n or max_degree < 0:
        return []
    return [PolyForm.monomial(n, alpha, sigma)
            for sigma in enumerate_sigma(k, n)
            for alpha in multiindices(n, max_degree)]


# -- family constructors (memoized) -----------------------------------------


@lru_cache(maxsize=None)
def basis_P(r: int, k: int, n: int) -> SpaceBasis:
    spec = SpaceSpec("P", n, r, k, "simplex")
    basis = SpaceBasis(spec, monomial_forms(n, k, r))
    basis.checker()  # distinct monomials; certify anyway
    return basis


@lru_cache(maxsize=None)
def basis_H(r: int, k: int, n: int) -> SpaceBasis:
    """Forms with homogeneous degree-r coefficients."""
    if k > n or r < 0:
        forms = []
    else:
        forms = [PolyForm.monomial(n, alpha, sigma)
                 for sigma in enumerate_sigma(k, n)
                 for alpha in multiindices_exact(n, r)]
    return SpaceBasis(SpaceSpec("H", n, max(r, 0), min(k, n), "simplex"), forms)


@lru_cache(maxsize=None)
def basis_Hrl(r: int, l: int, k: int, n: int) -> SpaceBasis:
    """Homogeneous degree-r monomial k-forms of linear degree >= l."""
    if l < 0:
        raise ValueError(f"need l >= 0, got {l}")
    if k > n or r < 0:
        forms = []
    else:
        forms = [PolyForm.monomial(n, alpha, sigma)
                 for sigma in enumerate_sigma(k, n)
                 for alpha in multiindices_exact(n, r)
                 if ldeg(alpha, sigma) >= l]
    return SpaceBasis(SpaceSpec("Hrl", n, max(r, 0), min(k, n), "simplex", l), forms)


@lru_cache(maxsize=None)
def basis_Pminus(r: int, k: int, n: int) -> SpaceBasis:
    """Basis of P_(r-1) k-forms plus contractions of homogeneous (k+1)-forms."""
    spec = SpaceSpec("Pminus", n, r, k, "simplex")
    gens = list(basis_P(r - 1, k, n).forms)
    gens += [koszul(f) for f in basis_H(r - 1, k + 1, n).forms]
    return SpaceBasis(spec, select_independent(gens))


@lru_cache(maxsize=None)
def basis_J(r: int, k: int, n: int) -> SpaceBasis:
    """Sum over l >= 1 of contractions of the (r+l-1, l) homogeneous pieces.

    A monomial (k+1)-form in n variables has linear degree at most
    n - k - 1, so the sum is finite; emptiness of each piece is detected by
    enumeration.
    """
    spec = SpaceSpec("J", n, r, k, "box")
    gens: list[PolyForm] = []
    l = 1
    while k + 1 <= n:
        piece = basis_Hrl(r + l - 1, l, k + 1, n).forms
        if not piece:
            break
        gens += [koszul(f) for f in piece]
        l += 1
    return SpaceBasis(spec, select_independent(gens))


@lru_cache(maxsize=None)
def basis_S(r: int, k: int, n: int) -> SpaceBasis:
    spec = SpaceSpec("S", n, r, k, "box")
    gens = list(basis_P(r, k, n).forms)
    gens += list(basis_J(r, k, n).forms)
    if k >= 1:
        gens += [exterior_derivative(f) for f in basis_J(r + 1, k - 1, n).forms]
    return SpaceBasis(spec, select_independent(gens))


@lru_cache(maxsize=None)
def basis_Qminus(r: int, k: int, n: int) -> SpaceBasis:
    """Tensor-product basis: per-axis degree <= r-1 on alternator axes, <= r off."""
    spec = SpaceSpec("Qminus", n, r, k, "box")
    from itertools import product
    forms = []
    for sigma in enumerate_sigma(k, n):
        inside = set(sigma)
        caps = [r - 1 if (i + 1) in inside else r for i in range(n)]
        for alpha in product(*(range(c + 1) for c in caps)):
            forms.append(PolyForm.monomial(n, alpha, sigma))
    basis = SpaceBasis(spec, forms)
    basis.checker()
    return basis


def basis_for(spec: SpaceSpec) -> SpaceBasis:
    if spec.family == "P":
        return basis_P(spec.r, spec.k, spec.n)
    if spec.family == "Pminus":
        return basis_Pminus(spec.r, spec.k, spec.n)
    if spec.family == "Qminus":
        return basis_Qminus(spec.r, spec.k, spec.n)
    if spec.family == "S":
        return basis_S(spec.r, spec.k, spec.n)
    if spec.family == "H":
        return basis_H(spec.r, spec.k, spec.n)
    if spec.family == "Hrl":
        return basis_Hrl(spec.r, spec.l, spec.k, spec.n)
    if spec.family == "J":
        return basis_J(spec.r, spec.k, spec.n)
    raise ValueError(f"unknown family {spec.family!r}")


# -- dimensions --------------------------------------------------------------


def dimension_P(n: int, r: int, k: int) -> int:
    if r < 0 or k < 0 or k > n:
        return 0
    return comb(n + r, n - k) * comb(r + k, r)


def dimension_Pminus(n: int, r: int, k: int) -> int:
    if r < 1 or k < 0 or k > n:
        return 0
    return comb(n + r, n - k) * comb(r + k - 1, k)


def dimension_Qminus(n: int, r: int, k: int) -> int:
    if r < 1 or k < 0 or k > n:
        return 0
    return comb(n, k) * r ** k * (r + 1) ** (n - k)


def dimension(spec: SpaceSpec, method: str = "formula") -> int:
    """Dimension by closed formula (where one exists) or by basis rank."""
    if method == "rank":
        return basis_for(spec).dim
    if method != "formula":
        raise ValueError(f"unknown method {method!r}")
    if spec.family == "P":
        return dimension_P(spec.n, spec.r, spec.k)
    if spec.family == "Pminus":
        return dimension_Pminus(spec.n, spec.r, spec.k)
    if spec.family == "Qminus":
        return dimension_Qminus(spec.n, spec.r, spec.k)
    if spec.family == "H":
        return len(basis_H(spec.r, spec.k, spec.n).forms)
    if spec.family == "Hrl":
        return len(basis_Hrl(spec.r, spec.l, spec.k, spec.n).forms)
    raise ValueError(f"family {spec.family} has no closed dimension formula; "
                     "use method='rank'")


def membership(u: PolyForm, spec: SpaceSpec) -> bool:
    """Exact span membership: does adding u increase the basis rank?"""
    return basis_for(spec).contains(u)


def describe(spec: SpaceSpec) -> dict:
    basis = basis_for(spec)
    return {
        "spec": spec.as_dict(),
        "dim": basis.dim,
        "basis": [form_to_string(f) for f in basis.forms],
    }
