"""Theorem-level verification drivers with machine-readable certificates.

Each check recomputes an algebraic claim from scratch in exact arithmetic:
subcomplex containments by span membership of derivatives, exactness by
rank-nullity bookkeeping, the contraction/derivative anticommutator on full
homogeneous bases, the homogeneous direct-sum split, and the property
suite of the serendipity-type box family.  Certificates are deterministic:
the elimination pivots in a fixed order, so identical parameters always
produce identical witness data.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from feforms import dofs
from feforms.forms import (
    PolyForm,
    exterior_derivative,
    form_to_string,
    koszul,
    pullback,
)
from feforms.polynomial import Polynomial, sdeg_exponents
from feforms.spaces import (
    SpaceBasis,
    SpanChecker,
    basis_H,
    basis_P,
    basis_Pminus,
    basis_Qminus,
    basis_S,
    span_rank,
    spans_equal,
)


@dataclass
class Certificate:
    claim: str
    params: dict
    verdict: str  # "pass" | "fail"
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> str:
        return json.dumps(
            {"claim": self.claim, "params": self.params,
             "verdict": self.verdict, "witness": self.witness},
            sort_keys=True)


@dataclass(frozen=True)
class ComplexSpec:
    """One derivative chain: family, dimension, and starting degree."""
    family: str
    n: int
    r: int
    element: str = ""

    def __post_init__(self):
        if self.family not in ("P", "Pminus", "Qminus", "S"):
            raise ValueError(f"unknown family {self.family!r}")
        element = "box" if self.family in ("Qminus", "S") else "simplex"
        if self.element and self.element != element:
            raise ValueError(f"family {self.family} lives on {element} elements")
        object.__setattr__(self, "element", element)
        rmin = 1
        if self.r < rmin:
            raise ValueError(f"chains need r >= {rmin}")

    @property
    def degrees(self) -> list:
        return chain_degrees(self.family, self.r, self.n)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def certificates_to_jsonl(certs) -> str:
    return "".join(c.to_json() + "\n" for c in certs)


def summary_tsv(certs) -> str:
    lines = ["claim\tparams\tverdict"]
    for c in certs:
        lines.append(f"{c.claim}\t{json.dumps(c.params, sort_keys=True)}\t{c.verdict}")
    return "\n".join(lines) + "\n"


# -- chain layouts -----------------------------------------------------------


def chain_degrees(family: str, r: int, n: int) -> list[int | None]:
    """Per-level polynomial degree of the family's derivative chain.

    Constant degree for the trimmed families, decreasing degree for the
    full and serendipity families; None marks a level with no space.
    """
    out: list[int | None] = []
    for k in range(n + 1):
        if family in ("Pminus", "Qminus"):
            deg = r
        else:
            deg = r - k
        if family == "P":
            out.append(deg if deg >= 0 else None)
        elif family == "S":
            out.append(deg if deg >= 1 else None)
        else:
            out.append(deg)
    return out


def _level_basis(family: str, deg: int, k: int, n: int) -> SpaceBasis:
    if family == "P":
        return basis_P(deg, k, n)
    if family == "Pminus":
        return basis_Pminus(deg, k, n)
    if family == "Qminus":
        return basis_Qminus(deg, k, n)
    if family == "S":
        return basis_S(deg, k, n)
    raise ValueError(f"unknown family {family!r}")


def check_complex(family, n: int | None = None, r: int | None = None) -> Certificate:
    """The derivative maps each level's span into the next level's span.

    Accepts a ComplexSpec or the (family, n, r) triple.
    """
    if isinstance(family, ComplexSpec):
        family, n, r = family.family, family.n, family.r
    degrees = chain_degrees(family, r, n)
    levels = []
    ok = True
    for k in range(n):
        if degrees[k] is None or degrees[k + 1] is None:
            continue
        src = _level_basis(family, degrees[k], k, n)
        dst = _level_basis(family, degrees[k + 1], k + 1, n)
        entry = {"k": k, "src_dim": src.dim, "dst_dim": dst.dim,
                 "contained": True}
        for f in src.forms:
            if not dst.contains(exterior_derivative(f)):
                entry["contained"] = False
                entry["counterexample"] = form_to_string(f)
                break
        levels.append(entry)
        ok = ok and entry["contained"]
    return Certificate("complex", {"family": family, "n": n, "r": r},
                       _verdict(ok), {"levels": levels})


def _map_rank(forms, operator) -> int:
    chk = SpanChecker()
    for f in forms:
        chk.add(operator(f))
    return chk.rank


def check_exactness(kind, n: int | None = None, r: int | None = None) -> Certificate:
    """Rank-nullity exactness of a polynomial chain.

    kind "P":      levels P_(r-j) j-forms with the derivative, exact except
                   for the constants at level 0.
    kind "Pminus": levels Pminus_r j-forms with the derivative, same
                   homology.
    kind "koszul": levels P_(r-j) j-forms with the contraction running the
                   other way; injective at the top level and hitting every
                   polynomial without constant term at level 0.

    Accepts a ComplexSpec (families P and Pminus) in place of the kind.
    """
    if isinstance(kind, ComplexSpec):
        kind, n, r = kind.family, kind.n, kind.r
    params = {"kind": kind, "n": n, "r": r}
    dims, ranks = [], []
    if kind in ("P", "koszul"):
        bases = [basis_P(r - j, j, n) if r - j >= 0 else None for j in range(n + 1)]
    elif kind == "Pminus":
        bases = [basis_Pminus(r, j, n) for j in range(n + 1)]
    else:
        raise ValueError(f"unknown exactness kind {kind!r}")
    dims = [b.dim if b else 0 for b in bases]
    operator = koszul if kind == "koszul" else exterior_derivative
    for j in range(n + 1):
        ranks.append(_map_rank(bases[j].forms, operator) if bases[j] else 0)
    nullities = [dims[j] - ranks[j] for j in range(n + 1)]

    conditions = []
    if kind == "koszul":
        # contraction lowers the form degree: map at level j lands in level j-1
        conditions.append(("injective_at_top", nullities[n] == 0))
        for j in range(1, n):
            conditions.append((f"exact_at_{j}", ranks[j + 1] == nullities[j]))
        if dims[0] > 0:
            conditions.append(("level0_misses_constants_only",
                               ranks[1] == dims[0] - 1))
    else:
        if dims[0] > 0:
            conditions.append(("kernel_at_0_is_constants", nullities[0] == 1))
        for j in range(1, n + 1):
            conditions.append((f"exact_at_{j}", ranks[j - 1] == nullities[j]))
    ok = all(v for _, v in conditions)
    witness = {"dims": dims, "ranks": ranks, "nullities": nullities,
               "conditions": {name: v for name, v in conditions}}
    return Certificate("exactness", params, _verdict(ok), witness)


def check_homotopy(n: int, r: int, k: int, trials: int = 0, seed: int = 0) -> Certificate:
    """(contract after d) + (d after contract) = (k + r) id on homogeneous forms.

    Verified on the full monomial basis of the homogeneous space, plus
    optional extra random combinations.
    """
    basis = basis_H(r, k, n)
    factor = Fraction(r + k)
    failures = []
    for w in basis.forms:
        lhs = koszul(exterior_derivative(w)) + exterior_derivative(koszul(w))
        if lhs != factor * w:
            failures.append(form_to_string(w))
    rng = random.Random(seed)
    for _ in range(trials):
        w = PolyForm.zero(n, k)
        for f in basis.forms:
            w = w + rng.randint(-3, 3) * f
        lhs = koszul(exterior_derivative(w)) + exterior_derivative(koszul(w))
        if lhs != factor * w:
            failures.append(form_to_string(w))
    return Certificate(
        "homotopy", {"n": n, "r": r, "k": k, "trials": trials},
        _verdict(not failures),
        {"basis_size": basis.dim, "factor": r + k, "failures": failures})


def check_direct_sum(n: int, r: int, k: int) -> Certificate:
    """Homogeneous k-forms split as contraction image plus derivative image."""
    if r < 1:
        raise ValueError("the direct sum needs r >= 1")
    dim_h = basis_H(r, k, n).dim
    kappa_part = [koszul(f) for f in basis_H(r - 1, k + 1, n).forms]
    d_part = ([exterior_derivative(f) for f in basis_H(r + 1, k - 1, n).forms]
              if k >= 1 else [])
    rank_kappa = span_rank(kappa_part)
    rank_d = span_rank(d_part)
    rank_union = span_rank(kappa_part + d_part)
    ok = (rank_kappa + rank_d == dim_h) and (rank_union == dim_h)
    return Certificate(
        "direct_sum", {"n": n, "r": r, "k": k}, _verdict(ok),
        {"dim": dim_h, "rank_kappa": rank_kappa, "rank_d": rank_d,
         "rank_union": rank_union})


# -- serendipity-type family property suite ---------------------------------


def check_S_properties(n: int, r: int) -> Certificate:
    """Degree sandwich, inclusion, trace and subcomplex properties, the
    superlinear-degree description of the 0-form space, and the top-form
    coincidence with the full polynomial space."""
    per_k = []
    ok = True
    box_faces = dofs.reference_faces("box", n)
    for k in range(n + 1):
        s = basis_S(r, k, n)
        p_low = basis_P(r, k, n)
        entry = {"k": k, "dim": s.dim}

        def witness_contains(target, forms, operator=None):
            for f in forms:
                g = operator(f) if operator else f
                if not target.contains(g):
                    entry.setdefault("counterexample", form_to_string(f))
                    return False
            return True

        degree_low = witness_contains(s, p_low.forms)
        degree_high = all(f.degree() <= r + n - k for f in s.forms)
        inclusion = witness_contains(basis_S(r + 1, k, n), s.forms)
        trace_ok = True
        for face in box_faces:
            if face.dim >= n or face.dim < k:
                continue
            target = basis_S(r, k, face.dim)
            if not witness_contains(target, s.forms,
                                    lambda f, e=face.embedding: pullback(f, e)):
                trace_ok = False
                break
        if r >= 2 and k < n:
            subcomplex = witness_contains(basis_S(r - 1, k + 1, n), s.forms,
                                          exterior_derivative)
        else:
            subcomplex = None
        entry.update({"degree": degree_low and degree_high,
                      "inclusion": inclusion, "trace": trace_ok,
                      "subcomplex": subcomplex})
        per_k.append(entry)
        ok = ok and degree_low and degree_high and inclusion and trace_ok \
            and (subcomplex is not False)

    sdeg_forms = [PolyForm.from_polynomial(Polynomial.monomial(n, a))
                  for a in _sdeg_monomials(n, r)]
    sdeg_match = spans_equal(basis_S(r, 0, n).forms, sdeg_forms)
    top_match = spans_equal(basis_S(r, n, n).forms, basis_P(r, n, n).forms)
    ok = ok and sdeg_match and top_match
    return Certificate(
        "S_properties", {"n": n, "r": r}, _verdict(ok),
        {"per_k": per_k, "sdeg_characterizes_0forms": sdeg_match,
         "top_forms_equal_P": top_match})


def _sdeg_monomials(n: int, r: int):
    """Exponent tuples of superlinear degree <= r (degree <= r + n overall)."""
    from feforms.combinatorics import multiindices
    return [a for a in multiindices(n, r + n) if sdeg_exponents(a) <= r]


def check_S_vector_proxies(r: int) -> Certificate:
    """The 3D vector-field descriptions of the 1-form and 2-form spaces.

    1-forms: fields v + (x2 x3 (w2 - w3), x3 x1 (w3 - w1), x1 x2 (w1 - w2))
    + grad u with deg v <= r, deg w_i <= r-1 (w_i free of x_i) and
    sdeg u <= r + 1.  2-forms: v + curl of the same bracket with
    deg w_i <= r, under the usual proxy identifications.
    """
    n = 3
    ok = True
    witness = {}

    def w_field_forms(max_deg):
        out = []
        from feforms.combinatorics import multiindices
        x = [Polynomial.variable(n, j) for j in range(1, 4)]
        slots = {1: [(2, x[2], -1), (3, x[1], 1)],   # w1: -x3 x1 dx2 + x2 x1 dx3
                 2: [(1, x[2], 1), (3, x[0], -1)],   # w2: +x2 x3 dx1 - x1 x2 dx3
                 3: [(1, x[1], -1), (2, x[0], 1)]}   # w3: -x3 x2 dx1 + x3 x1 dx2
        for i in (1, 2, 3):
            for beta in multiindices(n, max_deg):
                if beta[i - 1] != 0:
                    continue
                w = Polynomial.monomial(n, beta)
                form = PolyForm.zero(n, 1)
                for slot, other, sign in slots[i]:
                    coeff = w * x[i - 1] * other * sign
                    form = form + PolyForm(n, 1, {(slot,): coeff})
                out.append(form)
        return out

    # 1-form description
    gens1 = list(basis_P(r, 1, n).forms)
    gens1 += w_field_forms(r - 1)
    gens1 += [exterior_derivative(PolyForm.from_polynomial(Polynomial.monomial(n, a)))
              for a in _sdeg_monomials(n, r + 1)]
    match1 = spans_equal(gens1, basis_S(r, 1, n).forms)
    witness["one_forms_match"] = match1
    ok = ok and match1

    # 2-form description
    gens2 = list(basis_P(r, 2, n).forms)
    gens2 += [exterior_derivative(f) for f in w_field_forms(r)]
    match2 = spans_equal(gens2, basis_S(r, 2, n).forms)
    witness["two_forms_match"] = match2
    ok = ok and match2

    return Certificate("S_vector_proxies", {"n": n, "r": r}, _verdict(ok), witness)


def check_origin_independence(family: str, n: int, r: int, k: int,
                              shift=None) -> Certificate:
    """Translating the element leaves the family's span unchanged.

    The contraction operator is anchored at the coordinate origin; this
    check substitutes x -> x + shift into every basis form and compares
    spans, so a base-point dependence would show up as a rank change.
    """
    from feforms.forms import translate
    from feforms.polynomial import rational_to_string
    if shift is None:
        shift = tuple(Fraction(i + 1, 3) for i in range(n))
    basis = _level_basis(family, r, k, n)
    moved = [translate(f, shift) for f in basis.forms]
    same = spans_equal(basis.forms, moved)
    return Certificate(
        "origin_independence",
        {"family": family, "n": n, "r": r, "k": k,
         "shift": [rational_to_string(s) for s in shift]},
        _verdict(same), {"dim": basis.dim})
