import random
from fractions import Fraction

import pytest

from feforms.combinatorics import enumerate_sigma, multiindices
from feforms.forms import (
    AffineEmbedding,
    PolyForm,
    exterior_derivative,
    form_from_string,
    form_to_string,
    integrate_box,
    integrate_simplex,
    integrate_std_simplex,
    integrate_unit_box,
    koszul,
    ldeg,
    pullback,
    std_simplex_facets,
    std_simplex_vertices,
    trace_to_face,
    translate,
    unit_box_facets,
    wedge,
)
from feforms.polynomial import DegenerateSimplexError, Polynomial
from oracles import iterated_simplex_integral


def rand_form(rng, n, k, deg):
    u = PolyForm.zero(n, k)
    sigmas = enumerate_sigma(k, n)
    for _ in range(rng.randint(1, 5)):
        sigma = sigmas[rng.randrange(len(sigmas))]
        alpha = [0] * n
        for _ in range(rng.randint(0, deg)):
            alpha[rng.randrange(n)] += 1
        u = u + PolyForm.monomial(n, tuple(alpha), sigma, rng.randint(-3, 3))
    return u


def rand_homogeneous(rng, n, k, r):
    u = PolyForm.zero(n, k)
    sigmas = enumerate_sigma(k, n)
    choices = [a for a in multiindices(n, r) if sum(a) == r]
    for _ in range(rng.randint(1, 5)):
        sigma = sigmas[rng.randrange(len(sigmas))]
        alpha = choices[rng.randrange(len(choices))]
        u = u + PolyForm.monomial(n, alpha, sigma, rng.randint(-3, 3))
    return u


# -- wedge ----------------------------------------------------------------


def test_wedge_examples():
    dx1 = PolyForm.dx(2, 1)
    dx2 = PolyForm.dx(2, 2)
    assert wedge(dx1, dx1).is_zero
    assert wedge(dx1, dx2) == PolyForm.monomial(2, (0, 0), (1, 2))
    a = PolyForm.monomial(2, (0, 1), (1,))  # x2 dx1
    b = PolyForm.monomial(2, (1, 0), (2,))  # x1 dx2
    assert wedge(a, b) == PolyForm.monomial(2, (1, 1), (1, 2))


def test_wedge_anticommutativity():
    rng = random.Random(0)
    for n in (2, 3, 4):
        for k in range(n + 1):
            for j in range(n + 1 - k):
                a = rand_form(rng, n, k, 2)
                b = rand_form(rng, n, j, 2)
                flip = (-1) ** (k * j)
                assert wedge(a, b) == flip * wedge(b, a)


def test_wedge_associativity():
    rng = random.Random(1)
    for _ in range(10):
        a = rand_form(rng, 3, 1, 2)
        b = rand_form(rng, 3, 1, 2)
        c = rand_form(rng, 3, 1, 2)
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_wedge_dimension_mismatch():
    with pytest.raises(ValueError):
        wedge(PolyForm.dx(2, 1), PolyForm.dx(3, 1))


# -- exterior derivative ----------------------------------------------------


def test_d_examples():
    u = PolyForm.from_polynomial(Polynomial.variable(2, 1))
    assert exterior_derivative(u) == PolyForm.dx(2, 1)
    v = PolyForm.monomial(2, (1, 0), (2,))  # x1 dx2
    assert exterior_derivative(v) == PolyForm.monomial(2, (0, 0), (1, 2))
    w = PolyForm.monomial(2, (0, 1), (1,))  # x2 dx1
    assert exterior_derivative(w) == PolyForm.monomial(2, (0, 0), (1, 2), -1)


def test_dd_zero():
    rng = random.Random(2)
    for n in (1, 2, 3, 4):
        for k in range(n + 1):
            for _ in range(5):
                u = rand_form(rng, n, k, 5)
                assert exterior_derivative(exterior_derivative(u)).is_zero


def test_d_lowers_degree_raises_form_degree():
    rng = random.Random(3)
    for _ in range(10):
        u = rand_form(rng, 3, 1, 4)
        du = exterior_derivative(u)
        assert du.k == 2
        assert du.degree() <= max(u.degree() - 1, -1)


def test_d_leibniz():
    rng = random.Random(4)
    for n in (2, 3):
        for k in range(n):
            for j in range(n - k):
                a = rand_form(rng, n, k, 3)
                b = rand_form(rng, n, j, 3)
                lhs = exterior_derivative(wedge(a, b))
                rhs = wedge(exterior_derivative(a), b) + \
                    (-1) ** k * wedge(a, exterior_derivative(b))
                assert lhs == rhs


# -- contraction --------------------------------------------------------------


def test_koszul_examples():
    two = PolyForm.monomial(2, (0, 0), (1, 2))
    assert koszul(two) == (PolyForm.monomial(2, (1, 0), (2,))
                           - PolyForm.monomial(2, (0, 1), (1,)))
    assert koszul(PolyForm.dx(2, 1)) == PolyForm.from_polynomial(
        Polynomial.variable(2, 1))
    assert koszul(koszul(two)).is_zero


def test_koszul_three_index():
    u = PolyForm.monomial(3, (0, 0, 0), (1, 2, 3))
    want = (PolyForm.monomial(3, (1, 0, 0), (2, 3))
            - PolyForm.monomial(3, (0, 1, 0), (1, 3))
            + PolyForm.monomial(3, (0, 0, 1), (1, 2)))
    assert koszul(u) == want


def test_kk_zero_and_leibniz():
    rng = random.Random(5)
    for n in (2, 3, 4):
        for k in range(n + 1):
            for _ in range(5):
                u = rand_form(rng, n, k, 5)
                assert koszul(koszul(u)).is_zero
        for k in range(n + 1):
            for j in range(n + 1 - k):
                a = rand_form(rng, n, k, 3)
                b = rand_form(rng, n, j, 3)
                lhs = koszul(wedge(a, b))
                rhs = wedge(koszul(a), b) + (-1) ** k * wedge(a, koszul(b))
                assert lhs == rhs


def test_koszul_raises_poly_degree():
    rng = random.Random(6)
    u = rand_form(rng, 3, 2, 3)
    assert koszul(u).degree() <= u.degree() + 1
    assert koszul(u).k == 1


def test_homotopy_identity_random():
    rng = random.Random(7)
    for n in (1, 2, 3, 4):
        for k in range(n + 1):
            for r in range(6):
                w = rand_homogeneous(rng, n, k, r)
                lhs = koszul(exterior_derivative(w)) + exterior_derivative(koszul(w))
                assert lhs == Fraction(k + r) * w


# -- ldeg --------------------------------------------------------------------


def test_ldeg():
    assert ldeg((1, 1, 5), (1,)) == 1  # x1 x2 x3^5 dx1, deg 7
    assert sum((1, 1, 5)) == 7
    assert ldeg((0, 1, 1), (1,)) == 2
    assert ldeg((1, 0, 0), (1,)) == 0


# -- pullback and trace --------------------------------------------------------


def test_pullback_identity():
    rng = random.Random(8)
    ident = AffineEmbedding.identity(3)
    for k in range(4):
        u = rand_form(rng, 3, k, 3)
        assert pullback(u, ident) == u


def test_pullback_examples():
    # edge of the unit triangle: t -> (t, 1 - t) pulls dx2 back to -dt
    edge = AffineEmbedding([[1], [-1]], [0, 1])
    assert pullback(PolyForm.dx(2, 2), edge) == -1 * PolyForm.dx(1, 1)
    # t -> (2t, 0): x1 dx1 pulls back to 4 t dt
    f = AffineEmbedding([[2], [0]], [0, 0])
    u = PolyForm.monomial(2, (1, 0), (1,))
    assert pullback(u, f) == PolyForm.monomial(1, (1,), (1,), 4)


def test_pullback_functoriality_and_naturality():
    rng = random.Random(9)
    for _ in range(8):
        g = AffineEmbedding([[rng.randint(-2, 2) for _ in range(2)]
                             for _ in range(3)],
                            [rng.randint(-2, 2) for _ in range(3)])
        f = AffineEmbedding([[rng.randint(-2, 2) for _ in range(3)]
                             for _ in range(3)],
                            [rng.randint(-2, 2) for _ in range(3)])
        for k in range(3):
            u = rand_form(rng, 3, k, 3)
            # (f . g)* = g* . f*
            assert pullback(u, f.compose(g)) == pullback(pullback(u, f), g)
            # pullback commutes with d
            assert pullback(exterior_derivative(u), f) == \
                exterior_derivative(pullback(u, f))
            v = rand_form(rng, 3, 1, 2)
            assert pullback(wedge(u, v), f) == \
                wedge(pullback(u, f), pullback(v, f))


def test_trace_examples():
    # restriction of x1 to the edge x2 = 0 of the unit triangle is t
    edge = AffineEmbedding([[1], [0]], [0, 0])
    u = PolyForm.from_polynomial(Polynomial.variable(2, 1))
    assert trace_to_face(u, edge) == PolyForm.from_polynomial(
        Polynomial.variable(1, 1))
    assert trace_to_face(PolyForm.dx(2, 2), edge).is_zero
    two = PolyForm.monomial(2, (0, 0), (1, 2))
    assert trace_to_face(two, edge).is_zero  # a 2-form dies on a 1-face


def test_nested_traces():
    face = AffineEmbedding([[1, 0], [0, 1], [0, 0]], [0, 0, 0])  # z = 0 plane
    edge = AffineEmbedding([[1], [0]], [0, 0])                    # then y = 0
    rng = random.Random(10)
    for k in range(2):
        u = rand_form(rng, 3, k, 3)
        assert pullback(pullback(u, face), edge) == pullback(u, face.compose(edge))


# -- integration ---------------------------------------------------------------


def test_integrate_simplex_examples():
    tri = [(0, 0), (1, 0), (0, 1)]
    assert integrate_simplex(PolyForm.monomial(2, (0, 0), (1, 2)), tri) == Fraction(1, 2)
    assert integrate_simplex(PolyForm.monomial(2, (1, 1), (1, 2)), tri) == Fraction(1, 24)
    assert integrate_simplex(PolyForm.monomial(1, (1,), (1,)), [(0,), (1,)]) == Fraction(1, 2)


def test_integrate_simplex_orientation():
    tri = [(0, 0), (1, 0), (0, 1)]
    swapped = [(1, 0), (0, 0), (0, 1)]
    u = PolyForm.monomial(2, (0, 0), (1, 2))
    assert integrate_simplex(u, tri) == -integrate_simplex(u, swapped)


def test_integrate_simplex_degenerate():
    with pytest.raises(DegenerateSimplexError):
        integrate_simplex(PolyForm.monomial(2, (0, 0), (1, 2)),
                          [(0, 0), (1, 0), (2, 0)])


def test_integrate_simplex_against_iterated_oracle():
    """Factorial rule vs independent iterated symbolic integration."""
    for d in (1, 2, 3):
        for alpha in multiindices(d, 6):
            u = PolyForm.monomial(d, alpha, tuple(range(1, d + 1)))
            got = integrate_std_simplex(u)
            want = iterated_simplex_integral(Polynomial.monomial(d, alpha))
            assert got == want, (d, alpha)


def test_integrate_mapped_simplex_against_oracle():
    """Chart pullback + factorial rule vs oracle on a skewed triangle."""
    tri = [(Fraction(1, 2), 0), (2, 1), (0, 3)]
    chart = AffineEmbedding.from_simplex(tri)
    for alpha in multiindices(2, 3):
        u = PolyForm.monomial(2, alpha, (1, 2))
        got = integrate_simplex(u, tri)
        pulled = pullback(u, chart)
        want = iterated_simplex_integral(pulled.component((1, 2)))
        assert got == want


def test_integrate_box_examples():
    assert integrate_unit_box(PolyForm.monomial(2, (0, 0), (1, 2))) == 1
    assert integrate_unit_box(PolyForm.monomial(2, (1, 2), (1, 2))) == Fraction(1, 6)
    assert integrate_box(PolyForm.monomial(2, (0, 0), (1, 2)),
                         [(0, 2), (0, 1)]) == 2


def test_integrate_box_rejects():
    with pytest.raises(ValueError):
        integrate_box(PolyForm.monomial(2, (0, 0), (1, 2)), [(0, 1), (1, 1)])
    with pytest.raises(ValueError):
        integrate_unit_box(PolyForm.dx(2, 1))


def test_stokes_simplex():
    """Signed facet traces sum to the integral of the derivative."""
    rng = random.Random(11)
    for d in (1, 2, 3):
        for _ in range(8):
            u = rand_form(rng, d, d - 1, 4)
            lhs = integrate_std_simplex(exterior_derivative(u))
            rhs = Fraction(0)
            for sign, chart in std_simplex_facets(d):
                tr = pullback(u, chart)
                if d - 1 == 0:
                    rhs += sign * tr.component(()).evaluate(())
                else:
                    rhs += sign * integrate_std_simplex(tr)
            assert lhs == rhs


def test_stokes_box():
    rng = random.Random(12)
    for n in (1, 2, 3):
        for _ in range(8):
            u = rand_form(rng, n, n - 1, 4)
            lhs = integrate_unit_box(exterior_derivative(u))
            rhs = Fraction(0)
            for sign, chart in unit_box_facets(n):
                tr = pullback(u, chart)
                if n - 1 == 0:
                    rhs += sign * tr.component(()).evaluate(())
                else:
                    rhs += sign * integrate_unit_box(tr)
            assert lhs == rhs


def test_translate():
    u = PolyForm.from_polynomial(Polynomial.variable(2, 1))
    v = translate(u, (1, 0))
    assert v.component(()) == Polynomial.variable(2, 1) + 1


def test_std_simplex_vertices():
    assert std_simplex_vertices(2) == [(0, 0), (1, 0), (0, 1)]


# -- canonical strings -----------------------------------------------------------


def test_form_strings_roundtrip():
    rng = random.Random(13)
    for n in (1, 2, 3):
        for k in range(n + 1):
            for _ in range(5):
                u = rand_form(rng, n, k, 3)
                s = form_to_string(u)
                assert form_from_string(s, n, k) == u
    assert form_to_string(PolyForm.zero(2, 1)) == "0"
    assert form_from_string("0", 2, 1).is_zero


def test_form_string_format():
    u = PolyForm.monomial(2, (2, 0), (1,), Fraction(3, 2)) + \
        PolyForm.monomial(2, (0, 1), (2,), -1)
    assert form_to_string(u) == "3/2 x1^2 dx1 + -1/1 x2 dx2"
    two = PolyForm.monomial(3, (0, 0, 1), (1, 3))
    assert form_to_string(two) == "1/1 x3 dx1^dx3"


def test_zero_form_tolerant_algebra():
    z1 = PolyForm.zero(2, 1)
    z0 = PolyForm.zero(2, 0)
    assert z1 == z0  # zero forms compare equal across degrees
    u = PolyForm.dx(2, 1)
    assert u + z0 == u
    assert koszul(PolyForm.from_polynomial(Polynomial.variable(2, 1))).is_zero


def test_high_degree_forms_normalize_to_zero():
    u = PolyForm(2, 3, {})
    assert u.is_zero
    du = exterior_derivative(PolyForm.monomial(2, (0, 0), (1, 2)))
    assert du.is_zero and du.k == 3
