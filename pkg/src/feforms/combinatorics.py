"""Index machinery for alternators and monomials.

Increasing sequences sigma = (sigma_1 < ... < sigma_k) with entries in 1..n
label the basis alternators dx^sigma of k-forms; multi-indices (length-n
tuples of nonnegative exponents) label monomials.  Enumeration is
lexicographic everywhere, which fixes the canonical basis order used by all
downstream modules.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

Sigma = tuple  # increasing index tuple, entries in 1..n
MultiIndex = tuple  # length-n exponent tuple


def check_sigma(sigma, n: int) -> Sigma:
    """Validate an increasing index sequence in ambient dimension n."""
    if n < 0:
        raise ValueError(f"ambient dimension must be nonnegative, got {n}")
    prev = 0
    for s in sigma:
        if not isinstance(s, int) or s <= prev or s > n:
            raise ValueError(f"{tuple(sigma)!r} is not strictly increasing in 1..{n}")
        prev = s
    return tuple(sigma)


@lru_cache(maxsize=None)
def enumerate_sigma(k: int, n: int) -> tuple[Sigma, ...]:
    """All C(n,k) increasing k-sequences in 1..n, lexicographically."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return tuple(combinations(range(1, n + 1), k))


def complement(sigma, n: int) -> Sigma:
    """The increasing sequence whose range is {1..n} minus range(sigma)."""
    check_sigma(sigma, n)
    inside = set(sigma)
    return tuple(i for i in range(1, n + 1) if i not in inside)


def merge_sign(sigma, tau) -> int:
    """Sign of the permutation sorting the concatenation (sigma, tau).

    Returns 0 when the ranges intersect.  This fixes the multiplication
    table dx^sigma ^ dx^tau = merge_sign * dx^(sorted union).
    """
    if set(sigma) & set(tau):
        return 0
    inversions = 0
    for s in sigma:
        for t in tau:
            if t < s:
                inversions += 1
    return -1 if inversions % 2 else 1


def merge(sigma, tau) -> tuple[int, Sigma]:
    """(sign, sorted union); sign 0 and empty tuple on a repeated index."""
    sign = merge_sign(sigma, tau)
    if sign == 0:
        return 0, ()
    return sign, tuple(sorted(sigma + tau))


@lru_cache(maxsize=None)
def multiindices(n: int, max_degree: int) -> tuple[MultiIndex, ...]:
    """Multi-indices in n variables of total degree <= max_degree, lex order."""
    if max_degree < 0:
        return ()
    return tuple(a for a in product(range(max_degree + 1), repeat=n)
                 if sum(a) <= max_degree)


@lru_cache(maxsize=None)
def multiindices_exact(n: int, degree: int) -> tuple[MultiIndex, ...]:
    """Multi-indices in n variables of total degree exactly `degree`, lex order."""
    if degree < 0:
        return ()
    if n == 0:
        return ((),) if degree == 0 else ()
    return tuple(a for a in product(range(degree + 1), repeat=n)
                 if sum(a) == degree)
