"""Exact linear algebra over the rationals.

Two engines.  The rank workhorse is an incremental sparse echelon form on
integer rows (fraction-free: rows are rescaled to coprime integers and
combined by cross-multiplication).  Pivoting is deterministic: the pivot of
a row is its smallest column key, so repeated runs produce identical
echelons.  Dense Fraction routines (LU solves, RREF, nullspaces) handle
square systems and kernel extraction.

Nonsingularity of a square matrix has a modular shortcut: a determinant
that is nonzero mod p certifies a nonzero determinant over Q, while an
inconclusive reduction falls back to exact elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

_PRIME = (1 << 31) - 1  # Mersenne prime, fits machine words


class SingularMatrixError(ValueError):
    pass


def _normalize(row: dict) -> dict:
    """Divide through by the gcd and make the leading coefficient positive."""
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if row[min(row)] < 0:
        g = -g
    if g != 1:
        row = {c: v // g for c, v in row.items()}
    return row


def int_row(row: dict) -> dict:
    """Rescale a Fraction-valued sparse row to coprime integers."""
    denom = 1
    for v in row.values():
        denom = lcm(denom, v.denominator)
    out = {}
    for c, v in row.items():
        w = v.numerator * (denom // v.denominator)
        if w:
            out[c] = w
    return _normalize(out)


class Echelon:
    """Incrementally built row echelon form over Q.

    Rows are dicts from totally ordered column keys to nonzero integers.
    Feeding a row reduces it against the stored pivots; a nonzero remainder
    becomes a new pivot row.
    """

    def __init__(self):
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = _normalize({c: v for c, v in row.items() if v})
        while row:
            col = min(row)
            piv = self.pivots.get(col)
            if piv is None:
                return row
            a, b = row[col], piv[col]
            g = gcd(a, b)
            ca, cb = b // g, a // g
            new = {}
            for c in row.keys() | piv.keys():
                w = ca * row.get(c, 0) - cb * piv.get(c, 0)
                if w:
                    new[c] = w
            row = _normalize(new)
        return row

    def add(self, row: dict) -> bool:
        """Feed an integer row; True when it enlarges the span."""
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def add_fractions(self, row: dict) -> bool:
        return self.add(int_row(row))

    def contains(self, row: dict) -> bool:
        return not self.reduce(int_row(row))


def rank(rows: list) -> int:
    """Rank of a dense matrix given as lists of Fractions (or ints)."""
    ech = Echelon()
    for r in rows:
        ech.add_fractions({j: Fraction(v) for j, v in enumerate(r) if v})
    return ech.rank


def _scale_rows_to_int(rows: list) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(v) for v in r]
        denom = 1
        for v in fr:
            denom = lcm(denom, v.denominator)
        out.append([v.numerator * (denom // v.denominator) for v in fr])
    return out


def _nonsingular_mod_p(rows: list[list[int]], p: int) -> bool:
    """True when det != 0 mod p; False means inconclusive."""
    n = len(rows)
    a = [[v % p for v in r] for r in rows]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return False
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        inv = pow(a[col][col], p - 2, p)
        arow = a[col]
        for i in range(col + 1, n):
            f = a[i][col]
            if not f:
                continue
            f = f * inv % p
            row = a[i]
            for j in range(col, n):
                row[j] = (row[j] - f * arow[j]) % p
    return True


def is_nonsingular(rows: list) -> bool:
    """Exact nonsingularity of a square rational matrix.

    det != 0 mod p implies det != 0 over Q, so the modular pass can only
    certify success; the exact echelon settles the remaining cases.
    """
    n = len(rows)
    if n == 0:
        return True
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    scaled = _scale_rows_to_int(rows)
    if _nonsingular_mod_p(scaled, _PRIME):
        return True
    ech = Echelon()
    for r in scaled:
        ech.add({j: v for j, v in enumerate(r) if v})
    return ech.rank == n


class LUFactor:
    """PLU factorization over Q for repeated exact solves."""

    def __init__(self, rows: list):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix is not square")
        a = [[Fraction(v) for v in r] for r in rows]
        perm = list(range(n))
        for col in range(n):
            piv = None
            for i in range(col, n):
                if a[i][col]:
                    piv = i
                    break
            if piv is None:
                raise SingularMatrixError(f"singular at column {col}")
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                perm[col], perm[piv] = perm[piv], perm[col]
            inv = 1 / a[col][col]
            for i in range(col + 1, n):
                if a[i][col]:
                    f = a[i][col] * inv
                    a[i][col] = f  # store the multiplier in the L part
                    arow = a[col]
                    irow = a[i]
                    for j in range(col + 1, n):
                        if arow[j]:
                            irow[j] -= f * arow[j]
        self.n = n
        self.lu = a
        self.perm = perm

    def solve(self, b: list) -> list[Fraction]:
        n = self.n
        y = [Fraction(b[self.perm[i]]) for i in range(n)]
        for i in range(n):
            row = self.lu[i]
            s = y[i]
            for j in range(i):
                if row[j] and y[j]:
                    s -= row[j] * y[j]
            y[i] = s
        x = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            row = self.lu[i]
            s = y[i]
            for j in range(i + 1, n):
                if row[j] and x[j]:
                    s -= row[j] * x[j]
            x[i] = s / row[i]
        return x


def solve(rows: list, b: list) -> list[Fraction]:
    return LUFactor(rows).solve(b)


def rref(rows: list) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (reduced rows, pivot columns)."""
    a = [[Fraction(v) for v in r] for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a[:r], pivots


def nullspace(rows: list, ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of the matrix, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(v)
    return basis
