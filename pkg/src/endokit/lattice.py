"""Exact linear algebra on character and cocharacter lattices.

Vectors are small immutable wrappers around tuples: integers for lattice
points, ``Fraction`` for rational points, and fractions reduced into [0, 1)
for torsion points of a torus.  Matrices are tuples of row tuples and act on
column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor


class DimensionError(ValueError):
    pass


def _as_fraction(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def coords_of(v):
    """Plain tuple behind a vector wrapper (or any sequence)."""
    return v.coords if hasattr(v, "coords") else tuple(v)


def _fmt(c):
    return str(c)


class _Vec:
    __slots__ = ()

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def rank(self):
        return len(self.coords)

    def __str__(self):
        return "(" + ",".join(_fmt(c) for c in self.coords) + ")"

    def _other(self, other):
        oc = coords_of(other)
        if len(oc) != len(self.coords):
            raise DimensionError(f"rank {len(self.coords)} vs {len(oc)}")
        return oc


@dataclass(frozen=True, order=True)
class LatVec(_Vec):
    coords: tuple

    def __post_init__(self):
        vals = []
        for c in self.coords:
            f = _as_fraction(c)
            if f.denominator != 1:
                raise ValueError(f"non-integral lattice coordinate {c}")
            vals.append(int(f))
        object.__setattr__(self, "coords", tuple(vals))

    def __add__(self, other):
        return LatVec(tuple(a + b for a, b in zip(self.coords, self._other(other))))

    def __sub__(self, other):
        return LatVec(tuple(a - b for a, b in zip(self.coords, self._other(other))))

    def __neg__(self):
        return LatVec(tuple(-a for a in self.coords))

    def __mul__(self, k):
        return LatVec(tuple(k * a for a in self.coords))

    __rmul__ = __mul__


@dataclass(frozen=True, order=True)
class RatVec(_Vec):
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_as_fraction(c) for c in self.coords))

    def __add__(self, other):
        return RatVec(tuple(a + b for a, b in zip(self.coords, self._other(other))))

    def __sub__(self, other):
        return RatVec(tuple(a - b for a, b in zip(self.coords, self._other(other))))

    def __neg__(self):
        return RatVec(tuple(-a for a in self.coords))

    def __mul__(self, k):
        return RatVec(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coords)


def frac_part(x):
    x = _as_fraction(x)
    return x - floor(x)


@dataclass(frozen=True, order=True)
class TorsionVec(_Vec):
    """A point of (Q/Z)^r, i.e. a finite-order element of a split torus."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(frac_part(c) for c in self.coords))

    def __add__(self, other):
        return TorsionVec(tuple(a + b for a, b in zip(self.coords, self._other(other))))

    def __sub__(self, other):
        return TorsionVec(tuple(a - b for a, b in zip(self.coords, self._other(other))))

    def __neg__(self):
        return TorsionVec(tuple(-a for a in self.coords))

    def __mul__(self, k):
        return TorsionVec(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def order(self):
        n = 1
        for c in self.coords:
            d = c.denominator
            n = n * d // _gcd(n, d)
        return n


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def pair(x, y):
    """The pairing <x, y>; taken modulo 1 when ``y`` is a TorsionVec."""
    xc, yc = coords_of(x), coords_of(y)
    if len(xc) != len(yc):
        raise DimensionError(f"cannot pair rank {len(xc)} with rank {len(yc)}")
    total = sum((Fraction(a) * b for a, b in zip(xc, yc)), Fraction(0))
    if isinstance(y, TorsionVec):
        return frac_part(total)
    return total


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


# --- matrices -------------------------------------------------------------

def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m):
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_vec(m, v):
    return tuple(dot(row, v) for row in m)


def _fraction_inverse(m):
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_inv(m):
    """Inverse of an integer matrix that must be unimodular."""
    inv = _fraction_inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over the integers")
    return tuple(tuple(int(x) for x in row) for row in inv)


def determinant(m):
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


@dataclass(frozen=True)
class LatAut:
    """An automorphism of Z^r, acting on column vectors."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if any(len(row) != len(m) for row in m):
            raise DimensionError("automorphism matrix must be square")
        if m and abs(determinant(m)) != 1:
            raise ValueError("automorphism must have determinant +-1")

    @classmethod
    def identity(cls, n):
        return cls(identity(n))

    @property
    def rank(self):
        return len(self.matrix)

    def __call__(self, v):
        vc = coords_of(v)
        if len(vc) != self.rank:
            raise DimensionError(f"rank {self.rank} automorphism on rank {len(vc)} vector")
        out = mat_vec(self.matrix, vc)
        return type(v)(out) if isinstance(v, _Vec) else out

    def __matmul__(self, other):
        return LatAut(mat_mul(self.matrix, other.matrix))

    def inverse(self):
        return LatAut(mat_inv(self.matrix))

    def contragredient(self):
        """The induced action on the dual lattice (inverse transpose)."""
        return LatAut(transpose(mat_inv(self.matrix)))

    def is_identity(self):
        return self.matrix == identity(self.rank)


# --- rational row reduction -----------------------------------------------

def rref(rows, ncols=None):
    """Reduced row echelon form over Q.  Returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return [tuple(row) for row in a[:r]], pivots


def rank_of(rows):
    return len(rref(rows)[1]) if rows else 0


def row_space_basis(rows, ncols):
    """Canonical basis (RREF, leading entries 1) of the span of ``rows``."""
    if not rows:
        return []
    return rref(rows, ncols)[0]


def nullspace(rows, ncols):
    """Canonical basis of {v : row . v = 0 for every row}, in RREF."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return row_space_basis(basis, ncols)


def solve(a, b):
    """Some rational solution x of a x = b, or None."""
    rows = [list(row) + [bi] for row, bi in zip(a, b)]
    ncols = len(a[0]) if a else 0
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols))
    red, pivots = rref(rows, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def invariant_subspace(gens, rank=None):
    """Canonical basis of the common fixed space of ``gens`` over Q."""
    mats = [g.matrix if isinstance(g, LatAut) else tuple(map(tuple, g)) for g in gens]
    if rank is None:
        if not mats:
            raise DimensionError("rank required when there are no generators")
        rank = len(mats[0])
    rows = []
    for m in mats:
        if len(m) != rank:
            raise DimensionError("generators of different ranks")
        for i, row in enumerate(m):
            rows.append(tuple(x - (1 if i == j else 0) for j, x in enumerate(row)))
    return [RatVec(v) for v in nullspace(rows, rank)]


# --- integer lattices -----------------------------------------------------

def hermite_rows(rows, ncols):
    """Row Hermite normal form of the integer span of ``rows``.

    Nonzero rows only, positive pivots, entries above a pivot reduced into
    [0, pivot).
    """
    a = [list(map(int, row)) for row in rows if any(row)]
    out = []
    col = 0
    while a and col < ncols:
        nz = [row for row in a if row[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [row for row in a if row[col] == 0]
        # Euclid on column ``col`` across the candidate rows.
        while len(nz) > 1:
            nz.sort(key=lambda row: abs(row[col]))
            p = nz[0]
            new = [p]
            for row in nz[1:]:
                q = row[col] // p[col]
                row = [x - q * y for x, y in zip(row, p)]
                (new if row[col] != 0 else rest).append(row)
            nz = new
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        out.append(p)
        a = [row for row in rest if any(row)]
        col += 1
    pivots = [next(i for i, x in enumerate(row) if x) for row in out]
    for k, (row, pc) in enumerate(zip(out, pivots)):
        for j in range(k):
            q = out[j][pc] // row[pc]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], row)]
    return [tuple(row) for row in out]


class QuotientLattice:
    """Z^n modulo the span of some integer vectors, with canonical representatives."""

    def __init__(self, gens, ncols):
        self.ncols = ncols
        self.basis = hermite_rows(gens, ncols)
        self.pivots = [next(i for i, x in enumerate(row) if x) for row in self.basis]

    def reduce(self, v):
        v = list(map(int, v))
        for row, p in zip(self.basis, self.pivots):
            q = v[p] // row[p]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)

    def equal(self, u, v):
        return self.reduce(u) == self.reduce(v)
