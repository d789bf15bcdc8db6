"""Finite Galois actions on based root data.

A form is a based root datum together with a finite group Gamma acting
through pinned automorphisms of X^*.  Gamma is given by generators; its
abstract structure is either the generated matrix group itself, or an
explicit permutation group on the same generators when the action is not
faithful (e.g. a group of order 2 acting trivially, which still matters for
the twisted actions of endoscopic groups).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .lattice import LatAut, RatVec, coords_of, identity, invariant_subspace, mat_mul, mat_vec
from .rootdatum import BasedRootDatum, ValidationError, dual, root_perm, weyl_group

GROUP_BOUND = 10**4


@dataclass(frozen=True)
class GaloisForm:
    datum: BasedRootDatum
    action: tuple = ()  # generator matrices on X^*
    group: tuple | None = None  # generator permutations, or None when faithful
    name: str = field(default="", compare=False)

    def __post_init__(self):
        acts = tuple(a.matrix if isinstance(a, LatAut) else tuple(map(tuple, a)) for a in self.action)
        object.__setattr__(self, "action", acts)
        if self.group is not None:
            object.__setattr__(self, "group", tuple(tuple(p) for p in self.group))

    @property
    def label(self):
        return self.name or self.datum.name or "G"

    @property
    def ngens(self):
        return len(self.action)

    def cochar_action(self):
        """Generator matrices on X_* (contragredient)."""
        return tuple(_contra(m) for m in self.action)

    def __repr__(self):
        return f"<form {self.label}: |Gamma|={group_order(self)}>"


@lru_cache(maxsize=None)
def _contra(m):
    return LatAut(m).contragredient().matrix


def split_form(rd, name=None):
    return GaloisForm(rd, (), None, name or rd.name)


def closure(gens, start, mul, bound=GROUP_BOUND):
    """All products of generators (right multiplication), in BFS order."""
    seen = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen[y] = len(order)
                order.append(y)
                if len(order) > bound:
                    raise ValidationError(f"group closure exceeds {bound} elements")
    return order


def _perm_mul(p, q):
    # (p*q)(i) = p(q(i))
    return tuple(p[i] for i in q)


@lru_cache(maxsize=None)
def group_elements(gf):
    """The image of Gamma in GL(X^*), as matrices."""
    return tuple(closure(gf.action, identity(gf.datum.rank), mat_mul))


@lru_cache(maxsize=None)
def group_order(gf):
    if gf.group is None:
        return len(group_elements(gf))
    if not gf.group:
        return 1
    n = len(gf.group[0])
    return len(closure(gf.group, tuple(range(n)), _perm_mul))


def defines_homomorphism(gf, mats, rank):
    """Does generator k -> mats[k] extend to a homomorphism on Gamma?"""
    if len(mats) != gf.ngens:
        return False
    if gf.ngens == 0:
        return True
    if gf.group is None:
        start = (identity(gf.datum.rank), identity(rank))
        gens = tuple(zip(gf.action, mats))
        first = mat_mul
    else:
        start = (tuple(range(len(gf.group[0]))), identity(rank))
        gens = tuple(zip(gf.group, mats))
        first = _perm_mul

    def mul(x, g):
        return (first(x[0], g[0]), mat_mul(x[1], g[1]))

    try:
        graph = closure(gens, start, mul)
    except ValidationError:
        return False
    return len(graph) == group_order(gf)


def validate_form(gf):
    """Check that every generator is a pinned automorphism and Gamma is finite."""
    rd = gf.datum
    n = rd.rank
    base = set(rd.base)
    for k, m in enumerate(gf.action):
        if len(m) != n or any(len(row) != n for row in m):
            raise ValidationError(f"generator {k} has the wrong size")
        LatAut(m)  # determinant check
        perm = root_perm(rd, m)
        if perm is None:
            raise ValidationError(f"generator {k} does not permute the roots")
        if {perm[b] for b in base} != base:
            raise ValidationError(f"generator {k} does not preserve the base")
        cm = _contra(m)
        for i, c in enumerate(rd.coroots):
            if mat_vec(cm, c) != rd.coroots[perm[i]]:
                raise ValidationError(f"generator {k} does not preserve the root-coroot pairing")
    if gf.group is not None:
        if len(gf.group) != len(gf.action):
            raise ValidationError("abstract group needs one permutation per generator")
        size = {len(p) for p in gf.group}
        if len(size) > 1 or any(sorted(p) != list(range(len(p))) for p in gf.group):
            raise ValidationError("abstract generators must be permutations of one set")
    group_elements(gf)
    if not defines_homomorphism(gf, gf.action, n):
        raise ValidationError("the action matrices do not define a homomorphism on the abstract group")
    return gf


def dual_form(gf):
    """The form on the dual datum, Gamma acting on X^*(dual) = X_* by the contragredient."""
    return GaloisForm(dual(gf.datum), gf.cochar_action(), gf.group, f"dual({gf.label})")


def base_perm(gf, k):
    """Permutation of base positions induced by generator k."""
    rd = gf.datum
    perm = root_perm(rd, gf.action[k])
    pos = {b: i for i, b in enumerate(rd.base)}
    return tuple(pos[perm[b]] for b in rd.base)


@lru_cache(maxsize=None)
def base_orbits(gf):
    """Gamma-orbits on base positions, each sorted, ordered by least member."""
    n = len(gf.datum.base)
    perms = [base_perm(gf, k) for k in range(gf.ngens)]
    seen, out = set(), []
    for i in range(n):
        if i in seen:
            continue
        orb = set(closure(perms, i, lambda x, p: p[x], bound=n + 1)) if perms else {i}
        seen |= orb
        out.append(tuple(sorted(orb)))
    return tuple(out)


def is_stable(gf, subset):
    subset = frozenset(subset)
    return all(frozenset(base_perm(gf, k)[i] for i in subset) == subset for k in range(gf.ngens))


@lru_cache(maxsize=None)
def stable_subsets(gf):
    """Gamma-stable subsets of the base, by size then lexicographically."""
    orbits = base_orbits(gf)
    out = []
    for mask in range(1 << len(orbits)):
        s = frozenset(i for j, orb in enumerate(orbits) if mask >> j & 1 for i in orb)
        out.append(s)
    return tuple(sorted(out, key=lambda s: (len(s), sorted(s))))


def relative_size(gf, subset):
    """Number of relative simple roots (Gamma-orbits) in a stable subset."""
    return sum(1 for orb in base_orbits(gf) if orb[0] in subset)


@dataclass(frozen=True)
class RelRootSystem:
    split_sublattice: tuple  # basis of (X_*)^Gamma over Q
    orbits: tuple  # Gamma-orbits of base positions
    simple: tuple  # restriction of each orbit to the split part


def relative_roots(gf):
    rd = gf.datum
    split = tuple(invariant_subspace(gf.cochar_action(), rd.rank))
    simple, orbits = [], []
    for orb in base_orbits(gf):
        rests = {tuple(sum(Fraction(a) * b for a, b in zip(rd.simple_root(i), v)) for v in split) for i in orb}
        if len(rests) != 1:  # pragma: no cover - impossible for a valid form
            raise ValidationError(f"orbit {orb} restricts inconsistently")
        r = rests.pop()
        if any(r):
            simple.append(RatVec(r))
            orbits.append(orb)
    return RelRootSystem(split, tuple(orbits), tuple(simple))


def gamma_average(gf, v):
    """Average of a cocharacter over Gamma (acting on X_*)."""
    vc = coords_of(v)
    mats = [_contra(m) for m in group_elements(gf)]
    total = [Fraction(0)] * len(vc)
    for m in mats:
        for i, x in enumerate(mat_vec(m, vc)):
            total[i] += x
    return RatVec(tuple(x / len(mats) for x in total))


def gamma_average_char(gf, v):
    """Average of a character over Gamma (acting on X^*)."""
    vc = coords_of(v)
    mats = group_elements(gf)
    total = [Fraction(0)] * len(vc)
    for m in mats:
        for i, x in enumerate(mat_vec(m, vc)):
            total[i] += x
    return RatVec(tuple(x / len(mats) for x in total))


def opposition(rd):
    """The pinned automorphism -w_0 of X^*."""
    w0 = weyl_group(rd)[-1].matrix
    return tuple(tuple(-x for x in row) for row in w0)


def conjugate_weyl(gf, k, w):
    """gamma_k w gamma_k^{-1} as a matrix."""
    g = gf.action[k]
    return mat_mul(mat_mul(g, w.matrix), LatAut(g).inverse().matrix)
