"""Kottwitz points, cocharacter pairs and the endoscopic sum calculus.

A cocharacter pair is (S, mu_S): a Galois-stable set S of simple roots
(standing for the standard Levi M_S) and an M_S-dominant cocharacter.  Its
slope theta_S(mu_S) is the projection of mu_S to the Galois-fixed central
cocharacters of M_S.  The order is

    (S1, mu1) <= (S2, mu2)  iff  S1 <= S2, mu1 in W_{S2} mu2, and
    theta_S1(mu1) - theta_S2(mu1) has strictly positive coefficient on
    every simple coroot of S2 outside S1.

All of this may be computed relative to a standard Levi ``top`` in place of
G, which is how the induction identity is checked.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .endoscopy import class_key, full_levi
from .galois import gamma_average, is_stable, relative_size, stable_subsets
from .lattice import QuotientLattice, RatVec, coords_of, dot, solve
from .levi import SlopeDatum, fiber, x_map, y_map


def _top(gf, top):
    return full_levi(gf) if top is None else frozenset(top)


# --- slopes and Kottwitz invariants -------------------------------------------------

@lru_cache(maxsize=None)
def _cartan(rd, subset):
    s = sorted(subset)
    return tuple(tuple(dot(rd.simple_root(i), rd.simple_coroot(j)) for j in s) for i in s)


def coroot_coefficients(rd, subset, v):
    """c with v = sum c_j alpha_j^vee over j in subset (v must lie in that span)."""
    s = sorted(subset)
    if not s:
        return {}
    rhs = [dot(rd.simple_root(i), coords_of(v)) for i in s]
    c = solve(_cartan(rd, frozenset(subset)), rhs)
    return dict(zip(s, c))


@lru_cache(maxsize=None)
def theta(gf, subset, mu):
    """Projection of mu to the Gamma-fixed central cocharacters of M_S."""
    rd = gf.datum
    v = [Fraction(x) for x in mu]
    for j, c in coroot_coefficients(rd, subset, v).items():
        v = [a - c * b for a, b in zip(v, rd.simple_coroot(j))]
    return gamma_average(gf, v).coords


@lru_cache(maxsize=None)
def pi1_quotient(gf, subset):
    """X_* modulo the coroots of M_S and the image of (gamma - 1)."""
    rd = gf.datum
    n = rd.rank
    gens = [rd.simple_coroot(j) for j in sorted(subset)]
    for m in gf.cochar_action():
        for i in range(n):
            gens.append(tuple(m[r][i] - (1 if r == i else 0) for r in range(n)))
    return QuotientLattice(gens, n)


def kappa(gf, subset, mu):
    return pi1_quotient(gf, frozenset(subset)).reduce(mu)


@dataclass(frozen=True, order=True)
class KottwitzPoint:
    nu: tuple
    levi: tuple  # S_b, sorted base positions
    kappa: tuple  # class in pi_1(top)_Gamma
    kappa_levi: tuple  # class in pi_1(M_b)_Gamma
    top: tuple = ()

    @property
    def slope(self):
        return SlopeDatum(RatVec(self.nu), frozenset(self.levi), self.kappa)

    def __str__(self):
        nu = "(" + ",".join(str(x) for x in self.nu) + ")"
        return f"nu={nu} M_b={list(self.levi)} kappa={self.kappa}"


def is_basic(b, gf):
    return frozenset(b.levi) == _top(gf, b.top or None)


# --- cocharacter pairs -------------------------------------------------------------

@lru_cache(maxsize=None)
def weyl_orbit(gf, subset, mu):
    """The W_S orbit of an integral cocharacter, sorted."""
    rd = gf.datum
    mu = tuple(mu)
    seen = {mu}
    frontier = [mu]
    while frontier:
        nxt = []
        for v in frontier:
            for j in subset:
                p = dot(rd.simple_root(j), v)
                if p:
                    w = tuple(a - p * b for a, b in zip(v, rd.simple_coroot(j)))
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
        frontier = nxt
    return tuple(sorted(seen))


def dominant_in(gf, subset, v):
    return all(dot(gf.datum.simple_root(j), v) >= 0 for j in subset)


def pair_leq(gf, a, b):
    """The order on cocharacter pairs (S, mu)."""
    (s1, m1), (s2, m2) = a, b
    s1, s2 = frozenset(s1), frozenset(s2)
    if not s1 <= s2 or tuple(m1) not in weyl_orbit(gf, s2, tuple(m2)):
        return False
    diff = [x - y for x, y in zip(theta(gf, s1, tuple(m1)), theta(gf, s2, tuple(m1)))]
    c = coroot_coefficients(gf.datum, s2, diff)
    return all(c[j] > 0 for j in s2 - s1)


def in_sd(gf, subset, mu, top=None):
    """theta_S(mu) is top-dominant with centralizer exactly M_S."""
    top = _top(gf, top)
    th = theta(gf, frozenset(subset), tuple(mu))
    return all(dot(gf.datum.simple_root(j), th) > 0 for j in top - frozenset(subset))


@lru_cache(maxsize=None)
def _sd(gf, mu, top):
    out = []
    orbit = weyl_orbit(gf, top, mu)
    for s in stable_subsets(gf):
        if not s <= top:
            continue
        for v in orbit:
            if dominant_in(gf, s, v) and in_sd(gf, s, v, top) and pair_leq(gf, (s, v), (top, mu)):
                out.append((s, v))
    return tuple(out)


def cochar_pairs_sd(gf, mu, top=None):
    """Pairs (S, mu_S) in SD below (top, mu)."""
    return list(_sd(gf, tuple(mu), _top(gf, top)))


def point_of_pair(gf, subset, mu, top=None):
    top = _top(gf, top)
    subset = frozenset(subset)
    return KottwitzPoint(
        theta(gf, subset, tuple(mu)),
        tuple(sorted(subset)),
        kappa(gf, top, mu),
        kappa(gf, subset, mu),
        tuple(sorted(top)),
    )


def kottwitz_set(gf, mu, top=None):
    """B(top, mu) as the image of SD_mu, sorted by Newton point."""
    top = _top(gf, top)
    if not dominant_in(gf, top, mu):
        raise ValueError("mu must be dominant")
    return sorted({point_of_pair(gf, s, v, top) for s, v in cochar_pairs_sd(gf, mu, top)})


def newton_compatible(gf, b):
    """The Newton point is the slope of the M_b Kottwitz class."""
    return theta(gf, frozenset(b.levi), tuple(b.kappa_levi)) == tuple(b.nu)


def lift(gf, b, subset):
    """The canonical b_S in B(M_S) for M_b inside M_S."""
    subset = frozenset(subset)
    if not frozenset(b.levi) <= subset:
        raise ValueError("M_b must be contained in M_S")
    return KottwitzPoint(b.nu, b.levi, kappa(gf, subset, b.kappa_levi), b.kappa_levi, tuple(sorted(subset)))


# --- endoscopic cocharacter data -----------------------------------------------------

@dataclass(frozen=True)
class EndoCochar:
    levi: tuple
    mu: tuple
    key: tuple  # class key of the M_S triple
    triple: object = field(compare=False, default=None)

    def sort_key(self):
        return (self.levi, self.mu, self.key)


class EndoCochainSum:
    """A finitely supported Z-valued function on endoscopic cocharacter data."""

    def __init__(self, terms=None):
        self.terms = {}
        for k, v in (terms or {}).items():
            self.add_term(k, v)

    def add_term(self, x, c):
        c = self.terms.get(x, 0) + c
        if c:
            self.terms[x] = c
        else:
            self.terms.pop(x, None)

    def copy(self):
        out = EndoCochainSum()
        out.terms = dict(self.terms)
        return out

    def __add__(self, other):
        out = self.copy()
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __neg__(self):
        out = EndoCochainSum()
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n):
        return EndoCochainSum({k: n * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, EndoCochainSum) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return f"EndoCochainSum({len(self.terms)} terms)"


class EndoContext:
    """Classes of Levi triples lying over one elliptic class H^e of G."""

    def __init__(self, he, refined=False):
        if he.is_levi_triple:
            raise ValueError("H^e must be a triple of G")
        self.he = he
        self.gf = he.ambient
        self.refined = refined
        self._classes = {}
        self._ykeys = {}

    def key(self, t):
        return class_key(t, self.refined)

    def classes(self, subset):
        """key -> triple for the M_S triples mapping to H^e, in key order."""
        subset = frozenset(subset)
        if subset not in self._classes:
            found = {}
            for e in fiber(self.he, subset, self.refined):
                t = x_map(e)
                found.setdefault(self.key(t), t)
            self._classes[subset] = dict(sorted(found.items()))
        return self._classes[subset]

    def y_key(self, t, target):
        k = (t, frozenset(target))
        if k not in self._ykeys:
            self._ykeys[k] = self.key(y_map(t, target))
        return self._ykeys[k]

    def cochar(self, subset, mu, t):
        return EndoCochar(tuple(sorted(subset)), tuple(mu), self.key(t), t)

    def top_cochar(self, mu):
        return self.cochar(full_levi(self.gf), mu, self.he)

    def leq(self, a, b):
        """The order on endoscopic cocharacter data."""
        if not pair_leq(self.gf, (a.levi, a.mu), (b.levi, b.mu)):
            return False
        return self.y_key(a.triple, b.levi) == b.key

    def sd(self, mu, top=None, top_triple=None):
        """SD^e below (top_triple, top, mu)."""
        top = _top(self.gf, top)
        tt = self.he if top_triple is None else top_triple
        tkey = self.key(tt)
        out = []
        for s, v in cochar_pairs_sd(self.gf, mu, top):
            for k, t in self.classes(s).items():
                if self.y_key(t, top) == tkey:
                    out.append(self.cochar(s, v, t))
        return out

    def t_map(self, x, top=None):
        if not in_sd(self.gf, x.levi, x.mu, top):
            raise ValueError("not in SD")
        return point_of_pair(self.gf, x.levi, x.mu, top)

    def t_fiber(self, b, mu, top=None, top_triple=None):
        return [x for x in self.sd(mu, top, top_triple) if self.t_map(x, top) == b]

    def below(self, y):
        """All endoscopic cocharacter data x <= y."""
        out = []
        sy = frozenset(y.levi)
        for s in stable_subsets(self.gf):
            if not s <= sy:
                continue
            for v in weyl_orbit(self.gf, sy, y.mu):
                if not dominant_in(self.gf, s, v) or not pair_leq(self.gf, (s, v), (sy, y.mu)):
                    continue
                for k, t in self.classes(s).items():
                    if self.y_key(t, sy) == y.key:
                        out.append(self.cochar(s, v, t))
        return out

    def sign(self, x, b):
        return -1 if (relative_size(self.gf, frozenset(b.levi)) - relative_size(self.gf, frozenset(x.levi))) % 2 else 1

    def m_sum(self, b, mu, top=None, top_triple=None):
        """Signed sum over everything below the T-fiber of b."""
        region = {}
        for y in self.t_fiber(b, mu, top, top_triple):
            for x in self.below(y):
                region[x] = x
        return EndoCochainSum({x: self.sign(x, b) for x in region})


def _map(fn, items, jobs):
    if jobs and jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def m_sum(he, b, mu, refined=False, ctx=None):
    ctx = ctx or EndoContext(he, refined)
    return ctx.m_sum(b, tuple(mu))


def verify_sum_formula(he, mu, refined=False, jobs=1, ctx=None):
    """sum over b in B(G, mu) of M_b, minus (H^e, G, mu)."""
    ctx = ctx or EndoContext(he, refined)
    mu = tuple(mu)
    parts = _map(lambda b: ctx.m_sum(b, mu), kottwitz_set(ctx.gf, mu), jobs)
    total = EndoCochainSum()
    for p in parts:
        total = total + p
    top = EndoCochainSum({ctx.top_cochar(mu): 1})
    return total - top


def induction_index(ctx, subset, b, mu):
    """The set I: (H_S, mu_S, b_S) with b_S in B(M_S, mu_S)."""
    gf = ctx.gf
    subset = frozenset(subset)
    out = []
    bs = lift(gf, b, subset)
    for v in weyl_orbit(gf, full_levi(gf), tuple(mu)):
        if not dominant_in(gf, subset, v):
            continue
        if bs not in kottwitz_set(gf, v, subset):
            continue
        for k, t in ctx.classes(subset).items():
            out.append((t, v, bs))
    return out


def verify_induction(he, subset, b, mu, refined=False, jobs=1, ctx=None):
    """sum over I of M_{H_S, M_S, b_S, mu_S}, minus M_{H^e, G, b, mu}."""
    ctx = ctx or EndoContext(he, refined)
    gf = ctx.gf
    subset = frozenset(subset)
    if not is_stable(gf, subset):
        raise ValueError("the Levi must be Galois stable")
    if not frozenset(b.levi) <= subset:
        raise ValueError("M_b must be contained in M_S")
    items = induction_index(ctx, subset, b, mu)
    parts = _map(lambda it: ctx.m_sum(it[2], it[1], subset, it[0]), items, jobs)
    total = EndoCochainSum()
    for p in parts:
        total = total + p
    return total - ctx.m_sum(b, tuple(mu))


def minuscule_cochars(gf, box=1):
    """Dominant minuscule cocharacters with coordinates in [-box, box]."""
    import itertools

    rd = gf.datum
    out = []
    for v in itertools.product(range(-box, box + 1), repeat=rd.rank):
        if all(abs(dot(r, v)) <= 1 for r in rd.roots) and dominant_in(gf, full_levi(gf), v):
            out.append(tuple(v))
    return out
