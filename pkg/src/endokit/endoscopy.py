"""Refined endoscopic triples, computed on the dual side.

Everything happens inside the dual datum D of the ambient group G: roots of D
are the coroots of G (same indices), a torsion point ``s`` lives in
X_*(D) (x) Q/Z = X^*(T) (x) Q/Z, and the twisted Galois action of an
endoscopic group is stored as one matrix on X^*(D) per Galois generator.

Triples may also be triples for a standard Levi M of G (``levi`` is then a
subset of base positions); their dual group M^ sits inside G^ with the same
root indices.

Two comparison modes are supported.  By default ``s`` is compared modulo the
centre of the top dual group G^ (so translating ``s`` by a central element
gives the same class); with ``refined=True`` it is compared exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .galois import GaloisForm, defines_homomorphism
from .lattice import (
    TorsionVec,
    coords_of,
    dot,
    frac_part,
    identity,
    mat_mul,
    mat_vec,
    nullspace,
    solve,
    transpose,
)
from .rootdatum import (
    _contragredient,
    dual,
    info,
    levi_roots,
    reduced_word,
    reflection_matrix,
    root_perm,
    weyl_group,
    WeylElt,
)


class ConstructionError(ValueError):
    pass


# --- the dual side ------------------------------------------------------------

@lru_cache(maxsize=None)
def dual_datum(gf):
    return dual(gf.datum)


@lru_cache(maxsize=None)
def dual_action(gf):
    """Galois generators acting on X^*(D) = X_*(T)."""
    return gf.cochar_action()


def full_levi(gf):
    return frozenset(range(len(gf.datum.base)))


@lru_cache(maxsize=None)
def ambient_roots(gf, levi):
    return levi_roots(dual_datum(gf), levi)


@lru_cache(maxsize=None)
def ambient_weyl(gf, levi):
    """W(M^) for the standard Levi ``levi``, in canonical order."""
    return tuple(w for w in weyl_group(dual_datum(gf)) if set(w.word) <= levi)


@lru_cache(maxsize=None)
def ambient_weyl_set(gf, levi):
    return frozenset(w.matrix for w in ambient_weyl(gf, levi))


def act_cochar(m, s):
    """Apply a matrix on X^*(D) to a point of X_*(D) via the contragredient."""
    out = mat_vec(_contragredient(m), coords_of(s))
    return type(s)(out) if isinstance(s, TorsionVec) else out


def inverse_matrix(m):
    return transpose(_contragredient(m))


def conj(x, m):
    return mat_mul(mat_mul(x, m), inverse_matrix(x))


# --- root subsystems of D ------------------------------------------------------

@lru_cache(maxsize=None)
def subsystem_base(D, roots):
    """The base of a closed subsystem inside the positive roots of D."""
    pos = [i for i in sorted(roots) if i in info(D).positive]
    posvec = {D.roots[i] for i in pos}
    out = []
    for i in pos:
        r = D.roots[i]
        if not any(
            tuple(a - b for a, b in zip(r, D.roots[j])) in posvec for j in pos if j != i
        ):
            out.append(i)
    return tuple(out)


@lru_cache(maxsize=None)
def _height_functional(D, base):
    f = solve([D.roots[b] for b in base], [1] * len(base))
    return f if f is not None else ()


def positive_in(D, base, i):
    f = _height_functional(D, base)
    return dot(D.roots[i], f) > 0


@lru_cache(maxsize=None)
def _reflection_perm(D, i):
    m = reflection_matrix(D.roots[i], D.coroots[i])
    return m, root_perm(D, m)


@lru_cache(maxsize=None)
def subsystem_weyl(D, base):
    """W of the subsystem with the given base, ordered by (length, word)."""
    refl = [_reflection_perm(D, b)[0] for b in base]
    ident = identity(D.rank)
    seen = {ident: ()}
    layer = {ident: ()}
    while layer:
        nxt = {}
        for m, w in layer.items():
            for k, s in enumerate(refl):
                x = mat_mul(m, s)
                if x in seen:
                    continue
                cand = w + (k,)
                if x not in nxt or cand < nxt[x]:
                    nxt[x] = cand
        seen.update(nxt)
        layer = nxt
    return tuple(sorted(seen, key=lambda m: (len(seen[m]), seen[m])))


@lru_cache(maxsize=None)
def subsystem_weyl_set(D, base):
    return frozenset(subsystem_weyl(D, base))


def normalize(D, base, m):
    """Left-multiply ``m`` by an element of W(base) so that it preserves ``base``.

    ``m`` must permute the roots of D and preserve the subsystem spanned by
    ``base``; the result is unique.
    """
    base = tuple(base)
    if not base:
        return m
    perm = root_perm(D, m)
    subroots = _span_roots(D, base)
    pos = {i for i in subroots if positive_in(D, base, i)}
    while True:
        inv = {p: i for i, p in enumerate(perm)}
        for b in base:
            if inv[b] not in pos:
                rm, rp = _reflection_perm(D, b)
                m = mat_mul(rm, m)
                perm = tuple(rp[p] for p in perm)
                break
        else:
            return m


@lru_cache(maxsize=None)
def _span_roots(D, base):
    """Roots of D in the subsystem generated by ``base``."""
    out = set(base)
    frontier = list(base)
    while frontier:
        nxt = []
        for i in frontier:
            for b in base:
                j = _reflection_perm(D, b)[1][i]
                if j not in out:
                    out.add(j)
                    nxt.append(j)
        frontier = nxt
    return frozenset(out)


def kernel_roots(D, s, roots):
    return frozenset(i for i in roots if frac_part(dot(D.roots[i], coords_of(s))) == 0)


# --- triples --------------------------------------------------------------------

@dataclass(frozen=True)
class EndoTriple:
    ambient: GaloisForm
    s: TorsionVec
    h_roots: frozenset
    h_base: tuple
    gamma_H: tuple  # one matrix on X^*(D) per Galois generator
    levi: frozenset = field(default=None)

    def __post_init__(self):
        if self.levi is None:
            object.__setattr__(self, "levi", full_levi(self.ambient))
        object.__setattr__(self, "levi", frozenset(self.levi))
        object.__setattr__(self, "s", TorsionVec(coords_of(self.s)))

    @property
    def dual(self):
        return dual_datum(self.ambient)

    @property
    def is_levi_triple(self):
        return self.levi != full_levi(self.ambient)

    def twist_words(self):
        """The Weyl element w_k with gamma_H(k) = w_k gamma_k, as a reduced word."""
        D = self.dual
        out = []
        for m, g in zip(self.gamma_H, dual_action(self.ambient)):
            out.append(reduced_word(D, mat_mul(m, inverse_matrix(g))))
        return tuple(out)

    def __repr__(self):
        D = self.dual
        hb = ",".join(str(D.roots[i]) for i in self.h_base)
        lv = "" if not self.is_levi_triple else f" in M{sorted(self.levi)}"
        return f"EndoTriple({self.ambient.label}{lv}: s={self.s}, base=[{hb}], twist={self.twist_words()})"


def h_weyl(t):
    return subsystem_weyl(t.dual, t.h_base)


def _check_homomorphism(gf, mats):
    return defines_homomorphism(gf, tuple(mats), gf.datum.rank)


def triple_from_element(G, s, twist=None, levi=None):
    """The triple with H^ = Z(s)^0 and Galois action gamma -> twist(gamma) gamma.

    ``twist`` gives one Weyl element (WeylElt or matrix) of D per generator;
    it defaults to the identity.
    """
    D = dual_datum(G)
    levi = full_levi(G) if levi is None else frozenset(levi)
    s = TorsionVec(coords_of(s))
    if len(s) != D.rank:
        raise ConstructionError(f"s has rank {len(s)}, expected {D.rank}")
    roots = ambient_roots(G, levi)
    h_roots = kernel_roots(D, s, roots)
    h_base = subsystem_base(D, h_roots)
    gens = dual_action(G)
    if twist is None:
        twist = [identity(D.rank)] * len(gens)
    if len(twist) != len(gens):
        raise ConstructionError(f"need {len(gens)} twist elements, got {len(twist)}")
    wl = ambient_weyl_set(G, levi)
    mats = []
    for k, (w, g) in enumerate(zip(twist, gens)):
        wm = w.matrix if isinstance(w, WeylElt) else tuple(map(tuple, w))
        if wm not in wl:
            raise ConstructionError(f"twist for generator {k} is not in the ambient Weyl group")
        sigma = mat_mul(wm, g)
        if act_cochar(sigma, s) != s:
            raise ConstructionError(f"twisted generator {k} moves s")
        perm = root_perm(D, sigma)
        if frozenset(perm[i] for i in h_roots) != h_roots:
            raise ConstructionError(f"twisted generator {k} does not stabilize the kernel of s")
        mats.append(normalize(D, h_base, sigma))
    if not _check_homomorphism(G, mats):
        raise ConstructionError("twisted generators do not define an action of Gamma")
    return EndoTriple(G, s, h_roots, h_base, tuple(mats), levi)


def trivial_triple(G, levi=None):
    return triple_from_element(G, (0,) * G.datum.rank, levi=levi)


def is_elliptic(t):
    D = t.dual
    n = D.rank
    rows = []
    for m in t.gamma_H:
        c = _contragredient(m)
        rows.extend(tuple(x - (1 if i == j else 0) for j, x in enumerate(row)) for i, row in enumerate(c))
    rows.extend(D.roots[b] for b in t.h_base)
    fixed = nullspace(rows, n)
    lroots = [D.roots[i] for i in ambient_roots(t.ambient, t.levi)]
    return all(dot(r, v) == 0 for v in fixed for r in lroots)


# --- comparison ------------------------------------------------------------------

def s_key(gf, s, refined=False):
    """Invariant of s: exact coordinates, or its values on the simple roots of G^."""
    if refined:
        return tuple(coords_of(TorsionVec(coords_of(s))))
    D = dual_datum(gf)
    sc = coords_of(s)
    return tuple(frac_part(dot(D.roots[b], sc)) for b in D.base)


def conjugate_triple_data(t, x):
    """(x s, x R_H, x sigma x^-1 normalized) for a Weyl element matrix x."""
    D = t.dual
    perm = root_perm(D, x)
    roots = frozenset(perm[i] for i in t.h_roots)
    base = subsystem_base(D, roots)
    sig = tuple(normalize(D, base, conj(x, m)) for m in t.gamma_H)
    return act_cochar(x, t.s), roots, base, sig


@lru_cache(maxsize=None)
def class_key(t, refined=False):
    """A complete isomorphism invariant: the least conjugate under W(ambient)."""
    best = None
    for w in ambient_weyl(t.ambient, t.levi):
        s, roots, _, sig = conjugate_triple_data(t, w.matrix)
        k = (s_key(t.ambient, s, refined), tuple(sorted(roots)), sig)
        if best is None or k < best[0]:
            best = (k, w)
    return best[0]


@lru_cache(maxsize=None)
def canonical_representative(t, refined=False):
    """The conjugate realizing class_key (same class, canonical data)."""
    key = class_key(t, refined)
    for w in ambient_weyl(t.ambient, t.levi):
        s, roots, base, sig = conjugate_triple_data(t, w.matrix)
        if (s_key(t.ambient, s, refined), tuple(sorted(roots)), sig) == key:
            return EndoTriple(t.ambient, s, roots, base, sig, t.levi), w
    raise AssertionError("unreachable")  # pragma: no cover


def _matches(t1, t2, x, refined):
    s, roots, _, sig = conjugate_triple_data(t1, x)
    return roots == t2.h_roots and sig == t2.gamma_H and s_key(t1.ambient, s, refined) == s_key(
        t2.ambient, t2.s, refined
    )


def is_isomorphic(t1, t2, refined=False):
    """A Weyl element x of the ambient with x t1 = t2, or None.

    x s1 agrees with s2 modulo the centre of G^ (exactly when refined), x maps
    H1^ onto H2^, and the conjugated Galois action agrees modulo W(H2^).
    """
    if t1.ambient != t2.ambient or t1.levi != t2.levi:
        return None
    if len(t1.h_roots) != len(t2.h_roots):
        return None
    for w in ambient_weyl(t1.ambient, t1.levi):
        if _matches(t1, t2, w.matrix, refined):
            return w
    return None


@dataclass(frozen=True)
class OutGroup:
    stabilizer: tuple  # WeylElt, the Weyl-level automorphism group Aut(H, eta)
    reps: tuple  # one WeylElt per coset of W(H^)

    @property
    def order(self):
        return len(self.reps)


@lru_cache(maxsize=None)
def out_group(t, refined=False):
    stab = tuple(w for w in ambient_weyl(t.ambient, t.levi) if _matches(t, t, w.matrix, refined))
    hw = h_weyl(t)
    covered, reps = set(), []
    for w in stab:
        if w.matrix in covered:
            continue
        reps.append(w)
        covered.update(mat_mul(w.matrix, h) for h in hw)
    return OutGroup(stab, tuple(reps))


# --- enumeration ----------------------------------------------------------------

def _torsion_points(rank, n):
    for c in itertools.product(range(n), repeat=rank):
        s = TorsionVec(tuple(Fraction(x, n) for x in c))
        if s.order() == n:
            yield s


def _orbit_min(gf, levi, s):
    return min(coords_of(act_cochar(w.matrix, s)) for w in ambient_weyl(gf, levi))


def twists_for(G, s, levi=None):
    """All triples for s (one per normalized twist) that define an action of Gamma."""
    D = dual_datum(G)
    levi = full_levi(G) if levi is None else frozenset(levi)
    roots = ambient_roots(G, levi)
    h_roots = kernel_roots(D, s, roots)
    h_base = subsystem_base(D, h_roots)
    options = []
    for g in dual_action(G):
        found = {}
        for w in ambient_weyl(G, levi):
            sigma = mat_mul(w.matrix, g)
            if act_cochar(sigma, s) != s:
                continue
            perm = root_perm(D, sigma)
            if frozenset(perm[i] for i in h_roots) != h_roots:
                continue
            found.setdefault(normalize(D, h_base, sigma), None)
        options.append(list(found))
    out = []
    for mats in itertools.product(*options):
        if _check_homomorphism(G, mats):
            out.append(EndoTriple(G, s, h_roots, h_base, tuple(mats), levi))
    return out


def enumerate_triples(G, order_bound, levi=None, elliptic=None, refined=False):
    """One triple per isomorphism class with s of order <= order_bound.

    ``elliptic`` may be True/False to filter; None keeps everything.  The
    result is sorted by class key.
    """
    if order_bound < 1:
        raise ValueError("order_bound must be at least 1")
    levi = full_levi(G) if levi is None else frozenset(levi)
    rank = G.datum.rank
    seen_s = set()
    classes = {}
    for n in range(1, order_bound + 1):
        for s in _torsion_points(rank, n):
            m = _orbit_min(G, levi, s)
            if m in seen_s:
                continue
            seen_s.add(m)
            for t in twists_for(G, s, levi):
                if elliptic is not None and is_elliptic(t) != elliptic:
                    continue
                classes.setdefault(class_key(t, refined), t)
    return [classes[k] for k in sorted(classes)]


def enumerate_elliptic(G, order_bound, refined=False):
    return enumerate_triples(G, order_bound, elliptic=True, refined=refined)


def forget_refinement(t):
    """The non-refined class key of a (refined) triple."""
    return class_key(t, refined=False)


# --- semisimple pairs ------------------------------------------------------------

@dataclass(frozen=True)
class SSPair:
    """A torus element (root values: torsion part and valuations) with lambda."""

    torsion: TorsionVec
    valuation: tuple
    lam: TorsionVec

    def __post_init__(self):
        object.__setattr__(self, "torsion", TorsionVec(coords_of(self.torsion)))
        object.__setattr__(self, "valuation", tuple(Fraction(x) for x in coords_of(self.valuation)))
        object.__setattr__(self, "lam", TorsionVec(coords_of(self.lam)))


def centralizer_roots(G, p):
    rd = G.datum
    return frozenset(
        i
        for i, r in enumerate(rd.roots)
        if frac_part(dot(r, p.torsion.coords)) == 0 and dot(r, p.valuation) == 0
    )


def check_pair(G, p):
    roots = centralizer_roots(G, p)
    for k, m in enumerate(G.action):
        perm = root_perm(G.datum, m)
        if frozenset(perm[i] for i in roots) != roots:
            raise ConstructionError(f"centralizer is not stable under generator {k}")
        if TorsionVec(mat_vec(m, p.lam.coords)) != p.lam:
            raise ConstructionError(f"lambda is not fixed by generator {k}")
    D = dual_datum(G)
    for i in roots:
        if frac_part(dot(D.roots[i], p.lam.coords)) != 0:
            raise ConstructionError(f"lambda is not central in the centralizer (root {i})")
    return roots


def ss_pair_to_triple(G, p, levi=None):
    check_pair(G, p)
    return triple_from_element(G, p.lam, levi=levi)
