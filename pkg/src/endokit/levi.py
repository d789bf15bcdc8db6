"""Embedded endoscopic data for standard Levi subgroups.

An embedded datum is a triple t of G together with a Weyl element g of G^
such that the conjugate g.t restricts to the Levi M^: writing R' = g R_H and
B' = g B_H, the part R' n R_M is a standard Levi of R' for the base B', is
preserved by the conjugated Galois action, and that action differs from the
ambient one by an element of W(M^).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .endoscopy import (
    ConstructionError,
    EndoTriple,
    _span_roots,
    act_cochar,
    ambient_roots,
    ambient_weyl,
    ambient_weyl_set,
    check_pair,
    class_key,
    conj,
    dual_action,
    dual_datum,
    full_levi,
    h_weyl,
    inverse_matrix,
    kernel_roots,
    normalize,
    out_group,
    s_key,
    subsystem_base,
    triple_from_element,
)
from .galois import is_stable
from .lattice import RatVec, coords_of, dot, invariant_subspace, mat_mul, mat_vec, nullspace, transpose
from .rootdatum import WeylElt, levi_from_cochar, root_perm, standard_levi, weyl_group, _contragredient


@dataclass(frozen=True)
class EmbeddedDatum:
    triple: EndoTriple
    levi: frozenset  # base positions of M
    conjugator: WeylElt
    h_levi: tuple  # roots of B' lying in M^, a base of H_M^

    @property
    def ambient_levi(self):
        return standard_levi(self.triple.ambient.datum, self.levi)

    def conjugated(self):
        return conjugated(self.triple, self.conjugator.matrix)

    def __repr__(self):
        return f"EmbeddedDatum(M{sorted(self.levi)}, g={self.conjugator}, H_M base={self.h_levi})"


@dataclass(frozen=True)
class Conjugate:
    s: object
    roots: frozenset
    base: tuple
    sigma: tuple


def conjugated(t, g):
    """g.t keeping the transported base (not renormalized)."""
    D = t.dual
    perm = root_perm(D, g)
    return Conjugate(
        act_cochar(g, t.s),
        frozenset(perm[i] for i in t.h_roots),
        tuple(perm[i] for i in t.h_base),
        tuple(conj(g, m) for m in t.gamma_H),
    )


def _levi_part(t, levi, c):
    rm = ambient_roots(t.ambient, levi)
    return c.roots & rm, tuple(b for b in c.base if b in rm)


def restricts(t, levi, g):
    """Does Int(g) o eta restrict to an embedded datum for the Levi?"""
    levi = frozenset(levi)
    D = t.dual
    c = conjugated(t, g)
    rpm, bpm = _levi_part(t, levi, c)
    if (_span_roots(D, bpm) if bpm else frozenset()) != rpm:
        return False
    wm = ambient_weyl_set(t.ambient, levi)
    for sig, gam in zip(c.sigma, dual_action(t.ambient)):
        perm = root_perm(D, sig)
        if frozenset(perm[i] for i in rpm) != rpm:
            return False
        if mat_mul(sig, inverse_matrix(gam)) not in wm:
            return False
    return True


def embed(t, levi, g):
    """Build the embedded datum, checking that g restricts."""
    levi = frozenset(levi)
    gm = g.matrix if isinstance(g, WeylElt) else g
    if not restricts(t, levi, gm):
        raise ConstructionError("conjugator does not restrict to the Levi")
    c = conjugated(t, gm)
    w = g if isinstance(g, WeylElt) else next(x for x in weyl_group(t.dual) if x.matrix == gm)
    return EmbeddedDatum(t, levi, w, _levi_part(t, levi, c)[1])


def x_map(e):
    """The restricted triple of M."""
    t = e.triple
    D = t.dual
    c = e.conjugated()
    rpm, _ = _levi_part(t, e.levi, c)
    base = subsystem_base(D, rpm)
    sig = tuple(normalize(D, base, m) for m in c.sigma)
    out = EndoTriple(t.ambient, c.s, rpm, base, sig, e.levi)
    assert kernel_roots(D, c.s, ambient_roots(t.ambient, e.levi)) == rpm
    return out


def y_map(t, target=None):
    """Transport a triple of a Levi to a larger Levi (default: all of G)."""
    gf = t.ambient
    target = full_levi(gf) if target is None else frozenset(target)
    if not t.levi <= target:
        raise ValueError("target Levi must contain the source Levi")
    D = t.dual
    roots = kernel_roots(D, t.s, ambient_roots(gf, target))
    base = subsystem_base(D, roots)
    sig = tuple(normalize(D, base, m) for m in t.gamma_H)
    return EndoTriple(gf, t.s, roots, base, sig, target)


def ye_map(e):
    return e.triple


# --- W(M*, H) and the fiber ------------------------------------------------------

def central_span(gf, levi):
    """Rational span of the Gamma-fixed part of Z(M^), inside X_*(D)."""
    D = dual_datum(gf)
    n = D.rank
    rows = [D.roots[D.base[k]] for k in sorted(levi)]
    for m in gf.action:  # Gamma on X_*(D) = X^*(T)
        rows.extend(tuple(x - (1 if i == j else 0) for j, x in enumerate(row)) for i, row in enumerate(m))
    return [tuple(v) for v in nullspace(rows, n)]


def w_mh(t, levi):
    """All w in W(G^) such that w^-1 V_M is fixed by each Galois generator of H up to W(H^)."""
    levi = frozenset(levi)
    vm = central_span(t.ambient, levi)
    hw = h_weyl(t)
    out = []
    for w in ambient_weyl(t.ambient, t.levi):
        wt = transpose(w.matrix)  # w^-1 on X_*(D)
        moved = [mat_vec(wt, v) for v in vm]
        ok = True
        for sig in t.gamma_H:
            if not any(
                all(mat_vec(_contragredient(mat_mul(h, sig)), u) == u for u in moved) for h in hw
            ):
                ok = False
                break
        if ok:
            out.append(w)
    return out


def aut_group(t, refined=False):
    return out_group(t, refined).stabilizer


def double_cosets(left, elements, right):
    """Representatives of left \\ elements / right, first in the given order."""
    seen, reps = set(), []
    for w in elements:
        if w.matrix in seen:
            continue
        reps.append(w)
        for a in left:
            aw = mat_mul(a, w.matrix)
            for b in right:
                seen.add(mat_mul(aw, b))
    return reps


def fiber_cosets(t, levi, refined=False):
    levi = frozenset(levi)
    left = [w.matrix for w in ambient_weyl(t.ambient, levi)]
    right = [w.matrix for w in aut_group(t, refined)]
    return double_cosets(left, w_mh(t, levi), right)


def fiber(t, levi, refined=False):
    """One embedded datum per class over t: double-coset representatives,
    each corrected on the right by the first h in W(H^) making it restrict."""
    if t.is_levi_triple:
        raise ValueError("fiber expects a triple of G")
    levi = frozenset(levi)
    D = t.dual
    W = {w.matrix: w for w in weyl_group(D)}
    out = []
    for w in fiber_cosets(t, levi, refined):
        for h in h_weyl(t):
            g = mat_mul(w.matrix, h)
            if restricts(t, levi, g):
                out.append(embed(t, levi, W[g]))
                break
        else:
            raise ConstructionError(f"coset of {w} contains no restricting conjugator")
    return out


def restricting_conjugators(t, levi):
    levi = frozenset(levi)
    return [w for w in weyl_group(t.dual) if restricts(t, levi, w.matrix)]


def embedded_isomorphic(e1, e2, refined=False):
    """x in W(M^) carrying the conjugated triple of e1 onto that of e2, or None."""
    if e1.triple.ambient != e2.triple.ambient or e1.levi != e2.levi:
        return None
    t = e1.triple
    D = t.dual
    c1, c2 = e1.conjugated(), e2.conjugated()
    base2 = subsystem_base(D, c2.roots)
    target = tuple(normalize(D, base2, m) for m in c2.sigma)
    key2 = s_key(t.ambient, c2.s, refined)
    for x in ambient_weyl(t.ambient, e1.levi):
        perm = root_perm(D, x.matrix)
        if frozenset(perm[i] for i in c1.roots) != c2.roots:
            continue
        if s_key(t.ambient, act_cochar(x.matrix, c1.s), refined) != key2:
            continue
        if tuple(normalize(D, base2, conj(x.matrix, m)) for m in c1.sigma) == target:
            return x
    return None


def inner_class_count(e, refined=False):
    """|Out(H)| / |Out(H_M)|: inner classes of embedded data in the class of e."""
    big = out_group(e.triple, refined).order
    small = out_group(x_map(e), refined).order
    if big % small:
        raise ArithmeticError(f"|Out(H_M)| = {small} does not divide |Out(H)| = {big}")
    return big // small


# --- slopes and acceptability ------------------------------------------------------

@dataclass(frozen=True)
class SlopeDatum:
    nu: RatVec
    levi: frozenset
    kappa: tuple = ()


def slope_datum(rd, nu, kappa=()):
    nu = RatVec(coords_of(nu))
    return SlopeDatum(nu, levi_from_cochar(rd, nu).subset, tuple(kappa))


def outside_roots(rd, levi):
    inside = standard_levi(rd, levi).roots
    return [i for i in range(len(rd.roots)) if i not in inside]


def is_acceptable(w, nu, M, G):
    """Sign agreement of <a, w> and <a, nu> on every root a of G outside M."""
    subset = M.subset if hasattr(M, "subset") else frozenset(M)
    if levi_from_cochar(G, nu).subset != subset:
        raise ValueError("M must be the centralizer Levi of nu")
    wc, nc = coords_of(w), coords_of(nu)
    for i in outside_roots(G, subset):
        r = G.roots[i]
        if (dot(r, nc) > 0) != (dot(r, wc) > 0):
            return False
    return True


def acceptance_threshold(G, nu, t):
    """Least s0 with s nu + t acceptable exactly for s > s0 (None if nu is central)."""
    vals = [
        -Fraction(dot(G.roots[i], coords_of(t))) / dot(G.roots[i], coords_of(nu))
        for i in outside_roots(G, levi_from_cochar(G, nu).subset)
        if dot(G.roots[i], coords_of(nu)) > 0
    ]
    return max(vals) if vals else None


def analytic_bound(G, nu, t):
    """max |<a, t>| / |<a, nu>| over roots outside the centralizer of nu."""
    vals = [
        abs(Fraction(dot(G.roots[i], coords_of(t)))) / abs(dot(G.roots[i], coords_of(nu)))
        for i in outside_roots(G, levi_from_cochar(G, nu).subset)
    ]
    return max(vals) if vals else None


def _primitive(row):
    den = 1
    for x in row:
        den = den * x.denominator // _g(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = 0
    for x in ints:
        g = _g(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _g(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def strict_cone_feasible(rows):
    """Is there c with row . c > 0 for every row?  Exact Fourier-Motzkin."""
    rows = {_primitive([Fraction(x) for x in r]) for r in rows}
    if not rows:
        return True
    n = len(next(iter(rows)))
    for var in range(n):
        pos = [r for r in rows if r[var] > 0]
        neg = [r for r in rows if r[var] < 0]
        new = {r for r in rows if r[var] == 0}
        for p in pos:
            for q in neg:
                comb = tuple(-q[var] * a + p[var] * b for a, b in zip(p, q))
                new.add(_primitive([Fraction(x) for x in comb]))
        rows = new
    return not rows


def witness_space(e):
    """Valuations of rational points of the maximally split torus of H_M, in X_*(T)_Q."""
    tm = x_map(e)
    return [tuple(v) for v in invariant_subspace(tm.gamma_H, tm.dual.rank)]


def eff_filter(fib, slope, G=None):
    """Embedded data admitting a nu-acceptable valuation witness."""
    if not fib:
        return []
    rd = fib[0].triple.ambient.datum
    if not slope.levi <= fib[0].levi:
        return []
    nu = coords_of(slope.nu)
    signs = [(rd.roots[i], dot(rd.roots[i], nu) > 0) for i in outside_roots(rd, slope.levi)]
    kept = []
    for e in fib:
        tm = x_map(e)
        if all(mat_vec(m, nu) == tuple(nu) for m in tm.gamma_H):
            kept.append(e)
            continue
        basis = witness_space(e)
        rows = []
        for r, positive in signs:
            row = [dot(r, v) for v in basis]
            rows.append(row if positive else [-x for x in row])
        if basis and strict_cone_feasible(rows):
            kept.append(e)
    return kept


# --- semisimple pairs through a Levi -------------------------------------------------

def ss_pair_via_levi(G, levi, p):
    """Build the triple of a pair inside the Levi first, then transport to G."""
    levi = frozenset(levi)
    roots = check_pair(G, p)
    if not roots <= standard_levi(G.datum, levi).roots:
        raise ValueError("the centralizer is not contained in the Levi")
    if not is_stable(G, levi):
        raise ValueError("the Levi is not Galois stable")
    return y_map(triple_from_element(G, p.lam, levi=levi))


def same_class(t1, t2, refined=False):
    return class_key(t1, refined) == class_key(t2, refined)
