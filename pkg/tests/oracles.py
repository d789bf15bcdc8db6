"""Brute-force reference computations used by the tests.

Each oracle works from definitions and full enumeration; none of them calls
the double-coset, Levi-transfer or cocharacter-pair machinery it checks.
"""

from fractions import Fraction
from itertools import product

from endokit.endoscopy import ambient_weyl, dual_datum, h_weyl, normalize, s_key
from endokit.lattice import dot, mat_inv, mat_mul, mat_vec, nullspace, transpose
from endokit.levi import restricts, x_map
from endokit.rootdatum import root_perm, standard_levi, weyl_group


def orbits(items, moves):
    """Orbits of a finite set of matrices under ``moves(m) -> iterable of matrices``."""
    items = set(items)
    seen, count = set(), 0
    for m in sorted(items):
        if m in seen:
            continue
        count += 1
        stack = [m]
        seen.add(m)
        while stack:
            x = stack.pop()
            for y in moves(x):
                if y in items and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def stabilizer(t, refined=False):
    """All w in W(ambient) with w.t isomorphic to t, straight from the definition."""
    D = t.dual
    gf = t.ambient
    out = []
    for w in ambient_weyl(gf, t.levi):
        m = w.matrix
        perm = root_perm(D, m)
        if frozenset(perm[i] for i in t.h_roots) != t.h_roots:
            continue
        ms = tuple(Fraction(x) for x in mat_vec(transpose(mat_inv(m)), t.s.coords))
        if s_key(gf, ms, refined) != s_key(gf, t.s, refined):
            continue
        mi = mat_inv(m)
        if all(normalize(D, t.h_base, mat_mul(mat_mul(m, sig), mi)) == sig for sig in t.gamma_H):
            out.append(m)
    return out


def restricting(t, levi):
    return [w.matrix for w in weyl_group(t.dual) if restricts(t, levi, w.matrix)]


def brute_fiber_count(t, levi, refined=False):
    """Restricting conjugators modulo W(M^) on the left and Aut(t) on the right."""
    left = [w.matrix for w in ambient_weyl(t.ambient, frozenset(levi))]
    right = stabilizer(t, refined)

    def moves(g):
        for x in left:
            yield mat_mul(x, g)
        for a in right:
            yield mat_mul(g, a)

    return orbits(restricting(t, levi), moves)


def brute_inner_count(t, levi):
    """Restricting conjugators modulo W(M^) on the left and W(H^) on the right."""
    left = [w.matrix for w in ambient_weyl(t.ambient, frozenset(levi))]
    right = list(h_weyl(t))

    def moves(g):
        for x in left:
            yield mat_mul(x, g)
        for h in right:
            yield mat_mul(g, h)

    return orbits(restricting(t, levi), moves)


def brute_w_mh(t, levi):
    """W(M*, H) by testing every Weyl element against the definition."""
    rd = t.ambient.datum
    D = t.dual
    lv = standard_levi(rd, frozenset(levi))
    # V_M: Gamma-fixed vectors of X_*(D) = X^*(T) orthogonal to the coroots of the Levi
    rows = [rd.coroots[i] for i in sorted(lv.roots)]
    for m in t.ambient.action:
        rows += [[x - (i == j) for j, x in enumerate(row)] for i, row in enumerate(m)]
    vm = nullspace(rows or [[0] * rd.rank], rd.rank)
    out = []
    for w in weyl_group(D):
        moved = [mat_vec(transpose(w.matrix), v) for v in vm]
        good = True
        for sig in t.gamma_H:
            if not any(
                all(mat_vec(transpose(mat_inv(mat_mul(h, sig))), u) == tuple(u) for u in moved)
                for h in h_weyl(t)
            ):
                good = False
        if good:
            out.append(w.matrix)
    return out


def newton_polygons_gl(mu):
    """B(GL_n, mu) as Newton points: decreasing slopes d_i/n_i, integral break points,
    same endpoint as mu and lying on or below the polygon of mu."""
    n = len(mu)
    total = sum(mu)
    lo, hi = min(mu), max(mu)
    found = set()

    def rec(pos, height, last, slopes):
        if pos == n:
            if height == total:
                found.add(tuple(slopes))
            return
        for size in range(1, n - pos + 1):
            for d in range(lo * size, hi * size + 1):
                sl = Fraction(d, size)
                if last is not None and sl >= last:
                    continue
                new = slopes + [sl] * size
                # polygon of nu stays below that of mu at every vertex
                if all(sum(new[:k]) <= sum(mu[:k]) for k in range(1, len(new) + 1)):
                    rec(pos + size, height + d, sl, new)

    rec(0, 0, None, [])
    return sorted(found)


def grid_feasible(e, nu, levi_b, box=3):
    """Is there an integral witness in a box, fixed by the restricted Galois action,
    whose signs agree with nu on every root of G outside M_b?"""
    rd = e.triple.ambient.datum
    tm = x_map(e)
    inside = standard_levi(rd, frozenset(levi_b)).roots
    outside = [r for i, r in enumerate(rd.roots) if i not in inside]
    for v in product(range(-box, box + 1), repeat=rd.rank):
        if any(mat_vec(m, v) != v for m in tm.gamma_H):
            continue
        if all((dot(r, v) > 0) == (dot(r, nu) > 0) and dot(r, v) != 0 for r in outside):
            return True
    return False


def signs_agree(rd, w, nu):
    """Direct sign comparison on all roots where nu is nonzero."""
    for r in rd.roots:
        a = sum(Fraction(x) * y for x, y in zip(r, nu))
        if a == 0:
            continue
        b = sum(Fraction(x) * y for x, y in zip(r, w))
        if (a > 0) != (b > 0) or b == 0:
            return False
    return True


def centralizer_coroots(G, s, levi=None):
    """Indices i with <coroot_i, s> integral (optionally inside a Levi), from G's coroots."""
    rd = G.datum
    allowed = standard_levi(rd, frozenset(levi)).roots if levi is not None else range(len(rd.roots))
    return frozenset(i for i in allowed if sum(Fraction(a) * b for a, b in zip(rd.coroots[i], s)).denominator == 1)


def dual_roots_match(G):
    """The dual datum lists G's coroots as roots with the same indices."""
    return dual_datum(G).roots == G.datum.coroots
