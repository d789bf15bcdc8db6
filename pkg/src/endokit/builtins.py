"""Builtin root data and forms, built from explicit lattices.

The isogeny type matters (simply connected versus adjoint derived groups),
so everything is written down on an explicit lattice rather than from a
Cartan type alone.
"""

from __future__ import annotations

from .galois import GaloisForm, split_form, validate_form, opposition
from .lattice import transpose
from .rootdatum import RootDatum, ValidationError, reflect, validate


def _unit(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _scale(k, a):
    return tuple(k * x for x in a)


def from_simple(rank, simple_roots, simple_coroots, name=""):
    """Close a set of simple roots and coroots under the simple reflections."""
    pairs = {tuple(a): tuple(c) for a, c in zip(simple_roots, simple_coroots)}
    frontier = list(pairs.items())
    while frontier:
        nxt = []
        for b, d in frontier:
            for a, c in zip(simple_roots, simple_coroots):
                r, rc = reflect(b, a, c), reflect(d, c, a)
                if r not in pairs:
                    pairs[r] = rc
                    nxt.append((r, rc))
        frontier = nxt
        if len(pairs) > 10**5:
            raise ValidationError("root system does not close")
    roots = sorted(pairs)
    rd = RootDatum(rank, tuple(roots), tuple(pairs[r] for r in roots))
    return validate(rd, base=[tuple(a) for a in simple_roots], name=name)


def gl(n):
    e = [_unit(n, i) for i in range(n)]
    simple = [_sub(e[i], e[i + 1]) for i in range(n - 1)]
    return from_simple(n, simple, simple, f"GL{n}")


def torus(r):
    return validate(RootDatum(r, (), ()), base=[], name=f"T{r}")


def cartan_a(l):
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(l)] for i in range(l)]


def simply_connected(cartan, name=""):
    """X^* = weight lattice (fundamental weight basis), X_* = coroot lattice."""
    l = len(cartan)
    simple = [tuple(row) for row in cartan]
    co = [_unit(l, i) for i in range(l)]
    return from_simple(l, simple, co, name)


def adjoint(cartan, name=""):
    """X^* = root lattice, X_* = coweight lattice."""
    l = len(cartan)
    simple = [_unit(l, i) for i in range(l)]
    co = [tuple(col) for col in transpose(cartan)]
    return from_simple(l, simple, co, name)


def sl(n):
    return simply_connected(cartan_a(n - 1), f"SL{n}")


def pgl(n):
    return adjoint(cartan_a(n - 1), f"PGL{n}")


def sp(m):
    if m % 2 or m < 2:
        raise ValueError("Sp needs an even size")
    n = m // 2
    e = [_unit(n, i) for i in range(n)]
    roots = [_sub(e[i], e[i + 1]) for i in range(n - 1)] + [_scale(2, e[-1])]
    co = [_sub(e[i], e[i + 1]) for i in range(n - 1)] + [e[-1]]
    return from_simple(n, roots, co, f"Sp{m}")


def so(m):
    n = m // 2
    if n < 1:
        raise ValueError("SO needs size at least 2")
    e = [_unit(n, i) for i in range(n)]
    if m % 2:
        roots = [_sub(e[i], e[i + 1]) for i in range(n - 1)] + [e[-1]]
        co = [_sub(e[i], e[i + 1]) for i in range(n - 1)] + [_scale(2, e[-1])]
    elif n == 1:
        return validate(RootDatum(1, (), ()), base=[], name="SO2")
    else:
        roots = [_sub(e[i], e[i + 1]) for i in range(n - 1)] + [_add(e[-2], e[-1])]
        co = roots
    return from_simple(n, roots, co, f"SO{m}")


def gu_datum(n):
    """GL_n roots on Z^n + Z f, the similitude lattice of GU_n."""
    r = n + 1
    e = [_unit(r, i) for i in range(r)]
    simple = [_sub(e[i], e[i + 1]) for i in range(n - 1)]
    return from_simple(r, simple, simple, f"GU{n}")


def unitary(n):
    """U_n: GL_n with Gamma = Z/2 acting by e_i -> -e_{n+1-i}."""
    rd = gl(n)
    theta = tuple(tuple(-1 if i == n - 1 - j else 0 for j in range(n)) for i in range(n))
    return validate_form(GaloisForm(rd, (theta,), None, f"U{n}"))


def gunitary(n):
    """GU_n: e_i -> f - e_{n+1-i}, f -> f."""
    rd = gu_datum(n)
    r = n + 1
    cols = []
    for i in range(n):
        col = [0] * r
        col[n - 1 - i] = -1
        col[n] = 1
        cols.append(col)
    cols.append([0] * n + [1])
    theta = transpose(cols)
    return validate_form(GaloisForm(rd, (theta,), None, f"GU{n}"))


def trivial_action(rd, order, name=None):
    """Z/order acting trivially; available for twisting endoscopic actions."""
    ident = tuple(tuple(int(i == j) for j in range(rd.rank)) for i in range(rd.rank))
    cycle = tuple((i + 1) % order for i in range(order))
    return validate_form(GaloisForm(rd, (ident,), (cycle,), name or rd.name))


def opposition_form(rd, name=None):
    """Z/2 acting by -w_0 (the quasi-split outer form when -w_0 is not inner)."""
    theta = opposition(rd)
    return validate_form(GaloisForm(rd, (theta,), (((1, 0)),), name or rd.name))


DATA = {"GL": gl, "SL": sl, "PGL": pgl, "Sp": sp, "SO": so, "T": torus, "GU": gu_datum}


def builtin_datum(kind, n):
    try:
        make = DATA[kind]
    except KeyError:
        raise ValueError(f"unknown builtin {kind!r}; known: {', '.join(sorted(DATA))}, U") from None
    return make(n)


def builtin_form(kind, n):
    if kind == "U":
        return unitary(n)
    if kind == "GU":
        return gunitary(n)
    return split_form(builtin_datum(kind, n))
