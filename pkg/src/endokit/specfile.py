"""Group-spec files.

A spec is a small line-oriented text file; the README documents the full
grammar.  Example::

    name = U3
    group = GL 3
    [galois]
    shortcut = opposition
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .builtins import builtin_datum, gunitary, trivial_action, unitary
from .galois import GaloisForm, closure, group_elements, split_form, validate_form, opposition
from .lattice import identity, mat_mul
from .rootdatum import RootDatum, ValidationError, validate


class SpecError(ValueError):
    def __init__(self, line, key, message):
        self.line, self.key = line, key
        where = f"line {line}" + (f" ({key})" if key else "")
        super().__init__(f"{where}: {message}")


@dataclass
class GroupSpec:
    name: str = ""
    group: tuple | None = None  # (kind, n)
    rank: int | None = None
    roots: list = field(default_factory=list)  # (root, coroot)
    base: list = field(default_factory=list)
    shortcut: str | None = None
    order: int | None = None
    generators: list = field(default_factory=list)
    lines: dict = field(default_factory=dict)  # key -> first line number
    has_galois: bool = False


_TOP_KEYS = {"name", "group", "rank", "root", "base"}
_GALOIS_KEYS = {"shortcut", "order", "generator"}


def _ints(text, line, key):
    try:
        return tuple(int(x) for x in text.split())
    except ValueError:
        raise SpecError(line, key, f"expected integers, got {text!r}") from None


def parse_text(text):
    """Parse without building the form."""
    spec = GroupSpec()
    section = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line != "[galois]":
                raise SpecError(ln, None, f"unknown section {line}")
            if spec.has_galois:
                raise SpecError(ln, None, "duplicate [galois] section")
            section, spec.has_galois = "galois", True
            continue
        m = re.fullmatch(r"([a-z]+)\s*=\s*(.*)", line)
        if not m:
            raise SpecError(ln, None, f"expected 'key = value', got {line!r}")
        key, val = m.group(1), m.group(2).strip()
        allowed = _GALOIS_KEYS if section == "galois" else _TOP_KEYS
        if key not in allowed:
            raise SpecError(ln, key, "unknown key" + (" in [galois]" if section else ""))
        spec.lines.setdefault(key, ln)
        if key == "name":
            spec.name = val
        elif key == "group":
            parts = val.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise SpecError(ln, key, "expected 'KIND n', e.g. 'GL 3'")
            spec.group = (parts[0], int(parts[1]))
        elif key == "rank":
            if not val.isdigit():
                raise SpecError(ln, key, "rank must be a non-negative integer")
            spec.rank = int(val)
        elif key == "root":
            if val.count(":") != 1:
                raise SpecError(ln, key, "expected 'root coords : coroot coords'")
            a, c = val.split(":")
            spec.roots.append((_ints(a, ln, key), _ints(c, ln, key), ln))
        elif key == "base":
            spec.base.append((_ints(val, ln, key), ln))
        elif key == "shortcut":
            spec.shortcut = val
        elif key == "order":
            if not val.isdigit() or int(val) < 1:
                raise SpecError(ln, key, "order must be a positive integer")
            spec.order = int(val)
        elif key == "generator":
            rows = [_ints(r, ln, key) for r in val.split("/")]
            spec.generators.append((rows, ln))
    return spec


def _datum(spec):
    if spec.group and (spec.rank is not None or spec.roots):
        raise SpecError(spec.lines.get("rank", spec.lines.get("root")), None, "give either 'group' or an explicit lattice")
    if spec.group:
        kind, n = spec.group
        if kind in ("U",):
            return None
        try:
            return builtin_datum(kind, n)
        except (ValueError, ValidationError) as exc:
            raise SpecError(spec.lines["group"], "group", str(exc)) from None
    if spec.rank is None:
        raise SpecError(1, "rank", "missing 'group' or 'rank'")
    for r, c, ln in spec.roots:
        if len(r) != spec.rank or len(c) != spec.rank:
            raise SpecError(ln, "root", f"expected {spec.rank} coordinates on each side")
    for b, ln in spec.base:
        if len(b) != spec.rank:
            raise SpecError(ln, "base", f"expected {spec.rank} coordinates")
    rd = RootDatum(spec.rank, [r for r, _, _ in spec.roots], [c for _, c, _ in spec.roots])
    try:
        return validate(rd, base=[b for b, _ in spec.base] or None, name=spec.name)
    except ValidationError as exc:
        raise SpecError(spec.lines.get("root", 1), "root", str(exc)) from None


def build_form(spec):
    rd = _datum(spec)
    name = spec.name or (f"{spec.group[0]}{spec.group[1]}" if spec.group else "")
    gl = spec.lines.get("shortcut") or spec.lines.get("generator") or spec.lines.get("order")
    try:
        if rd is None:  # unitary builtin
            if spec.has_galois:
                raise SpecError(gl or 1, "shortcut", "U n carries its own Galois action")
            gf = unitary(spec.group[1])
        elif spec.group and spec.group[0] == "GU" and not spec.has_galois:
            gf = gunitary(spec.group[1])
        elif not spec.has_galois or spec.shortcut == "split":
            if spec.generators or spec.order not in (None, 1):
                raise SpecError(gl, "shortcut", "split forms take no generators")
            gf = split_form(rd)
        elif spec.shortcut is not None:
            parts = spec.shortcut.split()
            if spec.generators:
                raise SpecError(gl, "generator", "give either a shortcut or generators")
            if parts[0] == "opposition" and len(parts) == 1:
                gf = _with_order(rd, (opposition(rd),), spec.order or 2, gl)
            elif parts[0] == "trivial" and len(parts) == 2 and parts[1].isdigit():
                gf = trivial_action(rd, int(parts[1]))
            else:
                raise SpecError(gl, "shortcut", "expected split, opposition or 'trivial N'")
        else:
            if not spec.generators:
                raise SpecError(gl or 1, "generator", "[galois] needs a shortcut or generators")
            mats = []
            for rows, ln in spec.generators:
                if len(rows) != rd.rank or any(len(r) != rd.rank for r in rows):
                    raise SpecError(ln, "generator", f"expected a {rd.rank}x{rd.rank} matrix")
                mats.append(tuple(rows))
            gf = _with_order(rd, tuple(mats), spec.order, gl)
    except ValidationError as exc:
        raise SpecError(gl or 1, "galois", str(exc)) from None
    return GaloisForm(gf.datum, gf.action, gf.group, name or gf.name)


def _with_order(rd, mats, order, line):
    faithful = validate_form(GaloisForm(rd, mats, None, rd.name))
    size = len(group_elements(faithful))
    if order is None or order == size:
        return faithful
    if len(mats) != 1:
        raise SpecError(line, "order", "an order different from the matrix group needs a single generator")
    m = identity(rd.rank)
    for _ in range(order):
        m = mat_mul(m, mats[0])
    if m != identity(rd.rank):
        raise SpecError(line, "order", f"generator does not have order dividing {order}")
    cycle = tuple((i + 1) % order for i in range(order))
    return validate_form(GaloisForm(rd, mats, (cycle,), rd.name))


def parse_spec(text):
    """Parse and validate a spec, returning the GaloisForm."""
    return build_form(parse_text(text))


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


__all__ = ["GroupSpec", "SpecError", "parse_text", "parse_spec", "load_spec", "closure"]
