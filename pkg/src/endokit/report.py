"""Canonical records, class identifiers and byte-stable reports.

A record is a plain dict of strings, integers and lists; it is serialized as
compact JSON with sorted keys, and the identifier of an object is the first
16 hex digits of the SHA-256 of that serialization.  Record fields:

* triple: group (structural fingerprint of the form), levi, s_mode, s, h_base, twist
* cochar: class (triple record), levi, mu
* embedded: class (G triple record), levi_class (M triple record)
* point: group, nu, levi, kappa, kappa_levi, top
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .endoscopy import EndoTriple, canonical_representative, class_key
from .kottwitz import EndoCochainSum, EndoCochar, KottwitzPoint
from .levi import EmbeddedDatum, x_map


class UsageError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ClassId:
    digest: str
    record: str

    def __str__(self):
        return self.digest


def _dump(record):
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _fracs(v):
    return [str(x) for x in v]


def group_fingerprint(gf):
    """Structural identifier of a form; independent of its display name."""
    rd = gf.datum
    data = {
        "rank": rd.rank,
        "roots": [list(r) for r in rd.roots],
        "coroots": [list(c) for c in rd.coroots],
        "base": list(rd.base),
        "action": [[list(row) for row in m] for m in gf.action],
        "gamma": None if gf.group is None else [list(p) for p in gf.group],
    }
    return hashlib.sha256(_dump(data).encode()).hexdigest()[:16]


def triple_record(t, refined=False):
    rep, _ = canonical_representative(t, refined)
    key = class_key(t, refined)
    D = rep.dual
    return {
        "group": group_fingerprint(t.ambient),
        "levi": sorted(t.levi),
        "s_mode": "exact" if refined else "mod-centre",
        "s": _fracs(key[0]),
        "h_base": [list(D.roots[i]) for i in rep.h_base],
        "twist": [list(w) for w in rep.twist_words()],
    }


def record_of(obj, refined=False):
    if isinstance(obj, EndoTriple):
        return triple_record(obj, refined)
    if isinstance(obj, EndoCochar):
        return {"class": triple_record(obj.triple, refined), "levi": list(obj.levi), "mu": list(obj.mu)}
    if isinstance(obj, EmbeddedDatum):
        return {
            "class": triple_record(obj.triple, refined),
            "levi_class": triple_record(x_map(obj), refined),
        }
    if isinstance(obj, KottwitzPoint):
        return {
            "nu": _fracs(obj.nu),
            "levi": list(obj.levi),
            "kappa": list(obj.kappa),
            "kappa_levi": list(obj.kappa_levi),
            "top": list(obj.top),
        }
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def canonicalize(obj, refined=False):
    """ClassId for a triple, cocharacter datum, embedded datum or Kottwitz point."""
    text = _dump(record_of(obj, refined))
    return ClassId(hashlib.sha256(text.encode()).hexdigest()[:16], text)


def class_id(obj, refined=False):
    return canonicalize(obj, refined).digest


# --- rendering -------------------------------------------------------------------------

def fmt_vec(v):
    return ",".join(str(x) for x in v)


def fmt_levi(s):
    return ",".join(str(i) for i in sorted(s)) if s else "-"


def fmt_coeff(c):
    return f"{c:+d}"


def table(header, rows, fmt="tsv"):
    """Render rows (lists of str/int) as TSV or JSON text."""
    if fmt == "tsv":
        lines = ["\t".join(header)]
        lines += ["\t".join(str(x) for x in row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        items = [dict(zip(header, row)) for row in rows]
        return json.dumps({"rows": items}, sort_keys=True, indent=1) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


SUM_HEADER = ["id", "levi", "mu", "class", "coeff"]


def sum_rows(total, refined=False):
    rows = []
    for x, c in total:
        rows.append([class_id(x, refined), fmt_levi(x.levi), fmt_vec(x.mu), class_id(x.triple, refined), fmt_coeff(c)])
    return sorted(rows)


def render(total, fmt="tsv", refined=False):
    """A formal sum as a table sorted by identifier."""
    if not isinstance(total, EndoCochainSum):
        raise TypeError("render expects an EndoCochainSum")
    return table(SUM_HEADER, sum_rows(total, refined), fmt)


def render_checks(checks, fmt="tsv", refined=False):
    """Several labelled residuals in one table; ``checks`` is a list of (label, sum)."""
    rows = []
    for label, total in checks:
        rows += [[label] + row for row in sum_rows(total, refined)]
    return table(["check"] + SUM_HEADER, rows, fmt)
