"""Command-line front end: ``endokit COMMAND SPECFILE [options]``.

Exit codes: 0 when every requested check passes, 1 when a residual is
nonzero or a predicate fails, 2 for usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import report
from .endoscopy import enumerate_elliptic, enumerate_triples, full_levi, out_group
from .galois import base_orbits, group_order, is_stable, relative_roots, stable_subsets
from .kottwitz import EndoContext, kottwitz_set, verify_induction, verify_sum_formula
from .levi import fiber, inner_class_count, is_acceptable, x_map
from .lattice import RatVec
from .rootdatum import ValidationError, levi_from_cochar, weyl_group
from .specfile import SpecError, load_spec


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",")) if text.strip() else ()
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fracs(text):
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _levi(gf, text):
    s = frozenset() if text.strip() in ("", "-") else frozenset(_ints(text))
    if not s <= full_levi(gf):
        raise UsageError(f"levi positions must lie in 0..{gf.datum.semisimple_rank - 1}")
    if not is_stable(gf, s):
        raise UsageError("levi must be Galois stable")
    return s


def _vec(gf, text, parse=_ints):
    v = parse(text)
    if len(v) != gf.datum.rank:
        raise UsageError(f"expected {gf.datum.rank} coordinates, got {len(v)}")
    return v


def _mu(gf, text):
    mu = _vec(gf, text)
    rd = gf.datum
    if any(sum(a * b for a, b in zip(rd.simple_root(i), mu)) < 0 for i in range(rd.semisimple_rank)):
        raise UsageError("mu must be dominant")
    return mu


def _select(classes, ident, refined):
    """Classes matching an identifier prefix (all of them when ident is None)."""
    if ident is None:
        return classes
    hits = [t for t in classes if report.class_id(t, refined).startswith(ident)]
    if len(hits) != 1:
        raise UsageError(f"class id {ident!r} matches {len(hits)} classes")
    return hits


# --- commands -----------------------------------------------------------------------

def cmd_validate(gf, args):
    rd = gf.datum
    rows = [
        ["name", gf.label],
        ["rank", rd.rank],
        ["roots", len(rd.roots)],
        ["semisimple_rank", rd.semisimple_rank],
        ["weyl_order", len(weyl_group(rd))],
        ["gamma_order", group_order(gf)],
        ["gamma_orbits", ";".join(report.fmt_levi(o) for o in base_orbits(gf))],
        ["relative_simple_roots", len(relative_roots(gf).simple)],
        ["stable_levis", len(stable_subsets(gf))],
    ]
    return 0, report.table(["field", "value"], rows, args.format)


def cmd_endoscopy(gf, args):
    finder = enumerate_triples if args.all else enumerate_elliptic
    rows = []
    for t in finder(gf, args.max_order, refined=args.refined):
        rows.append([
            report.class_id(t, args.refined),
            ",".join(str(x) for x in t.s.coords),
            len(t.h_roots),
            ";".join(report.fmt_vec(t.dual.roots[i]) for i in t.h_base) or "-",
            ";".join("".join(str(i) for i in w) or "e" for w in t.twist_words()) or "-",
            out_group(t, args.refined).order,
        ])
    return 0, report.table(["class", "s", "roots", "h_base", "twist", "out"], sorted(rows), args.format)


def cmd_fiber(gf, args):
    levi = _levi(gf, args.levi)
    classes = enumerate_triples(gf, args.max_order, refined=args.refined)
    (t,) = _select(classes, args.cls, args.refined)
    rows = []
    for e in fiber(t, levi, args.refined):
        tm = x_map(e)
        rows.append([
            report.class_id(e, args.refined),
            report.class_id(tm, args.refined),
            "".join(str(i) for i in e.conjugator.word) or "e",
            len(tm.h_roots),
            inner_class_count(e, args.refined),
        ])
    return 0, report.table(["id", "levi_class", "conjugator", "levi_roots", "inner"], rows, args.format)


def cmd_acceptable(gf, args):
    rd = gf.datum
    nu = RatVec(_vec(gf, args.nu, _fracs))
    w = RatVec(_vec(gf, args.w, _fracs))
    try:
        M = levi_from_cochar(rd, nu)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = is_acceptable(w, nu, M, rd)
    rows = [["levi", report.fmt_levi(M.subset)], ["acceptable", "true" if ok else "false"]]
    return (0 if ok else 1), report.table(["field", "value"], rows, args.format)


def cmd_kottwitz(gf, args):
    mu = _mu(gf, args.mu)
    rows = []
    for i, b in enumerate(kottwitz_set(gf, mu)):
        rows.append([i, report.fmt_vec(b.nu), report.fmt_levi(b.levi), report.fmt_vec(b.kappa), report.fmt_vec(b.kappa_levi)])
    return 0, report.table(["idx", "nu", "levi", "kappa", "kappa_levi"], rows, args.format)


def cmd_sum_check(gf, args):
    mu = _mu(gf, args.mu)
    classes = _select(enumerate_elliptic(gf, args.max_order, args.refined), args.cls, args.refined)
    checks = [
        (report.class_id(t, args.refined), verify_sum_formula(t, mu, args.refined, args.jobs))
        for t in classes
    ]
    bad = any(not r.is_zero() for _, r in checks)
    return (1 if bad else 0), report.render_checks(checks, args.format, args.refined)


def cmd_induction_check(gf, args):
    mu = _mu(gf, args.mu)
    levi = _levi(gf, args.levi)
    points = kottwitz_set(gf, mu)
    if not 0 <= args.b < len(points):
        raise UsageError(f"--b must be in 0..{len(points) - 1}")
    b = points[args.b]
    if not frozenset(b.levi) <= levi:
        raise UsageError("the Levi must contain M_b")
    classes = _select(enumerate_elliptic(gf, args.max_order, args.refined), args.cls, args.refined)
    checks = []
    for t in classes:
        ctx = EndoContext(t, args.refined)
        checks.append((report.class_id(t, args.refined), verify_induction(t, levi, b, mu, args.refined, args.jobs, ctx)))
    bad = any(not r.is_zero() for _, r in checks)
    return (1 if bad else 0), report.render_checks(checks, args.format, args.refined)


COMMANDS = {
    "validate": cmd_validate,
    "endoscopy": cmd_endoscopy,
    "fiber": cmd_fiber,
    "acceptable": cmd_acceptable,
    "kottwitz": cmd_kottwitz,
    "sum-check": cmd_sum_check,
    "induction-check": cmd_induction_check,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("spec", help="group-spec file")
    common.add_argument("--format", choices=["tsv", "json"], default="tsv")
    common.add_argument("--jobs", type=int, default=1, help="worker threads (results do not depend on it)")
    common.add_argument("--refined", action="store_true", help="compare s exactly instead of modulo the centre")

    p = _Parser(prog="endokit", description="Endoscopic data, Levi transfer and Kottwitz-set checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="check a spec and summarize the group")
    e = sub.add_parser("endoscopy", parents=[common], help="list endoscopic classes")
    e.add_argument("--max-order", type=int, default=2)
    e.add_argument("--all", action="store_true", help="include non-elliptic classes")
    f = sub.add_parser("fiber", parents=[common], help="embedded data over one class and Levi")
    f.add_argument("--levi", required=True)
    f.add_argument("--class", dest="cls", required=True)
    f.add_argument("--max-order", type=int, default=2)
    a = sub.add_parser("acceptable", parents=[common], help="acceptability of w for the slope nu")
    a.add_argument("--nu", required=True)
    a.add_argument("--w", required=True)
    k = sub.add_parser("kottwitz", parents=[common], help="list B(G, mu)")
    k.add_argument("--mu", required=True)
    s = sub.add_parser("sum-check", parents=[common], help="residual of the sum formula")
    s.add_argument("--mu", required=True)
    s.add_argument("--class", dest="cls")
    s.add_argument("--max-order", type=int, default=2)
    i = sub.add_parser("induction-check", parents=[common], help="residual of the induction formula")
    i.add_argument("--levi", required=True)
    i.add_argument("--mu", required=True)
    i.add_argument("--b", type=int, required=True, help="row index from the kottwitz command")
    i.add_argument("--class", dest="cls")
    i.add_argument("--max-order", type=int, default=2)
    return p


def run(argv, out=None, err=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be positive")
        gf = load_spec(args.spec)
        code, text = COMMANDS[args.command](gf, args)
    except (UsageError, SpecError, ValidationError, report.UsageError) as exc:
        err.write(f"endokit: error: {exc}\n")
        return 2
    except OSError as exc:
        err.write(f"endokit: error: {exc}\n")
        return 2
    out.write(text)
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))
