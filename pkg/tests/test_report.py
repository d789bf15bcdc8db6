import json
from fractions import Fraction
from pathlib import Path

import pytest

from endokit.builtins import gl, sl, trivial_action
from endokit.endoscopy import canonical_representative, enumerate_triples, is_isomorphic, triple_from_element, trivial_triple
from endokit.galois import split_form
from endokit.kottwitz import EndoCochainSum, EndoContext, kottwitz_set
from endokit.report import UsageError, canonicalize, class_id, render
from endokit.rootdatum import RootDatum, validate

GOLDEN = Path(__file__).parent / "golden"
GL2 = split_form(gl(2))


def test_golden_digest_trivial_gl2():
    digest, record = (GOLDEN / "gl2_trivial_triple.txt").read_text().splitlines()
    c = canonicalize(trivial_triple(GL2))
    assert c.digest == digest
    assert c.record == record


def test_reordered_roots_same_digest():
    rd = validate(RootDatum(2, ((-1, 1), (1, -1)), ((-1, 1), (1, -1))), name="other name")
    G = split_form(rd)
    assert class_id(trivial_triple(G)) == class_id(trivial_triple(GL2))
    a = triple_from_element(G, (0, Fraction(1, 2)))
    b = triple_from_element(GL2, (Fraction(1, 2), 0))
    assert class_id(a) == class_id(b)


def test_sl2_classes_distinct():
    G = trivial_action(sl(2), 2)
    ts = enumerate_triples(G, 2)
    ids = [class_id(t) for t in ts]
    assert len(set(ids)) == len(ts) == 3
    for a in ts:
        for b in ts:
            assert (class_id(a) == class_id(b)) == (is_isomorphic(a, b) is not None)


def test_canonicalize_idempotent():
    for t in enumerate_triples(split_form(gl(3)), 3):
        rep, _ = canonical_representative(t)
        assert canonicalize(rep) == canonicalize(t)


def test_refined_mode_changes_digest():
    t = trivial_triple(GL2)
    assert class_id(t) != class_id(t, refined=True)


def test_empty_sum_header_only():
    assert render(EndoCochainSum()) == "id\tlevi\tmu\tclass\tcoeff\n"


def test_single_term():
    ctx = EndoContext(trivial_triple(GL2))
    text = render(EndoCochainSum({ctx.top_cochar((1, 0)): 1}))
    lines = text.splitlines()
    assert len(lines) == 2 and lines[1].endswith("\t+1")


@pytest.mark.parametrize("fmt,ext", [("tsv", "tsv"), ("json", "json")])
def test_golden_m_sum(fmt, ext):
    he = trivial_triple(GL2)
    basic = kottwitz_set(GL2, (1, 0))[0]
    got = render(EndoContext(he).m_sum(basic, (1, 0)), fmt)
    assert got.encode() == (GOLDEN / f"gl2_m_sum_basic.{ext}").read_bytes()


def test_json_sorted_no_floats():
    he = trivial_triple(GL2)
    basic = kottwitz_set(GL2, (1, 0))[0]
    text = render(EndoContext(he).m_sum(basic, (1, 0)), "json")
    data = json.loads(text)
    assert text == json.dumps(data, sort_keys=True, indent=1) + "\n"
    assert not any(isinstance(v, float) for row in data["rows"] for v in row.values())


def test_rows_sorted_and_lf():
    he = trivial_triple(GL2)
    basic = kottwitz_set(GL2, (1, 0))[0]
    text = render(EndoContext(he).m_sum(basic, (1, 0)))
    assert "\r" not in text
    rows = text.splitlines()[1:]
    assert rows == sorted(rows)


def test_render_injective():
    ctx = EndoContext(trivial_triple(GL2))
    x = ctx.top_cochar((1, 0))
    sums = [EndoCochainSum({x: c}) for c in (-2, -1, 1, 2)] + [EndoCochainSum()]
    assert len({render(s) for s in sums}) == len(sums)


def test_unknown_format():
    with pytest.raises(UsageError):
        render(EndoCochainSum(), "xml")
