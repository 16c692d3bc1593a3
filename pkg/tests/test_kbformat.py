from fractions import Fraction as F

import pytest

from taxprob import (BOTTOM, TOP, Interval, conjunction, parse_goal, parse_kb,
                     render_kb)
from taxprob.kbformat import KbFormatError

from helpers import FIXTURES, load_fixture


def test_parse_taxonomic_line():
    parsed = parse_kb("tax: tb lep -> g_pos\n")
    (fm,) = parsed.kb.taxonomy.formulas
    assert fm.lhs == conjunction(["tb", "lep"])
    assert fm.rhs == conjunction(["g_pos"])


def test_parse_prob_line_exact_rational():
    parsed = parse_kb("prob: ( fly | bird ) [ 0.95, 1 ]\n")
    (fm,) = parsed.kb.probabilistic
    assert fm.interval == Interval.make(F(19, 20), 1)
    assert fm.interval.lo == F(19, 20)  # decimal literals are exact


def test_parse_fraction_bounds():
    parsed = parse_kb("prob: ( a | b ) [ 1/3, 2/3 ]\n")
    (fm,) = parsed.kb.probabilistic
    assert fm.interval == Interval.make(F(1, 3), F(2, 3))


def test_lower_exceeds_upper_is_positioned_error():
    with pytest.raises(KbFormatError) as err:
        parse_kb("prob: ( B | A ) [ 0.9, 0.2 ]\n")
    (diag,) = err.value.diagnostics
    assert diag.line == 1
    assert "lower exceeds upper" in diag.message


def test_bound_out_of_range():
    with pytest.raises(KbFormatError) as err:
        parse_kb("prob: ( B | A ) [ 0, 1.5 ]\n")
    assert "out of [0, 1]" in str(err.value)


def test_unknown_identifier_with_declared_universe():
    text = "basics: a b\nprob: ( a | z ) [ 0, 1 ]\n"
    with pytest.raises(KbFormatError) as err:
        parse_kb(text)
    (diag,) = err.value.diagnostics
    assert diag.line == 2 and "unknown identifier 'z'" in diag.message


def test_universe_inferred_when_undeclared():
    parsed = parse_kb("prob: ( b | a c ) [ 0.5, 1 ]\n")
    assert parsed.kb.universe.names == ("a", "b", "c")


def test_malformed_lines_collected():
    text = "basics: a\nnonsense here\ntax: a ->\nprob: (a | a) 0.5\n"
    with pytest.raises(KbFormatError) as err:
        parse_kb(text)
    lines = [d.line for d in err.value.diagnostics]
    assert lines == [2, 3, 4]


def test_comments_blanks_and_crlf():
    text = "# header\r\n\r\nbasics: a b\r\nprob: ( a | b ) [ 0, 1 ] # inline\r\n"
    parsed = parse_kb(text)
    assert len(parsed.kb.probabilistic) == 1


def test_true_false_events():
    parsed = parse_kb("basics: a\ntax: a -> false\nprob: ( a | true ) [ 0, 0 ]\n")
    (fm,) = parsed.kb.taxonomy.formulas
    assert fm.rhs is BOTTOM
    (pf,) = parsed.kb.probabilistic
    assert pf.premise is TOP


def test_duplicate_prob_lines_intersect_with_warning():
    text = ("prob: ( b | a ) [ 0.2, 0.6 ]\n"
            "prob: ( b | a ) [ 0.4, 0.9 ]\n")
    parsed = parse_kb(text)
    (fm,) = parsed.kb.probabilistic
    assert fm.interval == Interval.make(F(2, 5), F(3, 5))
    assert len(parsed.warnings) == 1


def test_parse_goal():
    parsed = load_fixture("medical")
    f, e = parse_goal("( fever head | typh )", parsed.kb.universe)
    assert f == conjunction(["fever", "head"])
    assert e == conjunction(["typh"])
    f, e = parse_goal("(true | true)", parsed.kb.universe)
    assert f is TOP and e is TOP
    with pytest.raises(KbFormatError):
        parse_goal("(fever | unknown_id)", parsed.kb.universe)
    with pytest.raises(KbFormatError):
        parse_goal("fever | typh", parsed.kb.universe)


def test_round_trip_all_fixtures():
    for path in sorted(FIXTURES.glob("*.kb")):
        parsed = parse_kb(path.read_text(encoding="utf-8"))
        rendered = render_kb(parsed.kb, parsed.queries)
        reparsed = parse_kb(rendered)
        assert reparsed.kb.universe.names == parsed.kb.universe.names, path
        assert set(reparsed.kb.taxonomy.formulas) == \
            set(parsed.kb.taxonomy.formulas), path
        assert set(reparsed.kb.probabilistic) == \
            set(parsed.kb.probabilistic), path
        assert reparsed.queries == parsed.queries, path
        # rendering is a fixpoint
        assert render_kb(reparsed.kb, reparsed.queries) == rendered, path
