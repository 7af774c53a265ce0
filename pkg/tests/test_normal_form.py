import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegaterms.generate import random_term
from omegaterms.languages import sample_expansion
from omegaterms.normal_form import (
    NormalizationError,
    RewriteStep,
    RewriteTrace,
    RuleMismatch,
    apply_rule,
    check_circular_normal_form,
    check_normal_form,
    normalize,
    verify_trace,
)
from omegaterms.semigroup import agree_on_aperiodic
from omegaterms.terms import Power, Term, parse, top_powers

from conftest import terms


@pytest.mark.parametrize("t", ["(a)ab(b)", "b(ab)abaa(a)aaab(aab)", "((a)ab(b)ba)(a)ab(b)", "ab", "(ab)a"])
def test_normal_examples(t):
    report = check_normal_form(t)
    assert report.verdict and not report.failures


@pytest.mark.parametrize("t,cond", [("(ba)", 1), ("a(ba)", 1), ("(a)(a)", 2), ("(a)a", 4), ("((a))", 3)])
def test_not_normal_examples(t, cond):
    report = check_normal_form(t)
    assert not report
    assert cond in report.conditions()


def test_circular_examples():
    assert check_circular_normal_form("(a)b(a)b")
    assert check_circular_normal_form("(a)ab(b)ba")
    report = check_circular_normal_form("(a)a(b)")
    assert not report and 2 in report.conditions()
    # the square of (a) contains the portion (a)(a)
    assert not check_circular_normal_form("(a)")
    with pytest.raises(ValueError):
        check_circular_normal_form("ab")


@pytest.mark.parametrize(
    "t,rule,direction,pos,arg,out",
    [
        ("(a)(a)", "3", "contraction", 0, None, "(a)"),
        ("((a))", "1", "contraction", 0, None, "(a)"),
        ("(ab)a", "5", "ltr", 0, None, "a(ba)"),
        ("a(ba)", "5", "rtl", 0, 1, "(ab)a"),
        ("(abab)", "2", "contraction", 0, 2, "(ab)"),
        ("(a)", "2", "expansion", 0, 3, "(aaa)"),
        ("(ab)ab", "4R", "contraction", 0, None, "(ab)"),
        ("ab(ab)", "4L", "contraction", 0, 2, "(ab)"),
        ("b((a)a)", "4R", "contraction", 2, None, "b((a))"),
    ],
)
def test_apply_rule(t, rule, direction, pos, arg, out):
    assert str(apply_rule(t, rule, direction, pos, arg)) == out


@pytest.mark.parametrize(
    "t,rule,direction,pos",
    [("(a)(b)", "3", "contraction", 0), ("(a)b", "4R", "contraction", 0), ("ab", "1", "expansion", 0), ("(a)", "3", "contraction", 1)],
)
def test_apply_rule_mismatch(t, rule, direction, pos):
    with pytest.raises(RuleMismatch):
        apply_rule(t, rule, direction, pos)


@pytest.mark.parametrize(
    "t,nf",
    [("(a)(a)", "(a)"), ("a(ba)", "(ab)a"), ("((a))", "(a)"), ("(a)ab(b)", "(a)ab(b)"), ("(a)(b)", "(a)ab(b)"), ("(ba)", "b(ab)a")],
)
def test_normalize_examples(t, nf):
    end, trace = normalize(t)
    assert str(end) == nf
    assert verify_trace(trace)
    assert agree_on_aperiodic(t, end, 3)


def test_normalize_fixed_point_has_empty_trace():
    end, trace = normalize("(a)ab(b)")
    assert len(trace) == 0 and str(end) == "(a)ab(b)"


def test_normalize_budget_guard():
    with pytest.raises(NormalizationError):
        normalize("((a)(b))", budget=1)


def test_verify_trace_rejects_forgery():
    forged = RewriteTrace(parse("(a)"), (RewriteStep("3", "contraction", 0, parse("(a)"), parse("(b)")),))
    assert not verify_trace(forged)
    broken = RewriteTrace(parse("(a)"), (RewriteStep("3", "contraction", 0, parse("(a)(a)"), parse("(a)")),))
    assert not verify_trace(broken)


def test_trace_text_round_trip():
    _, trace = normalize("((b)(a))")
    again = RewriteTrace.from_text(trace.to_text())
    assert again == trace and verify_trace(again)


def power_offsets(t: Term, base: int = 0):
    offs = t.offsets()
    for i, a in enumerate(t.atoms):
        if isinstance(a, Power):
            yield base + offs[i]
            yield from power_offsets(a.base, base + offs[i] + 1)


def random_expansion(t: Term, rng: random.Random) -> Term:
    pos = rng.choice(list(power_offsets(t)))
    rule = rng.choice(["1", "2", "3", "4L", "4R"])
    return apply_rule(t, rule, "expansion", pos, rng.randint(2, 3) if rule == "2" else None)


@given(terms(10))
def test_normalize_properties(t):
    end, trace = normalize(t)
    assert check_normal_form(end)
    assert verify_trace(trace)
    assert trace.start == t and trace.end == end
    again, tr2 = normalize(end)
    assert again == end and len(tr2) == 0


@given(terms(10, min_rank=1), st.randoms(use_true_random=False))
def test_confluence_under_random_expansions(t, rng):
    u = t
    for _ in range(rng.randint(1, 3)):
        u = random_expansion(u, rng)
    assert normalize(u)[0] == normalize(t)[0]


@given(terms(10, min_rank=1), st.randoms(use_true_random=False))
def test_expansion_preserves_normality(t, rng):
    nf = normalize(t)[0]
    if nf.rank == 0:
        return
    exps = [rng.randint(1, 3) for _ in top_powers(nf)]
    n = min(exps)
    e = sample_expansion(nf, n, exps)
    assert check_normal_form(e)
    if check_circular_normal_form(nf) and e.rank > 0:
        assert check_circular_normal_form(e)


def test_rewrite_soundness_sampled():
    rng = random.Random(7)
    for _ in range(100):
        t = random_term(rng, max_len=8)
        if t.rank == 0:
            continue
        u = random_expansion(t, rng)
        assert agree_on_aperiodic(t, u, 3)
