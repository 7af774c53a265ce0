import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegaterms import languages as L
from omegaterms.generate import enumerate_terms
from omegaterms.normal_form import check_circular_normal_form
from omegaterms.terms import Term, concat, mu, parse, top_powers
from omegaterms.words import is_primitive

from conftest import terms

a, b = L.Symbol("a"), L.Symbol("b")


def test_sample_expansion_examples():
    assert str(L.sample_expansion("((a)b)", 3, [3])) == "(a)b(a)b(a)b"
    assert str(L.sample_expansion("ab", 7, [])) == "ab"
    assert str(L.sample_expansion("(a)c(b)", 2, [2, 3])) == "aacbbb"
    with pytest.raises(ValueError):
        L.sample_expansion("(a)", 3, [2])
    with pytest.raises(ValueError):
        L.sample_expansion("(a)(b)", 1, [1])


def test_build_Ln_nested_example():
    block = L.concat(L.Star(a), L.FixedPower(a, 3), b)
    expected = L.concat(L.Star(block), L.FixedPower(block, 3))
    assert L.equivalent(L.to_dfa(L.build_Ln("((a)b)", 3)), L.to_dfa(expected))


def test_build_Ln_small_examples():
    assert L.equivalent(L.to_dfa(L.build_Ln("ab", 5)), L.to_dfa(L.concat(a, b)))
    assert L.equivalent(L.to_dfa(L.build_Ln("(a)", 2)), L.to_dfa(L.concat(L.Star(a), a, a)))
    with pytest.raises(ValueError):
        L.build_Ln("a", 0)
    with pytest.raises(L.ResourceLimit):
        L.build_Ln("(ab)", 5000)


def test_regex_text():
    assert L.build_Ln("(a)b", 2).render() == "((a)*.(a)^2.b)"
    assert L.Union((a, L.Epsilon())).render() == "(a|eps)"
    assert L.EmptySet().render() == "empty"


def test_to_dfa_examples():
    d = L.to_dfa(L.concat(a, b))
    assert d.states == 4 and d.accepts("ab") and not d.accepts("a")
    # a*a^2 over {a}: states for 0, 1 and >= 2 letters read
    assert L.to_dfa(L.concat(L.Star(a), a, a)).states == 3
    e = L.to_dfa(L.EmptySet())
    assert e.states == 1 and not e.accepting


def test_dfa_exports():
    d = L.dfa_of("(a)b", 2)
    data = json.loads(d.to_json())
    assert set(data) == {"states", "alphabet", "delta", "initial", "accepting"}
    assert len(data["delta"]) == data["states"] and all(len(r) == 2 for r in data["delta"])
    assert L.Dfa.from_json(d.to_json()) == d
    dot = d.to_dot()
    assert dot.startswith("digraph") and "doublecircle" in dot


@pytest.mark.parametrize("w,t,n,ok", [("aaab", "(a)b", 3, True), ("ab", "(a)b", 3, False), ("aabaab", "((a)b)", 2, True)])
def test_member(w, t, n, ok):
    assert L.member(w, t, n) is ok


def test_intersect_empty_examples():
    assert L.intersect_empty("(a)", 2, "(b)", 2)
    assert not L.intersect_empty("(a)b", 3, "(a)b", 3)
    assert L.intersect_empty("(a)ab(b)", 17, "(a)b", 17)


def test_star_free_examples():
    assert L.is_star_free(L.dfa_of("(a)ab(b)", 16))
    assert not L.is_star_free(L.dfa_of("((a)ab(b)aabb)", 1))
    assert not L.is_star_free(L.to_dfa(L.concat(a, a, L.Star(L.concat(a, a)))))


@pytest.mark.parametrize("t,n", [("(a)", 1), ("((a)b)", 2), ("ab", 7)])
def test_monotone_examples(t, n):
    assert L.monotone_check(t, n)


# ---------------------------------------------------------------------------
# brute force oracle: iterate sampled expansions down to rank 0


def letters_of(t: Term) -> int:
    return sum(1 for c in str(t) if c.isalpha())


def expansion_words(t: Term, n: int, max_len: int, memo=None) -> set[str]:
    memo = {} if memo is None else memo
    key = str(t)
    if key in memo:
        return memo[key]
    spare = max_len - letters_of(t)
    if spare < 0:
        out = set()
    elif t.rank == 0:
        out = {key}
    else:
        walls = top_powers(t)
        sizes = [letters_of(t.atoms[i].base) for i in walls]
        out = set()

        def choose(k, left, exps):
            if k == len(walls):
                e = L.sample_expansion(t, n, exps)
                out.update(expansion_words(e, n, max_len, memo))
                return
            e = n
            while (e - 1) * sizes[k] <= left:
                choose(k + 1, left - (e - 1) * sizes[k], exps + [e])
                e += 1

        choose(0, spare, [])
    memo[key] = out
    return out


def all_words(max_len):
    for k in range(max_len + 1):
        for w in itertools.product("ab", repeat=k):
            yield "".join(w)


WORDS12 = list(all_words(12))


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("t", ["(a)", "(ab)", "(a)b", "((a)b)", "a(b)a", "(a)(b)", "((a)(b))", "(a(b))", "((ab)a)"])
def test_build_Ln_matches_expansions(t, n):
    expected = expansion_words(parse(t), n, 12)
    got = {w for w in WORDS12 if L.member(w, t, n)}
    assert got == expected


@given(terms(8), st.integers(1, 3))
def test_build_Ln_matches_expansions_random(t, n):
    expected = expansion_words(t, n, 10)
    d = L.dfa_of(t, n, "ab")
    assert set(d.words(10)) == expected


@given(terms(6), terms(6), st.integers(1, 3))
def test_Ln_of_product(s, t, n):
    lhs = L.to_dfa(L.concat(L.build_Ln(s, n), L.build_Ln(t, n)), "ab")
    assert L.equivalent(lhs, L.dfa_of(concat(s, t), n, "ab"))


@given(terms(8, min_rank=1), st.integers(1, 3), st.data())
def test_expansion_language_is_included(t, n, data):
    exps = [data.draw(st.integers(n, n + 2)) for _ in top_powers(t)]
    e = L.sample_expansion(t, n, exps)
    assert L.included(e, n, t, n)
    assert mu(e) <= mu(t)


@given(terms(8), st.integers(1, 3))
def test_monotone(t, n):
    assert L.monotone_check(t, n)


CIRCULAR = [t for k in range(3, 8) for t in enumerate_terms(k) if t.rank == 1 and check_circular_normal_form(t)]


def is_term_power(t: Term) -> bool:
    atoms = t.atoms
    return any(len(atoms) % d == 0 and atoms == atoms[:d] * (len(atoms) // d) for d in range(1, len(atoms)))


def shortest_word(d) -> int:
    return len(next(d.words(10_000)))


def test_primitivity_transfer():
    checked = 0
    for t in CIRCULAR:
        if is_term_power(t):
            continue
        d = L.dfa_of(t, mu(t), "ab")
        # at n = mu every member is longer than 14, so look a little further
        bound = max(14, shortest_word(d) + 6)
        for w in d.words(bound):
            assert is_primitive(w)
            checked += 1
    assert checked > 0


def test_root_property():
    checked = 0
    for t in CIRCULAR[:12]:
        if is_term_power(t):
            continue
        n = mu(t)
        base = L.build_Ln(t, n)
        powers = {k: L.to_dfa(L.FixedPower(base, k), "ab") for k in (1, 2, 3)}
        for k, d in powers.items():
            for w in d.words(shortest_word(d) + 4):
                for l in (2, 3):
                    if len(w) % l or w != w[: len(w) // l] * l:
                        continue
                    z = w[: len(w) // l]
                    assert any(powers[m].accepts(z) for m in range(1, k + 1))
                    checked += 1
    assert checked > 0
