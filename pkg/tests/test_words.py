import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegaterms.terms import Alphabet
from omegaterms.words import (
    common_root,
    conjugates,
    fine_wilf,
    fine_wilf_bound,
    is_lyndon,
    is_primitive,
    lyndon_border_check,
    lyndon_conjugate,
    primitive_root,
    synchronized_overlap,
)

words = st.text("ab", min_size=1, max_size=10)


def all_words(max_len, alphabet="ab"):
    for n in range(1, max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            yield "".join(w)


@pytest.mark.parametrize("w,p", [("ab", True), ("abab", False), ("aab", True)])
def test_is_primitive(w, p):
    assert is_primitive(w) is p


@pytest.mark.parametrize("w,root", [("abab", ("ab", 2)), ("aaa", ("a", 3)), ("aab", ("aab", 1))])
def test_primitive_root(w, root):
    assert primitive_root(w) == root


@pytest.mark.parametrize("fn", [is_primitive, primitive_root, is_lyndon])
def test_empty_rejected(fn):
    with pytest.raises(ValueError):
        fn("")


@pytest.mark.parametrize("w,ok", [("aab", True), ("ba", False), ("a", True), ("abab", False)])
def test_is_lyndon(w, ok):
    assert is_lyndon(w) is ok


def test_is_lyndon_uses_alphabet_order():
    assert is_lyndon("ba", Alphabet("ba"))
    assert is_lyndon("(a)b")  # "(" is below every letter


@pytest.mark.parametrize("w,l", [("ba", "ab"), ("aab", "aab"), ("bab", "abb")])
def test_lyndon_conjugate(w, l):
    assert lyndon_conjugate(w) == l


def test_lyndon_conjugate_needs_primitive():
    with pytest.raises(ValueError):
        lyndon_conjugate("abab")


def test_lyndon_border_check_examples():
    assert lyndon_border_check("", "aab")
    assert lyndon_border_check("aab", "aab")
    assert lyndon_border_check("a", "aab")
    with pytest.raises(ValueError):
        lyndon_border_check("a", "ba")


def test_fine_wilf_examples():
    assert fine_wilf("ab", "abab", 6) and common_root("ab", "abab") == "ab"
    assert not fine_wilf("a", "b", 2)
    assert not fine_wilf("ab", "ba", 3)
    assert fine_wilf_bound("ab", "ba") == 2


def test_synchronized_overlap_examples():
    assert synchronized_overlap("ab", "ab", 3, 3, 0, 0, 4) == ("", "abab")
    # a^m has no factor "ab", so no common factor of length 3 exists
    for i, j in itertools.product(range(4), range(4)):
        assert synchronized_overlap("a", "ab", 6, 3, i, j, 3) is None
    assert synchronized_overlap("aab", "aab", 3, 3, 1, 4, 5) == ("ab", "aab")


def test_synchronized_overlap_needs_lyndon():
    with pytest.raises(ValueError):
        synchronized_overlap("ba", "ab", 2, 2, 0, 0, 2)


@given(words)
def test_lyndon_implies_primitive(w):
    if is_lyndon(w):
        assert is_primitive(w)
    if is_primitive(w):
        assert all(is_primitive(c) for c in conjugates(w))
        assert is_lyndon(lyndon_conjugate(w))


@given(words)
def test_primitive_root_reconstructs(w):
    r, k = primitive_root(w)
    assert r * k == w and is_primitive(r)


def lyndon_words(max_len):
    return [w for w in all_words(max_len) if is_lyndon(w)]


def test_synchronization_exhaustive():
    # Lyndon u, v of length <= 4, exponents <= 4: a long enough common factor forces u = v
    ls = lyndon_words(4)
    for u, v in itertools.product(ls, ls):
        um, vn = u * 4, v * 4
        need = len(u) + len(v)
        for i in range(len(um) - need + 1):
            for j in range(len(vn) - need + 1):
                n = need
                if um[i : i + n] != vn[j : j + n]:
                    continue
                split = synchronized_overlap(u, v, 4, 4, i, j, n)
                assert u == v and split is not None
                w1, w2 = split
                assert w1 + w2 == um[i : i + n]
                x, z = um[:i], vn[:j]
                assert len(x + w1) % len(u) == 0 and len(z + w1) % len(u) == 0


def test_lyndon_borders_exhaustive():
    for w in lyndon_words(10):
        for k in range(len(w) + 1):
            assert lyndon_border_check(w[:k], w)
            assert lyndon_border_check(w[len(w) - k :], w)
