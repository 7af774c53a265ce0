"""Primitivity, conjugacy, Lyndon words and Fine--Wilf style checks.

Words are plain strings.  Every function that compares words takes an optional
:class:`~omegaterms.terms.Alphabet`; the default orders letters by code point
and puts ``(`` below and ``)`` above every letter, so the same code works on
serialized terms.
"""

from __future__ import annotations

from math import gcd

from .terms import DEFAULT_ALPHABET, Alphabet


def _need_nonempty(w: str) -> None:
    if not w:
        raise ValueError("empty word")


def primitive_root(w: str) -> tuple[str, int]:
    """Return ``(r, k)`` with ``w == r * k`` and ``r`` primitive."""
    _need_nonempty(w)
    n = len(w)
    # the smallest period dividing n gives the root
    i = (w + w).find(w, 1)
    if n % i == 0:
        return w[:i], n // i
    return w, 1


def is_primitive(w: str) -> bool:
    return primitive_root(w)[1] == 1


def conjugates(w: str) -> list[str]:
    return [w[i:] + w[:i] for i in range(len(w))] if w else [""]


def is_conjugate(u: str, v: str) -> bool:
    return len(u) == len(v) and u in v + v


def least_rotation(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    """Index of the lexicographically least rotation of ``w`` (first one on ties)."""
    _need_nonempty(w)
    key = alphabet.word_key
    best, best_key = 0, key(w)
    for i in range(1, len(w)):
        k = key(w[i:] + w[:i])
        if k < best_key:
            best, best_key = i, k
    return best


def is_lyndon(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> bool:
    """True iff ``w`` is primitive and strictly smaller than its other rotations."""
    _need_nonempty(w)
    key = alphabet.word_key
    kw = key(w)
    return all(kw < key(w[i:] + w[:i]) for i in range(1, len(w)))


def lyndon_conjugate(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    if not is_primitive(w):
        raise ValueError(f"{w!r} is not primitive")
    i = least_rotation(w, alphabet)
    return w[i:] + w[:i]


def lyndon_border_check(t: str, w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> bool:
    """Check that a prefix-and-suffix ``t`` of the Lyndon word ``w`` is trivial.

    Returns True when the implication holds: either ``t`` is not a border of
    ``w`` (vacuous case), or ``t`` is empty or ``w`` itself.
    """
    if not is_lyndon(w, alphabet):
        raise ValueError(f"{w!r} is not a Lyndon word")
    if not (w.startswith(t) and w.endswith(t)):
        return True
    return t == "" or t == w


def fine_wilf_bound(u: str, v: str) -> int:
    return len(u) + len(v) - gcd(len(u), len(v))


def _periodic_prefix(u: str, n: int) -> str:
    return (u * (n // len(u) + 1))[:n]


def fine_wilf(u: str, v: str, prefix_len: int) -> bool:
    """True iff some powers of ``u`` and ``v`` share a prefix of length ``prefix_len``."""
    _need_nonempty(u)
    _need_nonempty(v)
    return _periodic_prefix(u, prefix_len) == _periodic_prefix(v, prefix_len)


def common_root(u: str, v: str) -> str | None:
    """The common primitive root of ``u`` and ``v``, if they are powers of one word."""
    ru, rv = primitive_root(u)[0], primitive_root(v)[0]
    return ru if ru == rv else None


def is_prefix_of_power(x: str, v: str) -> bool:
    """Is ``x`` a prefix of some power ``v**k`` (``k >= 1``)?  The empty word is."""
    return _periodic_prefix(v, len(x)) == x


def is_suffix_of_power(x: str, v: str) -> bool:
    return is_prefix_of_power(x[::-1], v[::-1])


def synchronized_overlap(
    u: str,
    v: str,
    m: int,
    n: int,
    u_offset: int,
    v_offset: int,
    length: int,
    alphabet: Alphabet = DEFAULT_ALPHABET,
) -> tuple[str, str] | None:
    """Synchronize a common factor of ``u**m`` and ``v**n``.

    The factor is ``w = (u**m)[u_offset:u_offset+length]``, which must also equal
    ``(v**n)[v_offset:v_offset+length]``.  Writing ``u**m = x w y`` and
    ``v**n = z w t``, return the split ``(w1, w2)`` of ``w`` such that ``x w1``
    and ``z w1`` are both powers of ``u`` (which then equals ``v``).

    Returns None when the two occurrences are not a common factor or are not
    synchronized.  Once ``length >= |u| + |v|`` synchronization is forced, and a
    failure there raises ``AssertionError``.
    """
    if not is_lyndon(u, alphabet) or not is_lyndon(v, alphabet):
        raise ValueError("synchronized_overlap needs Lyndon words")
    um, vn = u * m, v * n
    if length < 0 or u_offset < 0 or v_offset < 0:
        return None
    if u_offset + length > len(um) or v_offset + length > len(vn):
        return None
    w = um[u_offset : u_offset + length]
    if w != vn[v_offset : v_offset + length]:
        return None
    forced = length >= len(u) + len(v)
    cut = (-u_offset) % len(u)
    synced = u == v and (v_offset + cut) % len(v) == 0 and cut <= length
    if not synced:
        if forced:
            raise AssertionError(f"overlap of {length} between powers of {u!r} and {v!r} is not synchronized")
        return None
    return w[:cut], w[cut:]
