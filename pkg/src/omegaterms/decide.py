"""Deciding equality of omega-terms over finite aperiodic semigroups.

Two routes are available: comparing normal forms, and testing whether the
languages ``L_n`` of two normal forms meet at a large enough ``n``.  A
brute-force search in small aperiodic semigroups serves as an independent
refutation oracle.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

from .languages import intersect_empty, member
from .normal_form import check_normal_form, normalize
from .semigroup import FiniteSemigroup, find_refuting_semigroup
from .terms import Term, as_term, mu, top_powers


class NotNormal(ValueError):
    pass


class TheoremViolation(AssertionError):
    """Two methods that must agree produced different answers."""


def threshold(t1: Term | str, t2: Term | str) -> int:
    t1, t2 = as_term(t1), as_term(t2)
    return max(t1.length, t2.length, mu(t1), mu(t2)) + 1


@dataclass(frozen=True)
class EqVerdict:
    equal: bool
    method: str  # normalize | language | oracle-refuted
    normal_form_1: str
    normal_form_2: str
    n: int | None = None
    intersection_empty: bool | None = None
    refuting_semigroup: FiniteSemigroup | None = None
    assignment: dict | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "equal": self.equal,
            "method": self.method,
            "n": self.n,
            "normal_form_1": self.normal_form_1,
            "normal_form_2": self.normal_form_2,
        }
        if self.intersection_empty is not None:
            out["intersection_empty"] = self.intersection_empty
        if self.refuting_semigroup is not None:
            T = self.refuting_semigroup
            out["refuting_semigroup"] = {
                "order": T.order,
                "table": [list(r) for r in T.table],
                "assignment": self.assignment,
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _require_normal(t: Term, which: str) -> None:
    report = check_normal_form(t)
    if not report:
        raise NotNormal(f"{which} argument {t} is not in normal form (fails {report.conditions()})")


def decide_eq_language(t1: Term | str, t2: Term | str) -> EqVerdict:
    """Equality of two normal forms via emptiness of ``L_n[t1] & L_n[t2]``."""
    t1, t2 = as_term(t1), as_term(t2)
    _require_normal(t1, "first")
    _require_normal(t2, "second")
    n = threshold(t1, t2)
    empty = intersect_empty(t1, n, t2, n)
    if empty == (t1 == t2):
        raise TheoremViolation(
            f"L_{n} intersection of {t1} and {t2} is {'empty' if empty else 'nonempty'}"
        )
    return EqVerdict(not empty, "language", str(t1), str(t2), n=n, intersection_empty=empty)


def decide_eq(
    t1: Term | str,
    t2: Term | str,
    method: str = "normalize",
    oracle_order: int = 3,
    budget: int | None = None,
) -> EqVerdict:
    """Decide whether two terms are equal over every finite aperiodic semigroup.

    ``method`` is ``normalize``, ``language`` (normalize, then compare languages)
    or ``both``.  A small-semigroup refutation always takes precedence and a
    contradiction with it raises :class:`TheoremViolation`.
    """
    if method not in ("normalize", "language", "both"):
        raise ValueError(f"unknown method {method!r}")
    t1, t2 = as_term(t1), as_term(t2)
    n1, _ = normalize(t1, budget=budget)
    n2, _ = normalize(t2, budget=budget)
    equal = n1 == n2
    verdict = EqVerdict(equal, "normalize", str(n1), str(n2))
    if method in ("language", "both"):
        lang = decide_eq_language(n1, n2)
        if lang.equal != equal:
            raise TheoremViolation(f"normal forms and languages disagree on {t1}, {t2}")
        verdict = lang if method == "language" else EqVerdict(
            equal, "normalize", str(n1), str(n2), n=lang.n, intersection_empty=lang.intersection_empty
        )
    refuted = find_refuting_semigroup(t1, t2, order_max=oracle_order)
    if refuted is not None:
        if equal:
            raise TheoremViolation(f"{t1} and {t2} share a normal form but differ in a small semigroup")
        T, g = refuted
        return EqVerdict(
            False, "oracle-refuted", str(n1), str(n2), n=verdict.n,
            intersection_empty=verdict.intersection_empty, refuting_semigroup=T, assignment=g,
        )
    return verdict


# ---------------------------------------------------------------------------
# rank-1 synchronization


@dataclass(frozen=True)
class FactorizationWitness:
    term: Term
    exponents: tuple[int, ...]
    word: str

    def render(self) -> str:
        it = iter(self.exponents)
        parts = []
        for a in self.term.atoms:
            if isinstance(a, str):
                parts.append(a)
            else:
                parts.append(f"({a.base})^{next(it)}")
        return "".join(parts)


def _shape(t: Term) -> tuple:
    """Rank-1 term as a tuple of words and ``(base,)`` singletons for powers."""
    out = []
    for a in t.atoms:
        if isinstance(a, str):
            if out and isinstance(out[-1], str):
                out[-1] += a
            else:
                out.append(a)
        else:
            out.append((str(a.base),))
    return tuple(out)


def factorizations(w: str, t: Term | str, n: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All exponent vectors ``e`` (each ``>= n``) with ``w`` equal to ``t`` expanded at ``e``."""
    t = as_term(t)
    if t.rank != 1:
        raise ValueError("factorizations are defined for rank-1 terms")
    shape = _shape(t)
    found: list[tuple[int, ...]] = []

    @lru_cache(maxsize=None)
    def go(k: int, pos: int) -> tuple[tuple[int, ...], ...]:
        if k == len(shape):
            return ((),) if pos == len(w) else ()
        piece = shape[k]
        if isinstance(piece, str):
            if w.startswith(piece, pos):
                return go(k + 1, pos + len(piece))
            return ()
        v = piece[0]
        out = []
        e, p = 0, pos
        while True:
            if e >= n:
                out.extend((e,) + rest for rest in go(k + 1, p))
            if not w.startswith(v, p):
                break
            e, p = e + 1, p + len(v)
        return tuple(out)

    for vec in go(0, 0):
        found.append(vec)
        if limit is not None and len(found) >= limit:
            break
    return found


def synchronize_rank1(w: str, t: Term | str, n: int, require_mu: bool = True) -> FactorizationWitness:
    """The unique factorization of ``w`` in ``L_n[t]`` for a rank-1 normal form ``t``.

    With ``require_mu=False`` smaller ``n`` is accepted; a non-unique
    factorization then still raises.
    """
    t = as_term(t)
    if t.rank != 1:
        raise ValueError(f"rank of {t} is {t.rank}, expected 1")
    _require_normal(t, "term")
    m = mu(t)
    if require_mu and n < m:
        raise ValueError(f"n = {n} is below mu = {m}; uniqueness is not guaranteed")
    if not member(w, t, n):
        raise ValueError(f"{w!r} is not in L_{n}[{t}]")
    vecs = factorizations(w, t, n, limit=2)
    if len(vecs) != 1:
        raise TheoremViolation(f"{w!r} has {len(vecs)}+ factorizations against {t}")
    return FactorizationWitness(t, vecs[0], w)


# ---------------------------------------------------------------------------
# subsumption


def expansions(t: Term, n: int, max_exp: int, max_len: int | None = None):
    """One-step sampled expansions of ``t`` with exponents in ``[n, max_exp]``."""
    walls = top_powers(t)
    for exps in itertools.product(range(n, max_exp + 1), repeat=len(walls)):
        atoms = list(t.atoms)
        for i, e in sorted(zip(walls, exps), reverse=True):
            atoms[i : i + 1] = list(t.atoms[i].base.atoms) * e
        out = Term(tuple(atoms))
        if max_len is None or out.length <= max_len:
            yield exps, out


def expansion_witness(t1: Term, t2: Term, n: int) -> list[tuple[int, ...]] | None:
    """Exponent vectors of a chain of sampled expansions leading from ``t2`` to ``t1``."""
    if t1 == t2:
        return []
    depth = t2.rank - t1.rank
    if depth <= 0:
        return None
    bound = t1.length

    def search(cur: Term, d: int):
        if cur == t1:
            return []
        if d == 0 or cur.rank <= t1.rank:
            return None
        for exps, nxt in expansions(cur, n, bound, max_len=bound):
            rest = search(nxt, d - 1)
            if rest is not None:
                return [exps] + rest
        return None

    return search(t2, depth)


def subsumption(t1: Term | str, t2: Term | str, n: int) -> bool:
    """True iff ``L_n[t1]`` meets ``L_n[t2]``; when true, an expansion chain is also checked."""
    t1, t2 = as_term(t1), as_term(t2)
    _require_normal(t1, "first")
    _require_normal(t2, "second")
    if t2.rank < t1.rank:
        raise ValueError("rank of the second term must be at least that of the first")
    if n <= max(mu(t1), mu(t2)):
        raise ValueError(f"n must exceed max(mu) = {max(mu(t1), mu(t2))}")
    meets = not intersect_empty(t1, n, t2, n)
    if meets and expansion_witness(t1, t2, n) is None:
        raise TheoremViolation(f"languages meet but {t1} is not an expansion of {t2}")
    return meets
