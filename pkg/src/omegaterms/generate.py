"""Random omega-terms for tests and the fuzz harness."""

from __future__ import annotations

import random

from .terms import Atom, Power, Term, parse


def random_term(
    rng: random.Random,
    max_len: int = 12,
    letters: str = "ab",
    max_rank: int | None = None,
    power_prob: float = 0.35,
) -> Term:
    """A random nonempty term whose serialization has length at most ``max_len``."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    target = rng.randint(1, max_len)
    return Term(tuple(_atoms(rng, target, letters, max_rank, power_prob, top=True)))


def _atoms(rng, budget: int, letters, max_rank, power_prob, top=False) -> list[Atom]:
    out: list[Atom] = []
    while budget > 0:
        can_nest = budget >= 3 and (max_rank is None or max_rank > 0)
        if can_nest and rng.random() < power_prob:
            inner = rng.randint(1, budget - 2)
            sub_rank = None if max_rank is None else max_rank - 1
            body = _atoms(rng, inner, letters, sub_rank, power_prob)
            out.append(Power(Term(tuple(body))))
            budget -= inner + 2
        else:
            out.append(rng.choice(letters))
            budget -= 1
        # nested bodies may stop early so that powers of short words are common
        if not top and rng.random() < 0.15:
            break
    return out


def enumerate_terms(length: int, letters: str = "ab") -> list[Term]:
    """Every term whose serialization has exactly ``length`` symbols."""
    out: list[str] = []

    def go(s: str, depth: int) -> None:
        if len(s) == length:
            if depth == 0:
                out.append(s)
            return
        if length - len(s) < depth:
            return
        for c in letters:
            go(s + c, depth)
        if length - len(s) >= depth + 2:
            go(s + "(", depth + 1)
        if depth > 0 and not s.endswith("("):
            go(s + ")", depth - 1)

    go("", 0)
    return [parse(w) for w in out]
