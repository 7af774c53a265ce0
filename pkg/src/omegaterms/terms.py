"""Omega-terms as well-parenthesized words.

An omega-term is a nonempty sequence of atoms, each atom being either a letter
or the omega-power of a nonempty omega-term.  The canonical serialization writes
``x^omega`` as ``(x)``, so ``(a^omega b)^omega`` is the word ``((a)b)``.

Concatenation is flat: ``Term`` stores a tuple of atoms, which makes terms that
only differ by the bracketing of products identical.

The two reserved letters ``<`` and ``>`` stand for frozen parentheses (see
:func:`freeze`).  They behave like ordinary letters, except that they sort
below, resp. above, every other letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence, Union

OPEN, CLOSE = "(", ")"
FROZEN_OPEN, FROZEN_CLOSE = "<", ">"


class TermSyntaxError(ValueError):
    """Raised when a word over the extended alphabet is not a valid term."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


def is_letter(symbol: str) -> bool:
    return (len(symbol) == 1 and "a" <= symbol <= "z") or symbol in (FROZEN_OPEN, FROZEN_CLOSE)


class Alphabet:
    """A total order on letters, extended to parentheses and frozen markers.

    The extended order is ``( < < < letters < > < )``.  Without an explicit
    order letters compare by code point.
    """

    def __init__(self, letters: str | Sequence[str] | None = None):
        if letters is not None:
            letters = list(letters)
            if not letters:
                raise ValueError("alphabet must be nonempty")
            if len(set(letters)) != len(letters):
                raise ValueError(f"repeated letter in alphabet order {letters!r}")
            for x in letters:
                if not is_letter(x) or x in (FROZEN_OPEN, FROZEN_CLOSE):
                    raise ValueError(f"invalid letter {x!r}")
            self._rank = {x: i for i, x in enumerate(letters)}
        else:
            self._rank = None
        self.letters = None if letters is None else tuple(letters)

    def key(self, symbol: str) -> tuple[int, int]:
        if symbol == OPEN:
            return (0, 0)
        if symbol == FROZEN_OPEN:
            return (1, 0)
        if symbol == FROZEN_CLOSE:
            return (3, 0)
        if symbol == CLOSE:
            return (4, 0)
        if self._rank is None:
            return (2, ord(symbol))
        try:
            return (2, self._rank[symbol])
        except KeyError:
            raise ValueError(f"letter {symbol!r} not in alphabet {''.join(self.letters)!r}") from None

    def word_key(self, word: str) -> tuple:
        return tuple(self.key(c) for c in word)

    def __repr__(self) -> str:
        if self.letters is None:
            return "Alphabet()"
        return f"Alphabet({''.join(self.letters)!r})"


DEFAULT_ALPHABET = Alphabet()


@dataclass(frozen=True)
class Power:
    """The omega-power of a nonempty term."""

    base: "Term"

    def __post_init__(self):
        if not self.base.atoms:
            raise TermSyntaxError("empty omega-power '()'")

    def __str__(self) -> str:
        return OPEN + self.base.render() + CLOSE


Atom = Union[str, Power]


@dataclass(frozen=True)
class Term:
    """A (possibly empty) flat product of atoms.

    Public operations require nonempty terms; empty terms only show up as the
    gaps between powers.
    """

    atoms: tuple[Atom, ...] = ()

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Term({self.render()!r})"

    def __len__(self) -> int:
        return self.length

    def __bool__(self) -> bool:
        return bool(self.atoms)

    def __add__(self, other: "Term") -> "Term":
        return Term(self.atoms + other.atoms)

    def __mul__(self, k: int) -> "Term":
        return Term(self.atoms * k)

    def render(self) -> str:
        return self._serialization

    @cached_property
    def _serialization(self) -> str:
        return "".join(a if isinstance(a, str) else str(a) for a in self.atoms)

    @cached_property
    def length(self) -> int:
        return len(self._serialization)

    @cached_property
    def rank(self) -> int:
        return max((atom_rank(a) for a in self.atoms), default=0)

    def offsets(self) -> list[int]:
        """Serialization offset of each atom, plus the total length at the end."""
        out = [0]
        for a in self.atoms:
            out.append(out[-1] + atom_length(a))
        return out

    def letters(self) -> set[str]:
        found: set[str] = set()
        for a in self.atoms:
            if isinstance(a, str):
                found.add(a)
            else:
                found |= a.base.letters()
        return found


def atom_rank(a: Atom) -> int:
    return 0 if isinstance(a, str) else a.base.rank + 1


def atom_length(a: Atom) -> int:
    return 1 if isinstance(a, str) else a.base.length + 2


def word(w: str) -> Term:
    """A rank-0 term from a plain string of letters."""
    return Term(tuple(w))


def power(t: Term | str) -> Term:
    """The term ``(t)``."""
    if isinstance(t, str):
        t = parse(t)
    return Term((Power(t),))


def parse(w: str) -> Term:
    """Parse a well-parenthesized word into a term."""
    if not isinstance(w, str):
        raise TypeError(f"expected str, got {type(w).__name__}")
    if not w:
        raise TermSyntaxError("empty term")
    stack: list[list[Atom]] = [[]]
    opened: list[int] = []
    for i, c in enumerate(w):
        if c == OPEN:
            stack.append([])
            opened.append(i)
        elif c == CLOSE:
            if len(stack) == 1:
                raise TermSyntaxError("unbalanced ')'", i)
            body = stack.pop()
            start = opened.pop()
            if not body:
                raise TermSyntaxError("empty omega-power '()'", start)
            stack[-1].append(Power(Term(tuple(body))))
        elif is_letter(c):
            stack[-1].append(c)
        else:
            raise TermSyntaxError(f"symbol {c!r} is not a letter or parenthesis", i)
    if len(stack) != 1:
        raise TermSyntaxError("unbalanced '('", opened[-1])
    return Term(tuple(stack[0]))


def as_term(t: Term | str) -> Term:
    return parse(t) if isinstance(t, str) else t


def render(t: Term) -> str:
    return t.render()


def rank(t: Term | str) -> int:
    return as_term(t).rank


def length(t: Term | str) -> int:
    return as_term(t).length


def concat(*terms: Term | str) -> Term:
    atoms: tuple[Atom, ...] = ()
    for t in terms:
        atoms += as_term(t).atoms
    return Term(atoms)


def top_powers(t: Term) -> list[int]:
    """Indices of the top-level atoms that are powers of maximal rank.

    These are the ``(delta_k)`` of the factorization
    ``gamma_0 (delta_1) gamma_1 ... (delta_r) gamma_r``.
    """
    r = t.rank
    if r == 0:
        return []
    return [i for i, a in enumerate(t.atoms) if not isinstance(a, str) and a.base.rank == r - 1]


def decompose(t: Term) -> tuple[list[Term], list[Term]]:
    """Split ``t`` into its gaps ``gamma_0..gamma_r`` and bases ``delta_1..delta_r``."""
    walls = top_powers(t)
    gaps, bases = [], []
    prev = 0
    for i in walls:
        gaps.append(Term(t.atoms[prev:i]))
        bases.append(t.atoms[i].base)
        prev = i + 1
    gaps.append(Term(t.atoms[prev:]))
    return gaps, bases


@dataclass(frozen=True)
class CrucialPortion:
    left_base: Term
    middle: Term
    right_base: Term
    location: int

    @property
    def term(self) -> Term:
        return Term((Power(self.left_base),) + self.middle.atoms + (Power(self.right_base),))

    def render(self) -> str:
        return self.term.render()

    def __len__(self) -> int:
        return self.term.length


def crucial_portions(t: Term | str) -> list[CrucialPortion]:
    """All factors ``(delta_j) gamma_j (delta_{j+1})`` between consecutive
    maximal-rank powers of ``t``; ``location`` is the serialization offset."""
    t = as_term(t)
    if t.rank == 0:
        raise ValueError("crucial portions are only defined for terms of positive rank")
    walls = top_powers(t)
    offs = t.offsets()
    out = []
    for i, j in zip(walls, walls[1:]):
        out.append(CrucialPortion(t.atoms[i].base, Term(t.atoms[i + 1 : j]), t.atoms[j].base, offs[i]))
    return out


def mu(t: Term | str) -> int:
    """``2**rank * max |crucial portion of t t|``; zero for plain words."""
    t = as_term(t)
    if t.rank == 0:
        return 0
    portions = crucial_portions(t + t)
    return (2**t.rank) * max(len(p) for p in portions)


def _freeze_body(t: Term) -> Term:
    atoms: list[Atom] = []
    for a in t.atoms:
        if isinstance(a, str):
            if a in (FROZEN_OPEN, FROZEN_CLOSE):
                raise ValueError("cannot freeze a term that already contains frozen markers")
            atoms.append(a)
        elif a.base.rank == 0:
            atoms.append(FROZEN_OPEN)
            atoms.extend(a.base.atoms)
            atoms.append(FROZEN_CLOSE)
        else:
            atoms.append(Power(_freeze_body(a.base)))
    return Term(tuple(atoms))


def freeze(t: Term | str) -> Term:
    """Turn the innermost (rank 1) parentheses into the letters ``<`` and ``>``."""
    t = as_term(t)
    if t.rank == 0:
        raise ValueError("freeze needs a term of positive rank")
    return _freeze_body(t)


def _unfreeze_body(t: Term) -> Term:
    atoms: list[Atom] = []
    inside: list[str] | None = None
    for a in t.atoms:
        if a == FROZEN_OPEN:
            if inside is not None:
                raise ValueError("nested frozen markers")
            inside = []
        elif a == FROZEN_CLOSE:
            if inside is None:
                raise ValueError("unmatched '>'")
            if not inside:
                raise ValueError("empty frozen power '<>'")
            atoms.append(Power(Term(tuple(inside))))
            inside = None
        elif inside is not None:
            if not isinstance(a, str):
                raise ValueError("frozen power must have rank-0 content")
            inside.append(a)
        elif isinstance(a, str):
            atoms.append(a)
        else:
            atoms.append(Power(_unfreeze_body(a.base)))
    if inside is not None:
        raise ValueError("unmatched '<'")
    return Term(tuple(atoms))


def unfreeze(t: Term | str) -> Term:
    """Inverse of :func:`freeze`."""
    return _unfreeze_body(as_term(t))


def iter_subterms(t: Term) -> Iterator[Term]:
    """Every base of every power in ``t``, outermost first."""
    for a in t.atoms:
        if not isinstance(a, str):
            yield a.base
            yield from iter_subterms(a.base)
