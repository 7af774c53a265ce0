"""Finite semigroups given by multiplication tables.

Elements are the integers ``0..order-1`` and ``table[x][y]`` is the product
``x y``.  Omega-terms are evaluated by sending ``(x)`` to the unique idempotent
power of the value of ``x``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .terms import Term, as_term

MAX_ORDER = 4


class NotAssociative(ValueError):
    def __init__(self, triple: tuple[int, int, int]):
        x, y, z = triple
        super().__init__(f"table is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")
        self.triple = triple


@dataclass(frozen=True)
class FiniteSemigroup:
    order: int
    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if self.order < 1:
            raise ValueError("order must be positive")
        if len(table) != self.order or any(len(row) != self.order for row in table):
            raise ValueError(f"table must be {self.order}x{self.order}")
        if any(not 0 <= v < self.order for row in table for v in row):
            raise ValueError("table entries must be element indices")
        bad = _non_associative_triple(table)
        if bad is not None:
            raise NotAssociative(bad)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def power(self, s: int, k: int) -> int:
        if k < 1:
            raise ValueError("exponent must be positive")
        out = s
        for _ in range(k - 1):
            out = self.table[out][s]
        return out

    @cached_property
    def omega_table(self) -> tuple[int, ...]:
        return tuple(_omega(self.table, s) for s in range(self.order))

    def to_json(self) -> str:
        return json.dumps({"order": self.order, "table": [list(r) for r in self.table]})

    @classmethod
    def from_json(cls, text: str) -> "FiniteSemigroup":
        data = json.loads(text)
        if not isinstance(data, dict) or "order" not in data or "table" not in data:
            raise ValueError("semigroup JSON needs 'order' and 'table'")
        return cls(int(data["order"]), tuple(tuple(r) for r in data["table"]))

    @classmethod
    def load(cls, path: str | Path) -> "FiniteSemigroup":
        return cls.from_json(Path(path).read_text())


def _non_associative_triple(table) -> tuple[int, int, int] | None:
    n = len(table)
    for x, y, z in itertools.product(range(n), repeat=3):
        if table[table[x][y]][z] != table[x][table[y][z]]:
            return (x, y, z)
    return None


def _omega(table, s: int) -> int:
    p = s
    while table[p][p] != p:
        p = table[p][s]
    return p


def omega_power(T: FiniteSemigroup, s: int) -> int:
    """The unique idempotent among ``s, s^2, s^3, ...``."""
    return T.omega_table[s]


def evaluate(t: Term | str, T: FiniteSemigroup, g: Mapping[str, int]) -> int:
    t = as_term(t)
    if not t.atoms:
        raise ValueError("cannot evaluate the empty term")
    return _eval(t, T.table, T.omega_table, g)


def _eval(t: Term, table, omega, g) -> int:
    acc = None
    for a in t.atoms:
        if isinstance(a, str):
            try:
                v = g[a]
            except KeyError:
                raise ValueError(f"letter {a!r} has no assigned element") from None
        else:
            v = omega[_eval(a.base, table, omega, g)]
        acc = v if acc is None else table[acc][v]
    return acc


def evaluate_word(w: str, T: FiniteSemigroup, g: Mapping[str, int]) -> int:
    if not w:
        raise ValueError("cannot evaluate the empty word")
    acc = g[w[0]]
    for c in w[1:]:
        acc = T.table[acc][g[c]]
    return acc


def is_aperiodic(T: FiniteSemigroup) -> bool:
    """Every element eventually satisfies ``s^n = s^(n+1)``."""
    return all(T.mul(e, s) == e for s, e in enumerate(T.omega_table))


def ind(T: FiniteSemigroup) -> int:
    """Smallest ``l >= 1`` such that every ``s^l`` lies in the cycle of ``s``."""
    best = 1
    for s in range(T.order):
        seen: dict[int, int] = {}
        p, k = s, 1
        while p not in seen:
            seen[p] = k
            p, k = T.mul(p, s), k + 1
        best = max(best, seen[p])
    return best


def transition_semigroup(d) -> FiniteSemigroup:
    """Semigroup of state maps generated by the letters of a complete DFA.

    ``d`` needs ``states`` (count), ``alphabet`` and ``delta[state][letter]``.
    """
    n = d.states
    gens = [tuple(d.delta[q][c] for q in range(n)) for c in d.alphabet]
    elements: list[tuple[int, ...]] = []
    index: dict[tuple[int, ...], int] = {}
    frontier = []
    for f in gens:
        if f not in index:
            index[f] = len(elements)
            elements.append(f)
            frontier.append(f)
    while frontier:
        nxt = []
        for f in frontier:
            for gmap in gens:
                h = tuple(gmap[f[q]] for q in range(n))  # f then g
                if h not in index:
                    index[h] = len(elements)
                    elements.append(h)
                    nxt.append(h)
        frontier = nxt
    table = tuple(
        tuple(index[tuple(g[f[q]] for q in range(n))] for g in elements) for f in elements
    )
    return FiniteSemigroup(len(elements), table)


def _enumerate_tables(order: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    cells = [(x, y) for x in range(order) for y in range(order)]
    table = [[-1] * order for _ in range(order)]

    def consistent() -> bool:
        for x in range(order):
            for y in range(order):
                xy = table[x][y]
                if xy < 0:
                    continue
                for z in range(order):
                    yz = table[y][z]
                    if yz < 0:
                        continue
                    left, right = table[xy][z], table[x][yz]
                    if left >= 0 and right >= 0 and left != right:
                        return False
        return True

    def fill(k: int):
        if k == len(cells):
            yield tuple(tuple(r) for r in table)
            return
        x, y = cells[k]
        for v in range(order):
            table[x][y] = v
            if consistent():
                yield from fill(k + 1)
        table[x][y] = -1

    yield from fill(0)


def _canonical(table, order: int) -> tuple:
    best = None
    for perm in itertools.permutations(range(order)):
        inv = [0] * order
        for i, p in enumerate(perm):
            inv[p] = i
        relabeled = tuple(
            tuple(perm[table[inv[x]][inv[y]]] for y in range(order)) for x in range(order)
        )
        if best is None or relabeled < best:
            best = relabeled
    return best


def enumerate_aperiodic(order_max: int, allow_order_4: bool = False) -> Iterator[FiniteSemigroup]:
    """All aperiodic semigroups of order ``<= order_max``, one per isomorphism class."""
    limit = MAX_ORDER if allow_order_4 else 3
    if order_max > limit:
        raise ValueError(f"order_max {order_max} exceeds the enumeration bound {limit}")
    if order_max < 1:
        return
    for order in range(1, order_max + 1):
        yield from _aperiodic_of_order(order)


_CACHE: dict[int, tuple[FiniteSemigroup, ...]] = {}


def _aperiodic_of_order(order: int) -> tuple[FiniteSemigroup, ...]:
    if order not in _CACHE:
        seen = set()
        out = []
        for table in _enumerate_tables(order):
            key = _canonical(table, order)
            if key in seen:
                continue
            seen.add(key)
            T = FiniteSemigroup(order, key)
            if is_aperiodic(T):
                out.append(T)
        _CACHE[order] = tuple(out)
    return _CACHE[order]


def assignments(letters: Sequence[str], order: int) -> Iterator[dict[str, int]]:
    for values in itertools.product(range(order), repeat=len(letters)):
        yield dict(zip(letters, values))


def find_refuting_semigroup(
    t1: Term | str, t2: Term | str, order_max: int = 3, allow_order_4: bool = False
) -> tuple[FiniteSemigroup, dict[str, int]] | None:
    t1, t2 = as_term(t1), as_term(t2)
    letters = sorted(t1.letters() | t2.letters())
    for T in enumerate_aperiodic(order_max, allow_order_4):
        for g in assignments(letters, T.order):
            if evaluate(t1, T, g) != evaluate(t2, T, g):
                return T, g
    return None


def agree_on_aperiodic(t1: Term | str, t2: Term | str, order_max: int = 3, allow_order_4: bool = False) -> bool:
    """True iff ``t1`` and ``t2`` take equal values in every small aperiodic semigroup."""
    return find_refuting_semigroup(t1, t2, order_max, allow_order_4) is None
