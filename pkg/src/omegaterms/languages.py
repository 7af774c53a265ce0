"""The languages ``L_n[t]``: expansions, regular expressions and automata.

``L_n`` is defined by structural recursion: letters denote themselves,
products denote products of languages, and ``(x)`` denotes ``L* L^n`` with
``L = L_n[x]``.  Automata are kept small by building an epsilon-free NFA once
and running products and subset constructions lazily.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .semigroup import FiniteSemigroup, transition_semigroup
from .terms import Term, as_term, top_powers

MAX_SIZE = 10_000


class ResourceLimit(RuntimeError):
    """A construction would exceed a configured size guard."""


# ---------------------------------------------------------------------------
# regular expressions


@dataclass(frozen=True)
class Regex:
    def render(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class EmptySet(Regex):
    def render(self) -> str:
        return "empty"


@dataclass(frozen=True)
class Epsilon(Regex):
    def render(self) -> str:
        return "eps"


@dataclass(frozen=True)
class Symbol(Regex):
    letter: str

    def render(self) -> str:
        return self.letter


@dataclass(frozen=True)
class Concat(Regex):
    parts: tuple[Regex, ...]

    def render(self) -> str:
        return "(" + ".".join(p.render() for p in self.parts) + ")"


@dataclass(frozen=True)
class Union(Regex):
    parts: tuple[Regex, ...]

    def render(self) -> str:
        return "(" + "|".join(p.render() for p in self.parts) + ")"


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex

    def render(self) -> str:
        return "(" + self.inner.render() + ")*"


@dataclass(frozen=True)
class FixedPower(Regex):
    inner: Regex
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("fixed power must be nonnegative")

    def render(self) -> str:
        return "(" + self.inner.render() + f")^{self.k}"


def concat(*parts: Regex) -> Regex:
    flat: list[Regex] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Concat) else [p])
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat)) if flat else Epsilon()


def regex_letters(r: Regex) -> set[str]:
    if isinstance(r, Symbol):
        return {r.letter}
    if isinstance(r, (Concat, Union)):
        return set().union(*(regex_letters(p) for p in r.parts))
    if isinstance(r, (Star, FixedPower)):
        return regex_letters(r.inner)
    return set()


def _guard(t: Term, n: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n * t.length > MAX_SIZE:
        raise ResourceLimit(f"n * |t| = {n * t.length} exceeds the guard {MAX_SIZE}")


def build_Ln(t: Term | str, n: int) -> Regex:
    """Regular expression for ``L_n[t]``."""
    t = as_term(t)
    _guard(t, n)
    return _build(t, n)


def _build(t: Term, n: int) -> Regex:
    parts: list[Regex] = []
    for a in t.atoms:
        if isinstance(a, str):
            parts.append(Symbol(a))
        else:
            inner = _build(a.base, n)
            parts.append(Concat((Star(inner), FixedPower(inner, n))))
    return concat(*parts)


def sample_expansion(t: Term | str, n: int, exponents: Sequence[int]) -> Term:
    """Replace the ``k``-th maximal-rank power ``(d)`` of ``t`` by ``d^exponents[k]``."""
    t = as_term(t)
    walls = top_powers(t)
    if len(exponents) != len(walls):
        raise ValueError(f"expected {len(walls)} exponents, got {len(exponents)}")
    for e in exponents:
        if e < n:
            raise ValueError(f"exponent {e} is below n = {n}")
    atoms = list(t.atoms)
    for i, e in sorted(zip(walls, exponents), reverse=True):
        atoms[i : i + 1] = list(t.atoms[i].base.atoms) * e
    return Term(tuple(atoms))


# ---------------------------------------------------------------------------
# epsilon-free NFA


@dataclass(frozen=True)
class Nfa:
    """Epsilon-free NFA with state 0 initial."""

    size: int
    alphabet: tuple[str, ...]
    delta: tuple[dict, ...]  # state -> letter -> frozenset of states
    accepting: frozenset[int]

    def step(self, states: Iterable[int], c: str) -> frozenset[int]:
        out: set[int] = set()
        for q in states:
            out |= self.delta[q].get(c, frozenset())
        return frozenset(out)

    def accepts(self, w: str) -> bool:
        cur = frozenset({0})
        for c in w:
            cur = self.step(cur, c)
            if not cur:
                return False
        return bool(cur & self.accepting)


class _Thompson:
    def __init__(self):
        self.eps: list[list[int]] = []
        self.edges: list[list[tuple[str, int]]] = []

    def state(self) -> int:
        self.eps.append([])
        self.edges.append([])
        return len(self.eps) - 1

    def build(self, r: Regex) -> tuple[int, int]:
        s, f = self.state(), self.state()
        if isinstance(r, EmptySet):
            pass
        elif isinstance(r, Epsilon):
            self.eps[s].append(f)
        elif isinstance(r, Symbol):
            self.edges[s].append((r.letter, f))
        elif isinstance(r, Concat):
            cur = s
            for p in r.parts:
                a, b = self.build(p)
                self.eps[cur].append(a)
                cur = b
            self.eps[cur].append(f)
        elif isinstance(r, Union):
            for p in r.parts:
                a, b = self.build(p)
                self.eps[s].append(a)
                self.eps[b].append(f)
        elif isinstance(r, Star):
            a, b = self.build(r.inner)
            self.eps[s] += [a, f]
            self.eps[b] += [a, f]
        elif isinstance(r, FixedPower):
            cur = s
            for _ in range(r.k):
                a, b = self.build(r.inner)
                self.eps[cur].append(a)
                cur = b
            self.eps[cur].append(f)
        else:
            raise TypeError(f"unknown regex node {r!r}")
        return s, f


def regex_to_nfa(r: Regex, alphabet: Iterable[str] | None = None) -> Nfa:
    th = _Thompson()
    start, final = th.build(r)
    n = len(th.eps)
    closure: list[frozenset[int]] = []
    for q in range(n):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for x in th.eps[p]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        closure.append(frozenset(seen))
    letters = tuple(sorted(set(alphabet or ()) | regex_letters(r)))
    # keep the start state and every target of a letter edge
    keep = [start] + sorted({t for q in range(n) for _, t in th.edges[q]} - {start})
    index = {q: i for i, q in enumerate(keep)}
    delta = []
    accepting = set()
    for q in keep:
        moves: dict[str, set[int]] = {}
        for p in closure[q]:
            for c, t in th.edges[p]:
                moves.setdefault(c, set()).add(index[t])
        delta.append({c: frozenset(v) for c, v in moves.items()})
        if final in closure[q]:
            accepting.add(index[q])
    return Nfa(len(keep), letters, tuple(delta), frozenset(accepting))


@lru_cache(maxsize=256)
def nfa_of(t: Term, n: int) -> Nfa:
    return regex_to_nfa(build_Ln(t, n))


# ---------------------------------------------------------------------------
# DFA


@dataclass(frozen=True)
class Dfa:
    """Complete DFA; ``delta[q][c]`` is the successor of state ``q`` on letter ``c``."""

    states: int
    alphabet: tuple[str, ...]
    delta: tuple[dict, ...]
    initial: int
    accepting: frozenset[int]

    def accepts(self, w: str) -> bool:
        q = self.initial
        for c in w:
            if c not in self.delta[q]:
                return False
            q = self.delta[q][c]
        return q in self.accepting

    def to_json(self) -> str:
        return json.dumps(
            {
                "states": self.states,
                "alphabet": list(self.alphabet),
                "delta": [[self.delta[q][c] for c in self.alphabet] for q in range(self.states)],
                "initial": self.initial,
                "accepting": sorted(self.accepting),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Dfa":
        d = json.loads(text)
        alphabet = tuple(d["alphabet"])
        delta = tuple({c: row[i] for i, c in enumerate(alphabet)} for row in d["delta"])
        return cls(d["states"], alphabet, delta, d["initial"], frozenset(d["accepting"]))

    def to_dot(self) -> str:
        lines = ["digraph dfa {", "  rankdir=LR;", '  start [shape=point];']
        for q in range(self.states):
            shape = "doublecircle" if q in self.accepting else "circle"
            lines.append(f"  q{q} [shape={shape}];")
        lines.append(f"  start -> q{self.initial};")
        for q in range(self.states):
            grouped: dict[int, list[str]] = {}
            for c in self.alphabet:
                grouped.setdefault(self.delta[q][c], []).append(c)
            for r, cs in sorted(grouped.items()):
                lines.append(f'  q{q} -> q{r} [label="{",".join(cs)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def words(self, max_len: int) -> Iterator[str]:
        """Accepted words of length at most ``max_len``, shortest first."""
        layer = [("", self.initial)]
        live = self._live()
        for _ in range(max_len + 1):
            nxt = []
            for w, q in layer:
                if q in self.accepting:
                    yield w
                for c in self.alphabet:
                    r = self.delta[q][c]
                    if r in live:
                        nxt.append((w + c, r))
            layer = nxt

    def _live(self) -> set[int]:
        back: dict[int, set[int]] = {q: set() for q in range(self.states)}
        for q in range(self.states):
            for c in self.alphabet:
                back[self.delta[q][c]].add(q)
        live = set(self.accepting)
        stack = list(live)
        while stack:
            q = stack.pop()
            for p in back[q]:
                if p not in live:
                    live.add(p)
                    stack.append(p)
        return live


def nfa_to_dfa(a: Nfa, alphabet: Iterable[str] | None = None) -> Dfa:
    letters = tuple(sorted(set(alphabet or ()) | set(a.alphabet)))
    start = frozenset({0})
    index = {start: 0}
    order = [start]
    delta: list[dict] = []
    k = 0
    while k < len(order):
        S = order[k]
        row = {}
        for c in letters:
            T = a.step(S, c)
            if T not in index:
                index[T] = len(order)
                order.append(T)
            row[c] = index[T]
        delta.append(row)
        k += 1
    accepting = frozenset(i for i, S in enumerate(order) if S & a.accepting)
    return minimize(Dfa(len(order), letters, tuple(delta), 0, accepting))


def minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA, states numbered in breadth-first order from the initial state."""
    # restrict to reachable states
    reach = {d.initial}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for c in d.alphabet:
            r = d.delta[q][c]
            if r not in reach:
                reach.add(r)
                queue.append(r)
    states = sorted(reach)
    block = {q: int(q in d.accepting) for q in states}
    while True:
        sig = {q: (block[q], tuple(block[d.delta[q][c]] for c in d.alphabet)) for q in states}
        ids: dict = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in states}
        if len(ids) == len(set(block.values())):
            block = new
            break
        block = new
    # canonical renumbering
    rep = {}
    for q in states:
        rep.setdefault(block[q], q)
    number = {block[d.initial]: 0}
    queue = deque([block[d.initial]])
    while queue:
        b = queue.popleft()
        q = rep[b]
        for c in d.alphabet:
            nb = block[d.delta[q][c]]
            if nb not in number:
                number[nb] = len(number)
                queue.append(nb)
    delta = [None] * len(number)
    for b, i in number.items():
        q = rep[b]
        delta[i] = {c: number[block[d.delta[q][c]]] for c in d.alphabet}
    accepting = frozenset(number[block[q]] for q in states if q in d.accepting)
    return Dfa(len(number), d.alphabet, tuple(delta), 0, accepting)


def to_dfa(r: Regex, alphabet: Iterable[str] | None = None) -> Dfa:
    return nfa_to_dfa(regex_to_nfa(r, alphabet), alphabet)


def dfa_of(t: Term | str, n: int, alphabet: Iterable[str] | None = None) -> Dfa:
    t = as_term(t)
    return nfa_to_dfa(nfa_of(t, n), alphabet)


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    """Language equality of two minimal DFAs over the same alphabet."""
    if d1.alphabet != d2.alphabet:
        letters = tuple(sorted(set(d1.alphabet) | set(d2.alphabet)))
        d1, d2 = _extend(d1, letters), _extend(d2, letters)
    return d1 == d2


def _extend(d: Dfa, letters: tuple[str, ...]) -> Dfa:
    sink = d.states
    delta = [dict(row) for row in d.delta] + [{}]
    for row in delta:
        for c in letters:
            row.setdefault(c, sink)
    return minimize(Dfa(d.states + 1, letters, tuple(delta), d.initial, d.accepting))


# ---------------------------------------------------------------------------
# language questions


def member(w: str, t: Term | str, n: int) -> bool:
    return nfa_of(as_term(t), n).accepts(w)


def _distance_to_accept(a: Nfa) -> list[float]:
    back: list[list[int]] = [[] for _ in range(a.size)]
    for q in range(a.size):
        for targets in a.delta[q].values():
            for r in targets:
                back[r].append(q)
    dist = [float("inf")] * a.size
    queue = deque(a.accepting)
    for q in a.accepting:
        dist[q] = 0
    while queue:
        r = queue.popleft()
        for q in back[r]:
            if dist[q] == float("inf"):
                dist[q] = dist[r] + 1
                queue.append(q)
    return dist


def nfa_intersect_empty(a: Nfa, b: Nfa) -> bool:
    # best-first on the summed distance to acceptance; pairs from which either
    # side can no longer accept are dropped
    da, db = _distance_to_accept(a), _distance_to_accept(b)
    inf = float("inf")
    if da[0] == inf or db[0] == inf:
        return True
    seen = {(0, 0)}
    heap = [(da[0] + db[0], 0, 0)]
    while heap:
        _, p, q = heapq.heappop(heap)
        if p in a.accepting and q in b.accepting:
            return False
        row = b.delta[q]
        for c, ps in a.delta[p].items():
            qs = row.get(c)
            if not qs:
                continue
            for p2 in ps:
                if da[p2] == inf:
                    continue
                for q2 in qs:
                    if db[q2] != inf and (p2, q2) not in seen:
                        seen.add((p2, q2))
                        heapq.heappush(heap, (da[p2] + db[q2], p2, q2))
    return True


def intersect_empty(t1: Term | str, n1: int, t2: Term | str, n2: int) -> bool:
    """True iff ``L_n1[t1]`` and ``L_n2[t2]`` are disjoint."""
    return nfa_intersect_empty(nfa_of(as_term(t1), n1), nfa_of(as_term(t2), n2))


def nfa_included(a: Nfa, b: Nfa) -> bool:
    """``L(a) <= L(b)``, determinizing ``b`` on the fly."""
    start = (0, frozenset({0}))
    seen = {start}
    queue = deque([start])
    while queue:
        p, S = queue.popleft()
        if p in a.accepting and not (S & b.accepting):
            return False
        for c, ps in a.delta[p].items():
            T = b.step(S, c)
            for p2 in ps:
                key = (p2, T)
                if key not in seen:
                    seen.add(key)
                    queue.append(key)
    return True


def included(t1: Term | str, n1: int, t2: Term | str, n2: int) -> bool:
    return nfa_included(nfa_of(as_term(t1), n1), nfa_of(as_term(t2), n2))


def monotone_check(t: Term | str, n: int) -> bool:
    """``L_(n+1)[t] <= L_n[t]``."""
    return included(t, n + 1, t, n)


def _transformations(d: Dfa) -> Iterator[tuple[int, ...]]:
    gens = [tuple(d.delta[q][c] for q in range(d.states)) for c in d.alphabet]
    seen = set(gens)
    frontier = list(seen)
    yield from frontier
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = tuple(g[x] for x in f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    yield h
        frontier = nxt


def _is_aperiodic_map(f: tuple[int, ...]) -> bool:
    # powers of f eventually cycle; aperiodic means the cycle has length one
    seen = {}
    p, k = f, 1
    while p not in seen:
        seen[p] = k
        p, k = tuple(f[x] for x in p), k + 1
    return k - seen[p] == 1


def is_star_free(d: Dfa) -> bool:
    """Schutzenberger: the language is star-free iff its transition semigroup is aperiodic."""
    return all(_is_aperiodic_map(f) for f in _transformations(minimize(d)))


def transition_semigroup_of(d: Dfa) -> FiniteSemigroup:
    return transition_semigroup(d)
