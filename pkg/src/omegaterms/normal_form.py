"""McCammond normal forms: checking, rewriting rules and normalization.

A rank ``i+1`` term ``a0 (b1) a1 ... (bn) an`` (the ``(bk)`` being the powers of
maximal rank) is in normal form when

1. every base ``bk`` is a Lyndon word over ``( < letters < )``;
2. no intermediate gap ``aj`` is a prefix of a power of ``bj`` or a suffix of a
   power of ``b(j+1)``;
3. doubling every power, ``a0 b1 b1 a1 ... bn bn an``, gives a rank ``i``
   normal form;
4. removing a leading ``bj`` from ``aj`` (``j > 0``) or a trailing ``b(j+1)``
   (``j < n``) breaks 2 or 3.

Rank 0 normal forms are the plain words.

The rewriting rules, read left to right as contractions::

    1.  ((x))  -> (x)          4R. (x)x  -> (x)
    2.  (x^k)  -> (x)          4L. x(x)  -> (x)
    3.  (x)(x) -> (x)          5.  (xy)x -> x(yx)

For rule 5 "contraction" means the left-to-right direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .terms import (
    DEFAULT_ALPHABET,
    Alphabet,
    Atom,
    Power,
    Term,
    as_term,
    crucial_portions,
    decompose,
    parse,
    top_powers,
)
from .words import is_lyndon, is_prefix_of_power, is_suffix_of_power, least_rotation

RULES = ("1", "2", "3", "4L", "4R", "5")
CONTRACTION, EXPANSION = "contraction", "expansion"
# rule 5 read left to right is its contraction
DIRECTION_ALIASES = {"ltr": CONTRACTION, "rtl": EXPANSION}


class RuleMismatch(ValueError):
    """The requested rule does not apply at the requested position."""


class NormalizationError(RuntimeError):
    """The normalization strategy ran out of budget or got stuck."""


# ---------------------------------------------------------------------------
# normal form check


@dataclass(frozen=True)
class Failure:
    condition: int
    position: int
    witness: str


@dataclass(frozen=True)
class NormalFormReport:
    verdict: bool
    failures: tuple[Failure, ...] = ()

    def __bool__(self) -> bool:
        return self.verdict

    def conditions(self) -> set[int]:
        return {f.condition for f in self.failures}


def _doubled(gaps: Sequence[Term], bases: Sequence[Term]) -> Term:
    atoms: tuple[Atom, ...] = gaps[0].atoms
    for b, g in zip(bases, gaps[1:]):
        atoms += b.atoms + b.atoms + g.atoms
    return Term(atoms)


def _gap_ok(gap: Term, left: Term, right: Term) -> bool:
    g = gap.render()
    return not (is_prefix_of_power(g, left.render()) or is_suffix_of_power(g, right.render()))


def _cond2_ok(gaps: Sequence[Term], bases: Sequence[Term], only: int | None = None) -> bool:
    n = len(bases)
    js = range(1, n) if only is None else ([only] if 0 < only < n else [])
    return all(_gap_ok(gaps[j], bases[j - 1], bases[j]) for j in js)


def _wall_offsets(t: Term) -> list[int]:
    offs = t.offsets()
    return [offs[i] for i in top_powers(t)]


@lru_cache(maxsize=200_000)
def _failures(t: Term, alphabet: Alphabet, open_l: bool = False, open_r: bool = False) -> tuple[Failure, ...]:
    # an open end continues into unknown context, so nothing may be absorbed there
    if t.rank == 0:
        return ()
    gaps, bases = decompose(t)
    walls = _wall_offsets(t)
    gap_pos = [0] + [w + b.length + 2 for w, b in zip(walls, bases)]
    n = len(bases)
    out: list[Failure] = []

    for k, b in enumerate(bases):
        if not is_lyndon(b.render(), alphabet):
            out.append(Failure(1, walls[k], f"base {b.render()!r} is not a Lyndon word"))

    for j in range(1, n):
        g = gaps[j].render()
        if is_prefix_of_power(g, bases[j - 1].render()):
            out.append(Failure(2, gap_pos[j], f"gap {g!r} is a prefix of a power of {bases[j - 1].render()!r}"))
        elif is_suffix_of_power(g, bases[j].render()):
            out.append(Failure(2, gap_pos[j], f"gap {g!r} is a suffix of a power of {bases[j].render()!r}"))

    inner = _failures(_doubled(gaps, bases), alphabet, open_l, open_r)
    if inner:
        first = inner[0]
        out.append(Failure(3, 0, f"doubled term is not normal: condition {first.condition}: {first.witness}"))

    for j in range(1, n + 1 - open_r):
        b = bases[j - 1].atoms
        if gaps[j].atoms[: len(b)] == b:
            mod = list(gaps)
            mod[j] = Term(gaps[j].atoms[len(b) :])
            if _cond2_ok(mod, bases) and not _failures(_doubled(mod, bases), alphabet, open_l, open_r):
                out.append(Failure(4, gap_pos[j], f"leading {bases[j - 1].render()!r} can be absorbed into the power"))
    for j in range(int(open_l), n):
        b = bases[j].atoms
        if len(gaps[j].atoms) >= len(b) and gaps[j].atoms[len(gaps[j].atoms) - len(b) :] == b:
            mod = list(gaps)
            mod[j] = Term(gaps[j].atoms[: len(gaps[j].atoms) - len(b)])
            if _cond2_ok(mod, bases) and not _failures(_doubled(mod, bases), alphabet, open_l, open_r):
                pos = walls[j] - bases[j].length
                out.append(Failure(4, pos, f"trailing {bases[j].render()!r} can be absorbed into the power"))
    return tuple(out)


def check_normal_form(t: Term | str, alphabet: Alphabet = DEFAULT_ALPHABET) -> NormalFormReport:
    failures = _failures(as_term(t), alphabet)
    return NormalFormReport(not failures, failures)


def is_normal(t: Term | str, alphabet: Alphabet = DEFAULT_ALPHABET) -> bool:
    return not _failures(as_term(t), alphabet)


def check_circular_normal_form(t: Term | str, alphabet: Alphabet = DEFAULT_ALPHABET) -> NormalFormReport:
    """Every crucial portion of ``t t`` must be in normal form."""
    t = as_term(t)
    if t.rank == 0:
        raise ValueError("circular normal form needs a term of positive rank")
    out = []
    for p in crucial_portions(t + t):
        inner = _failures(p.term, alphabet)
        if inner:
            first = inner[0]
            out.append(Failure(first.condition, p.location, f"crucial portion {p.render()!r}: {first.witness}"))
    return NormalFormReport(not out, tuple(out))


# ---------------------------------------------------------------------------
# rewriting rules


def _locate(t: Term, position: int) -> tuple[list[int], int]:
    """Path of power indices down to the body holding an atom starting at ``position``."""
    path: list[int] = []
    original = position
    while True:
        offs = t.offsets()
        for i in range(len(t.atoms)):
            if offs[i] == position:
                return path, i
            if offs[i] < position < offs[i + 1] and not isinstance(t.atoms[i], str):
                path.append(i)
                position -= offs[i] + 1
                t = t.atoms[i].base
                break
        else:
            raise RuleMismatch(f"no atom starts at position {original}")


def _body(t: Term, path: list[int]) -> Term:
    for i in path:
        t = t.atoms[i].base
    return t


def _splice(t: Term, path: list[int], new_body: Term) -> Term:
    if not path:
        return new_body
    i = path[0]
    inner = _splice(t.atoms[i].base, path[1:], new_body)
    return Term(t.atoms[:i] + (Power(inner),) + t.atoms[i + 1 :])


def _power_at(atoms: tuple[Atom, ...], i: int) -> Power:
    if i >= len(atoms) or isinstance(atoms[i], str):
        raise RuleMismatch("expected an omega-power")
    return atoms[i]


def _rewrite_atoms(atoms: tuple[Atom, ...], i: int, rule: str, direction: str, arg: int | None) -> tuple[Atom, ...]:
    if rule == "1":
        p = _power_at(atoms, i)
        if direction == CONTRACTION:
            if len(p.base.atoms) != 1 or isinstance(p.base.atoms[0], str):
                raise RuleMismatch("rule 1 contraction needs ((x))")
            return atoms[:i] + p.base.atoms + atoms[i + 1 :]
        return atoms[:i] + (Power(Term((p,))),) + atoms[i + 1 :]
    if rule == "2":
        p = _power_at(atoms, i)
        body = p.base.atoms
        if direction == CONTRACTION:
            ks = [arg] if arg is not None else [k for k in range(len(body), 1, -1)]
            for k in ks:
                if k >= 2 and len(body) % k == 0 and body == body[: len(body) // k] * k:
                    return atoms[:i] + (Power(Term(body[: len(body) // k])),) + atoms[i + 1 :]
            raise RuleMismatch("rule 2 contraction needs (x^k) with k >= 2")
        k = 2 if arg is None else arg
        if k < 2:
            raise RuleMismatch("rule 2 expansion needs k >= 2")
        return atoms[:i] + (Power(Term(body * k)),) + atoms[i + 1 :]
    if rule == "3":
        p = _power_at(atoms, i)
        if direction == CONTRACTION:
            if i + 1 >= len(atoms) or atoms[i + 1] != p:
                raise RuleMismatch("rule 3 contraction needs (x)(x)")
            return atoms[: i + 1] + atoms[i + 2 :]
        return atoms[: i + 1] + (p,) + atoms[i + 1 :]
    if rule == "4R":
        p = _power_at(atoms, i)
        body = p.base.atoms
        if direction == CONTRACTION:
            if atoms[i + 1 : i + 1 + len(body)] != body:
                raise RuleMismatch("rule 4R contraction needs (x)x")
            return atoms[: i + 1] + atoms[i + 1 + len(body) :]
        return atoms[: i + 1] + body + atoms[i + 1 :]
    if rule == "4L":
        if direction == CONTRACTION:
            ms = [arg] if arg is not None else range(1, len(atoms) - i)
            for m in ms:
                j = i + m
                if j < len(atoms) and not isinstance(atoms[j], str) and atoms[j].base.atoms == atoms[i:j]:
                    return atoms[:i] + atoms[j:]
            raise RuleMismatch("rule 4L contraction needs x(x)")
        p = _power_at(atoms, i)
        return atoms[:i] + p.base.atoms + atoms[i:]
    if rule == "5":
        if direction == CONTRACTION:
            p = _power_at(atoms, i)
            body = p.base.atoms
            ms = [arg] if arg is not None else range(1, len(body) + 1)
            for m in ms:
                if 1 <= m <= len(body) and atoms[i + 1 : i + 1 + m] == body[:m]:
                    alpha, beta = body[:m], body[m:]
                    return atoms[:i] + alpha + (Power(Term(beta + alpha)),) + atoms[i + 1 + m :]
            raise RuleMismatch("rule 5 needs (xy)x")
        ms = [arg] if arg is not None else range(1, len(atoms) - i)
        for m in ms:
            j = i + m
            if j < len(atoms) and not isinstance(atoms[j], str):
                body = atoms[j].base.atoms
                alpha = atoms[i:j]
                if len(body) >= m and body[len(body) - m :] == alpha:
                    beta = body[: len(body) - m]
                    return atoms[:i] + (Power(Term(alpha + beta)),) + alpha + atoms[j + 1 :]
        raise RuleMismatch("rule 5 expansion needs x(yx)")
    raise ValueError(f"unknown rule {rule!r}")


def apply_rule(t: Term | str, rule: str, direction: str, position: int, arg: int | None = None) -> Term:
    """Apply one rewriting rule at a serialization offset.

    ``arg`` pins down the free parameter where one exists: the exponent ``k``
    for rule 2, and the number of atoms of ``x`` for rules 4L and 5.  Without
    it the first match is used (the largest ``k`` for a rule 2 contraction).
    """
    t = as_term(t)
    rule = str(rule)
    direction = DIRECTION_ALIASES.get(direction, direction)
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    if direction not in (CONTRACTION, EXPANSION):
        raise ValueError(f"unknown direction {direction!r}")
    path, i = _locate(t, position)
    body = _body(t, path)
    atoms = _rewrite_atoms(body.atoms, i, rule, direction, arg)
    return _splice(t, path, Term(atoms))


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    direction: str
    position: int
    before: Term
    after: Term

    def to_line(self) -> str:
        return f"{self.rule} {self.direction} {self.position} {self.before.render()} -> {self.after.render()}"

    @classmethod
    def from_line(cls, line: str) -> "RewriteStep":
        head, arrow, after = line.partition(" -> ")
        if not arrow:
            raise ValueError(f"malformed trace line {line!r}")
        rule, direction, position, before = head.split()
        return cls(rule, direction, int(position), parse(before), parse(after.strip()))


@dataclass(frozen=True)
class RewriteTrace:
    start: Term
    steps: tuple[RewriteStep, ...] = ()
    end: Term | None = None

    def __post_init__(self):
        if self.end is None:
            object.__setattr__(self, "end", self.steps[-1].after if self.steps else self.start)

    def __len__(self) -> int:
        return len(self.steps)

    def to_text(self) -> str:
        lines = [f"start {self.start.render()}"]
        lines += [s.to_line() for s in self.steps]
        lines.append(f"end {self.end.render()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RewriteTrace":
        start = end = None
        steps = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("start "):
                start = parse(line[6:].strip())
            elif line.startswith("end "):
                end = parse(line[4:].strip())
            else:
                steps.append(RewriteStep.from_line(line))
        if start is None:
            raise ValueError("trace has no start line")
        return cls(start, tuple(steps), end)


def step_is_valid(step: RewriteStep) -> bool:
    """Does one application of ``step.rule`` at ``step.position`` turn before into after?"""
    try:
        path, i = _locate(step.before, step.position)
    except RuleMismatch:
        return False
    body = _body(step.before, path)
    if step.rule == "2":
        args: Iterable[int | None] = range(2, max(step.before.length, step.after.length) + 1)
    elif step.rule in ("4L", "5"):
        args = range(1, len(body.atoms) + len(_body_max(body)) + 1)
    else:
        args = [None]
    for arg in args:
        try:
            atoms = _rewrite_atoms(body.atoms, i, step.rule, step.direction, arg)
        except (RuleMismatch, ValueError):
            continue
        if _splice(step.before, path, Term(atoms)) == step.after:
            return True
    return False


def _body_max(body: Term) -> tuple:
    return max((a.base.atoms for a in body.atoms if not isinstance(a, str)), key=len, default=())


def verify_trace(trace: RewriteTrace) -> bool:
    current = trace.start
    for step in trace.steps:
        if step.before != current:
            return False
        if step.rule not in RULES or step.direction not in (CONTRACTION, EXPANSION):
            return False
        if not step_is_valid(step):
            return False
        current = step.after
    return current == trace.end


# ---------------------------------------------------------------------------
# normalization

Op = tuple  # (rule, direction, position, arg)


class _Builder:
    """Current term plus the rule applications that produced it."""

    def __init__(self, term: Term, budget: list[int], alphabet: Alphabet, open_l=False, open_r=False):
        self.open_l, self.open_r = open_l, open_r
        self.term = term
        self.ops: list[Op] = []
        self.budget = budget
        self.alphabet = alphabet

    def apply(self, rule: str, direction: str, position: int, arg: int | None = None) -> None:
        self.budget[0] -= 1
        if self.budget[0] < 0:
            raise NormalizationError("rewrite step budget exhausted")
        self.term = apply_rule(self.term, rule, direction, position, arg)
        self.ops.append((rule, direction, position, arg))

    def replay(self, ops: Iterable[Op], offset: int) -> None:
        for rule, direction, position, arg in ops:
            self.apply(rule, direction, position + offset, arg)

    def offset(self, i: int) -> int:
        return self.term.offsets()[i]

    def run_local(self, start: int, stop: int, fn: Callable, open_l=False, open_r=False) -> None:
        """Run ``fn`` on the atom range ``[start, stop)`` of the top-level body."""
        sub = Term(self.term.atoms[start:stop])
        if not sub.atoms:
            return
        _, ops = fn(sub, self.budget, self.alphabet, open_l, open_r)
        self.replay(ops, self.offset(start))

    def run_in_base(self, i: int, fn: Callable) -> None:
        sub = self.term.atoms[i].base
        _, ops = fn(sub, self.budget, self.alphabet)
        self.replay(ops, self.offset(i) + 1)


def _nf(t: Term, budget: list[int], alphabet: Alphabet, open_l=False, open_r=False) -> tuple[Term, list[Op]]:
    b = _Builder(t, budget, alphabet, open_l, open_r)
    _normalize_into(b)
    return b.term, b.ops


def _normalize_into(b: _Builder) -> None:
    seen: set[Term] = set()
    while b.term.rank > 0:
        todo = _unprepared(b)
        if todo:
            _prepare_base(b, todo[0])
            continue
        if not _failures(b.term, b.alphabet, b.open_l, b.open_r):
            return
        if b.term in seen:
            raise NormalizationError(f"normalization is cycling on {b.term.render()!r}")
        seen.add(b.term)
        _resolve_gaps(b)


def _unprepared(b: _Builder) -> list[int]:
    return [i for i in top_powers(b.term) if not _base_ready(b.term.atoms[i].base, b.alphabet)]


def _base_ready(x: Term, alphabet: Alphabet) -> bool:
    # the base need not be normal by itself, only circularly
    if x.rank == 0 and not is_normal(x, alphabet):
        return False
    if len(x.atoms) == 1 and not isinstance(x.atoms[0], str):
        return False
    if _atom_root(x.atoms)[1] > 1:
        return False
    if not is_lyndon(x.render(), alphabet):
        return False
    return x.rank == 0 or check_circular_normal_form(x, alphabet).verdict


def _atom_root(atoms: tuple[Atom, ...]) -> tuple[tuple[Atom, ...], int]:
    n = len(atoms)
    for d in range(1, n + 1):
        if n % d == 0 and atoms[:d] * (n // d) == atoms:
            return atoms[:d], n // d
    return atoms, 1


def _rotate(b: _Builder, i: int, m: int) -> None:
    """``(P Q) -> P (Q P) Q`` where ``P`` is the first ``m`` atoms of the base."""
    pos = b.offset(i)
    b.apply("4R", EXPANSION, pos)
    b.apply("5", CONTRACTION, pos, m)


def _prepare_base(b: _Builder, i: int) -> bool:
    """Make the base of the power at top-level index ``i`` ready; True if anything changed."""
    t = b.term
    x = t.atoms[i].base
    if _base_ready(x, b.alphabet):
        return False
    pos = b.offset(i)
    if len(x.atoms) == 1 and not isinstance(x.atoms[0], str):
        b.apply("1", CONTRACTION, pos)
        return True
    _, k = _atom_root(x.atoms)
    if k > 1:
        b.apply("2", CONTRACTION, pos, k)
        return True
    circular = x.rank == 0 or check_circular_normal_form(x, b.alphabet).verdict
    if not circular and not is_normal(x, b.alphabet):
        b.run_in_base(i, _nf)
        return True
    s = x.render()
    if not is_lyndon(s, b.alphabet):
        j = least_rotation(s, b.alphabet)
        offs = x.offsets()
        if j not in offs:
            raise NormalizationError(f"Lyndon conjugate of {s!r} does not start at an atom boundary")
        _rotate(b, i, offs.index(j))
        return True
    if not circular:
        _circularize(b, i)
        return True
    return False


def _circularize(b: _Builder, i: int) -> None:
    x = b.term.atoms[i].base
    pos = b.offset(i)
    n = len(x.atoms)
    for m in range(1, n):
        # a conjugate that normalizes to something shorter is progress
        if _settled_length(Term(x.atoms[m:] + x.atoms[:m]), b) < x.length:
            _rotate(b, i, m)
            b.run_in_base(i + m, _nf)
            return
    square, d2 = _nf(x + x, [b.budget[0]], b.alphabet)
    sa = square.atoms
    if len(sa) > 2 * n and sa[:n] == x.atoms and sa[-n:] == x.atoms:
        # x x = x w x:  (x) = (x w) x
        w = Term(sa[n:-n])
        b.apply("2", EXPANSION, pos, 2)
        b.replay(d2, pos + 1)
        _rotate(b, i, n)
        j = i + n
        pos_j = b.offset(j)
        b.replay(d2, pos_j + 1 + w.length)
        b.apply("2", CONTRACTION, pos_j, 2)
        b.apply("4R", CONTRACTION, pos_j)
        b.apply("5", EXPANSION, pos, n)
        return
    if len(sa) > n and sa[-n:] == x.atoms:
        z = Term(sa[:-n])
        z_nf, dz = _nf(z, [b.budget[0]], b.alphabet)
        if z_nf == x:
            # x x = z x with z a longer spelling of x:  (x) = (z) = (z) z = (z) x
            b.replay(_invert(z, dz), pos + 1)
            b.apply("4R", EXPANSION, pos)
            b.replay(dz, pos + z.length + 2)
            return
    if n < len(sa) < 2 * n and sa[-n:] == x.atoms and x.atoms[: len(sa) - n] == sa[: len(sa) - n]:
        # x = y v and x x = y x:  (x) = (y) v
        m = len(sa) - n
        y = sa[:m]
        _rotate(b, i, m)
        b.run_in_base(i + m, _nf)
        if b.term.atoms[i + m].base.atoms == y:
            b.apply("4L", CONTRACTION, pos, m)
        return
    if n < len(sa) < 2 * n and sa[:n] == x.atoms and x.atoms[n - (len(sa) - n) :] == sa[n:]:
        # x = u z and x x = x z:  (x) = u (z)
        m = len(sa) - n
        z = sa[n:]
        _rotate(b, i, n - m)
        j = i + n - m
        b.run_in_base(j, _nf)
        if b.term.atoms[j].base.atoms == z:
            b.apply("4R", CONTRACTION, b.offset(j))
        return
    if len(sa) == n and not isinstance(x.atoms[0], str):
        # x x = x, so (x) collapses; rotating past the leading power exposes that
        _rotate(b, i, 1)
        b.run_in_base(i + 1, _nf)
        return
    b.apply("2", EXPANSION, pos, 2)
    b.replay(d2, pos + 1)


def _settled_length(y: Term, b: _Builder) -> int:
    """Length of ``y`` once normalized, turned to its Lyndon conjugate and normalized again."""
    y = _nf(y, [b.budget[0]], b.alphabet)[0]
    s = y.render()
    j = least_rotation(s, b.alphabet)
    offs = y.offsets()
    if j and j in offs:
        m = offs.index(j)
        y = _nf(Term(y.atoms[m:] + y.atoms[:m]), [b.budget[0]], b.alphabet)[0]
    return y.length


def _invert(start: Term, ops: Sequence[Op]) -> list[Op]:
    """Ops that undo ``ops``: applied to their result they lead back to ``start``."""
    terms = [start]
    for rule, direction, position, arg in ops:
        terms.append(apply_rule(terms[-1], rule, direction, position, arg))
    out: list[Op] = []
    for k in range(len(ops) - 1, -1, -1):
        rule, direction, position, _ = ops[k]
        back = EXPANSION if direction == CONTRACTION else CONTRACTION
        before, after = terms[k + 1], terms[k]
        for arg in [None, *range(1, max(before.length, after.length) + 1)]:
            try:
                if apply_rule(before, rule, back, position, arg) == after:
                    out.append((rule, back, position, arg))
                    break
            except (RuleMismatch, ValueError):
                continue
        else:
            raise NormalizationError(f"cannot invert rule {rule} at {position}")
    return out


def _segments(t: Term) -> list[tuple[int, int]]:
    walls = top_powers(t)
    bounds = [-1] + walls + [len(t.atoms)]
    return [(bounds[k] + 1, bounds[k + 1]) for k in range(len(walls) + 1)]


def _resolve_gaps(b: _Builder) -> None:
    walls = top_powers(b.term)
    for w in reversed(range(len(walls))):
        i = top_powers(b.term)[w]
        pos = b.offset(i)
        size = b.term.atoms[i].base.length
        # copies inserted at an open end could never be absorbed again
        if not (b.open_r and w == len(walls) - 1):
            b.apply("4R", EXPANSION, pos)
            b.apply("4R", EXPANSION, pos)
        if not (b.open_l and w == 0):
            b.apply("4L", EXPANSION, pos)
            # the power now sits after the inserted copy
            b.apply("4L", EXPANSION, pos + size)
    n = len(walls)
    for k in range(n + 1):
        start, stop = _segments(b.term)[k]
        b.run_local(start, stop, _nf, k > 0 or b.open_l, k < n or b.open_r)
    _contract(b)


def _contract(b: _Builder) -> None:
    changed = True
    while changed:
        changed = False
        t = b.term
        walls = top_powers(t)
        gaps, bases = decompose(t)
        n = len(bases)
        for j in range(1, n):
            if bases[j - 1] == bases[j]:
                beta = bases[j].atoms
                root, k = _atom_root(gaps[j].atoms) if gaps[j].atoms else (beta, 0)
                if not gaps[j].atoms or root == beta:
                    pos = b.offset(walls[j - 1])
                    for _ in range(k):
                        b.apply("4R", CONTRACTION, pos)
                    b.apply("3", CONTRACTION, pos)
                    changed = True
                    break
        if changed:
            continue
        for j in range(n):
            beta = bases[j].atoms
            after = gaps[j + 1].atoms
            if after[: len(beta)] == beta and not (b.open_r and j + 1 == n):
                mod = list(gaps)
                mod[j + 1] = Term(after[len(beta) :])
                if _removal_allowed(mod, bases, j + 1, b):
                    b.apply("4R", CONTRACTION, b.offset(walls[j]))
                    changed = True
                    break
            before = gaps[j].atoms
            if len(before) >= len(beta) and before[len(before) - len(beta) :] == beta and not (b.open_l and j == 0):
                mod = list(gaps)
                mod[j] = Term(before[: len(before) - len(beta)])
                if _removal_allowed(mod, bases, j, b):
                    b.apply("4L", CONTRACTION, b.offset(walls[j] - len(beta)), len(beta))
                    changed = True
                    break


def _removal_allowed(gaps: list[Term], bases: list[Term], j: int, b: _Builder) -> bool:
    return _cond2_ok(gaps, bases, only=j) and not _failures(_doubled(gaps, bases), b.alphabet, b.open_l, b.open_r)


def budget_for(t: Term) -> int:
    return 10 * t.length**2


def normalize(
    t: Term | str, alphabet: Alphabet = DEFAULT_ALPHABET, budget: int | None = None
) -> tuple[Term, RewriteTrace]:
    """Rewrite ``t`` into its normal form using rules 1-5 only.

    Returns the normal form together with the full rewrite trace.  Raises
    :class:`NormalizationError` if the step budget (default ``10 |t|^2``) is
    exhausted or the strategy stops making progress.
    """
    t = as_term(t)
    if not t.atoms:
        raise ValueError("empty term")
    limit = [budget_for(t) if budget is None else budget]
    end, ops = _nf(t, limit, alphabet)
    steps = []
    current = t
    for rule, direction, position, arg in ops:
        nxt = apply_rule(current, rule, direction, position, arg)
        steps.append(RewriteStep(rule, direction, position, current, nxt))
        current = nxt
    assert current == end
    if not is_normal(end, alphabet):
        raise NormalizationError(f"strategy ended on {end.render()!r}, which is not in normal form")
    return end, RewriteTrace(t, tuple(steps), end)


def normal_form(t: Term | str, alphabet: Alphabet = DEFAULT_ALPHABET) -> Term:
    return normalize(t, alphabet)[0]
