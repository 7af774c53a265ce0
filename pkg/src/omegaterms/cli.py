"""Command-line front end.

Exit codes: 0 success or a positive verdict, 1 a negative verdict, 2 usage or
input errors, 3 a resource guard was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Callable, Iterator

from . import languages as lang
from .decide import NotNormal, TheoremViolation, decide_eq, decide_eq_language
from .generate import random_term
from .normal_form import (
    NormalizationError,
    check_circular_normal_form,
    check_normal_form,
    normalize,
    verify_trace,
)
from .semigroup import FiniteSemigroup, agree_on_aperiodic, evaluate, ind, is_aperiodic
from .terms import Power, Term, TermSyntaxError, mu, parse

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class Output:
    """Collects text lines or one JSON document."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}
        self.lines: list[str] = []

    def put(self, key: str, value, text: str | None = None) -> None:
        self.data[key] = value
        if text is not None:
            self.lines.append(text)

    def flush(self, stream) -> None:
        if self.as_json:
            stream.write(json.dumps(self.data, sort_keys=True) + "\n")
        elif self.lines:
            stream.write("\n".join(self.lines) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _report_dict(report) -> list[dict]:
    return [{"condition": f.condition, "position": f.position, "witness": f.witness} for f in report.failures]


def cmd_info(args, out: Output) -> int:
    t = parse(args.term)
    report = check_normal_form(t)
    out.put("term", str(t), f"term={t}")
    out.put("rank", t.rank, f"rank={t.rank}")
    out.put("length", t.length, f"length={t.length}")
    out.put("mu", mu(t), f"mu={mu(t)}")
    out.put("normal", report.verdict, f"normal={str(report.verdict).lower()}")
    circ = check_circular_normal_form(t).verdict
    out.put("circular_normal", circ, f"circular_normal={str(circ).lower()}")
    return EXIT_TRUE


def cmd_nf_check(args, out: Output) -> int:
    t = parse(args.term)
    report = check_normal_form(t)
    out.put("term", str(t))
    out.put("normal", report.verdict, f"{t}: {'normal' if report else 'not normal'}")
    out.put("failures", _report_dict(report))
    for f in report.failures:
        out.lines.append(f"  condition {f.condition} at {f.position}: {f.witness}")
    return EXIT_TRUE if report else EXIT_FALSE


def cmd_nf_normalize(args, out: Output) -> int:
    t = parse(args.term)
    end, trace = normalize(t, budget=args.budget)
    out.put("term", str(t))
    out.put("normal_form", str(end), str(end))
    out.put("steps", len(trace))
    if args.trace:
        out.put("trace", trace.to_text().splitlines())
        out.lines.extend(trace.to_text().splitlines())
    return EXIT_TRUE


def cmd_eq(args, out: Output) -> int:
    t1, t2 = parse(args.t1), parse(args.t2)
    if args.method == "language" and args.no_normalize:
        verdict = decide_eq_language(t1, t2)
    else:
        verdict = decide_eq(t1, t2, method=args.method, budget=args.budget)
    out.data.update(verdict.to_dict())
    text = f"{'equal' if verdict.equal else 'not equal'} ({verdict.method})"
    if verdict.n is not None:
        text += f", n={verdict.n}"
    out.lines.append(text)
    out.lines.append(f"  {verdict.normal_form_1}  vs  {verdict.normal_form_2}")
    return EXIT_TRUE if verdict.equal else EXIT_FALSE


def _n(args) -> int:
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    return args.n


def cmd_lang_build(args, out: Output) -> int:
    t = parse(args.term)
    n = _n(args)
    regex = lang.build_Ln(t, n)
    if args.format == "regex":
        payload = regex.render() + "\n"
    else:
        dfa = lang.to_dfa(regex)
        payload = dfa.to_dot() if args.format == "dot" else dfa.to_json() + "\n"
        out.put("states", dfa.states)
    if args.out:
        Path(args.out).write_text(payload)
        out.put("written", args.out, f"wrote {args.format} to {args.out}")
    else:
        out.put(args.format, payload if args.format != "json" else json.loads(payload), payload.rstrip("\n"))
    return EXIT_TRUE


def cmd_lang_member(args, out: Output) -> int:
    t = parse(args.term)
    ok = lang.member(args.word, t, _n(args))
    out.put("member", ok, "member" if ok else "not a member")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_lang_starfree(args, out: Output) -> int:
    t = parse(args.term)
    n = _n(args)
    d = lang.dfa_of(t, n)
    ok = lang.is_star_free(d)
    out.put("n", n)
    out.put("states", d.states)
    out.put("star_free", ok, f"L_{n}[{t}] is {'star-free' if ok else 'not star-free'} ({d.states} states)")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_lang_sweep(args, out: Output) -> int:
    # exploratory: nothing is asserted below mu
    t = parse(args.term)
    top = args.max_n if args.max_n else mu(t)
    rows = []
    for n in range(1, top + 1):
        ok = lang.is_star_free(lang.dfa_of(t, n))
        rows.append({"n": n, "star_free": ok})
        out.lines.append(f"n={n} star_free={str(ok).lower()}")
    out.put("mu", mu(t))
    out.put("sweep", rows)
    return EXIT_TRUE


def cmd_lang_disjoint(args, out: Output) -> int:
    t1, t2 = parse(args.t1), parse(args.t2)
    n = _n(args)
    empty = lang.intersect_empty(t1, n, t2, n)
    out.put("n", n)
    out.put("disjoint", empty, "disjoint" if empty else "intersecting")
    return EXIT_TRUE if empty else EXIT_FALSE


def _load_table(path: str) -> FiniteSemigroup:
    try:
        return FiniteSemigroup.load(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except (json.JSONDecodeError, TypeError, KeyError) as e:
        raise UsageError(f"malformed semigroup file {path}: {e}") from None


def _parse_assignment(text: str) -> dict[str, int]:
    g = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        letter, eq, value = item.partition("=")
        if not eq or not letter.strip() or not value.strip().lstrip("-").isdigit():
            raise UsageError(f"bad assignment item {item!r}; expected letter=index")
        g[letter.strip()] = int(value)
    return g


def cmd_sgp_eval(args, out: Output) -> int:
    T = _load_table(args.table)
    t = parse(args.term)
    g = _parse_assignment(args.assign)
    missing = sorted(t.letters() - g.keys())
    if missing:
        raise UsageError(f"assignment misses letters {', '.join(missing)}")
    bad = [c for c, v in g.items() if not 0 <= v < T.order]
    if bad:
        raise UsageError(f"assignment values out of range for {', '.join(bad)}")
    v = evaluate(t, T, g)
    out.put("value", v, str(v))
    return EXIT_TRUE


def cmd_sgp_aperiodic(args, out: Output) -> int:
    T = _load_table(args.table)
    ok = is_aperiodic(T)
    out.put("aperiodic", ok, "aperiodic" if ok else "not aperiodic")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_sgp_ind(args, out: Output) -> int:
    T = _load_table(args.table)
    v = ind(T)
    out.put("ind", v, str(v))
    return EXIT_TRUE


# ---------------------------------------------------------------------------
# fuzzing


def invariant_failure(t: Term, oracle_order: int = 2) -> str | None:
    """Name of the first violated invariant for ``t``, or ``None``."""
    try:
        end, trace = normalize(t)
    except NormalizationError as e:
        return f"normalize: {e}"
    if not check_normal_form(end):
        return "output not normal"
    if not verify_trace(trace):
        return "trace does not verify"
    again, _ = normalize(end)
    if again != end:
        return "normalize is not idempotent"
    if not agree_on_aperiodic(t, end, order_max=oracle_order):
        return "output differs from input in a small aperiodic semigroup"
    return None


def _shrinks(atoms: tuple) -> Iterator[tuple]:
    for i, a in enumerate(atoms):
        yield atoms[:i] + atoms[i + 1 :]
        if isinstance(a, Power):
            yield atoms[:i] + a.base.atoms + atoms[i + 1 :]
            for inner in _shrinks(a.base.atoms):
                if inner:
                    yield atoms[:i] + (Power(Term(inner)),) + atoms[i + 1 :]


def minimize_counterexample(t: Term, fails: Callable[[Term], bool]) -> Term:
    """Greedy deletion of letters and unwrapping of powers while ``fails`` holds."""
    changed = True
    while changed:
        changed = False
        for atoms in _shrinks(t.atoms):
            if atoms and fails(Term(atoms)):
                t, changed = Term(atoms), True
                break
    return t


def cmd_fuzz(args, out: Output) -> int:
    rng = random.Random(args.seed)
    failures = []
    for k in range(args.count):
        t = random_term(rng, max_len=args.max_len, letters=args.letters)
        why = invariant_failure(t)
        if why is not None:
            small = minimize_counterexample(t, lambda s: invariant_failure(s) is not None)
            failures.append({"case": k, "term": str(t), "reason": why, "minimized": str(small)})
            out.lines.append(f"case {k}: {t}: {why}; minimized to {small}")
    out.put("seed", args.seed)
    out.put("count", args.count)
    out.put("failures", failures)
    out.lines.append(f"{args.count} cases, {len(failures)} failures")
    return EXIT_FALSE if failures else EXIT_TRUE


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omegaterms", description="Omega-terms over finite aperiodic semigroups.")
    p.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="rank, length, mu and normality of a term")
    s.add_argument("term")
    s.set_defaults(func=cmd_info)

    nf = sub.add_parser("nf", help="normal forms").add_subparsers(dest="nf_command", required=True)
    s = nf.add_parser("check")
    s.add_argument("term")
    s.set_defaults(func=cmd_nf_check)
    s = nf.add_parser("normalize")
    s.add_argument("term")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--budget", type=int, default=None, help="override the rewrite step guard")
    s.set_defaults(func=cmd_nf_normalize)

    s = sub.add_parser("eq", help="decide equality over finite aperiodic semigroups")
    s.add_argument("t1")
    s.add_argument("t2")
    s.add_argument("--method", choices=["normalize", "language", "both"], default="normalize")
    s.add_argument("--no-normalize", action="store_true", help="with --method language, require normal-form inputs")
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(func=cmd_eq)

    lg = sub.add_parser("lang", help="the languages L_n").add_subparsers(dest="lang_command", required=True)
    s = lg.add_parser("build")
    s.add_argument("term")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--format", choices=["dot", "json", "regex"], default="regex")
    s.set_defaults(func=cmd_lang_build)
    s = lg.add_parser("member")
    s.add_argument("term")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("word")
    s.set_defaults(func=cmd_lang_member)
    s = lg.add_parser("starfree")
    s.add_argument("term")
    s.add_argument("-n", type=int, required=True)
    s.set_defaults(func=cmd_lang_starfree)
    s = lg.add_parser("disjoint")
    s.add_argument("t1")
    s.add_argument("t2")
    s.add_argument("-n", type=int, required=True)
    s.set_defaults(func=cmd_lang_disjoint)
    s = lg.add_parser("sweep", help="star-freeness for n = 1..max-n (exploratory)")
    s.add_argument("term")
    s.add_argument("--max-n", type=int, default=None)
    s.set_defaults(func=cmd_lang_sweep)

    sg = sub.add_parser("sgp", help="finite semigroups").add_subparsers(dest="sgp_command", required=True)
    s = sg.add_parser("eval")
    s.add_argument("term")
    s.add_argument("--table", required=True)
    s.add_argument("--assign", required=True)
    s.set_defaults(func=cmd_sgp_eval)
    for name, fn in (("aperiodic", cmd_sgp_aperiodic), ("ind", cmd_sgp_ind)):
        s = sg.add_parser(name)
        s.add_argument("--table", required=True)
        s.set_defaults(func=fn)

    s = sub.add_parser("fuzz", help="random invariant checks")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--max-len", type=int, default=12)
    s.add_argument("--letters", default="ab")
    s.set_defaults(func=cmd_fuzz)
    return p


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_TRUE if e.code == 0 else EXIT_INPUT
    out = Output(args.json)

    def fail(code: int, kind: str, err: Exception) -> int:
        if args.json:
            stderr.write(json.dumps({"error": kind, "message": str(err)}) + "\n")
        else:
            stderr.write(f"error: {err}\n")
        return code

    try:
        code = args.func(args, out)
    except (lang.ResourceLimit, NormalizationError) as e:
        return fail(EXIT_GUARD, "resource", e)
    except TermSyntaxError as e:
        return fail(EXIT_INPUT, "syntax", e)
    except NotNormal as e:
        return fail(EXIT_INPUT, "not_normal", e)
    except TheoremViolation as e:
        return fail(EXIT_FALSE, "theorem_violation", e)
    except (UsageError, ValueError) as e:
        return fail(EXIT_INPUT, "input", e)
    out.flush(stdout)
    return code


def main() -> None:
    sys.exit(run())
