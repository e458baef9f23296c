"""``hou-focus run <scenario>``: run the tasks of a scenario file.

Scenario files hold one directive per line::

    basetype <ident>
    const <ident> : <type>
    meta <ident> : <type|?>
    let <ident> = <term>
    option por dsp|strict|off
    option max_depth|max_solutions|max_nodes <int>
    task ground <term> focus <term> {, <term>} [as <ident>]
    task member <term> in <ident>
    task only <np> <vp> focus <term>
    task also <np> <vp> focus <term>
    task chain <np> <vp> ops (only <term>) (also <term>) ...
    task soe source <term> pairs (<term>,<term>) ... template <term>
    task match <term> == <term>
    task unify <term> == <term>

Every task takes an optional ``expect none`` or ``expect <int>`` suffix.
Exit codes: 0 all expectations met, 1 an expectation failed, 2 parse
error, 3 type error, 4 search limit exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field

from .errors import (Deadlock, FocusError, LimitExceeded, NoSolution, ParseError, PreconditionViolated,
                     TypeMismatch)
from .focus import PorMode, analyze_operator_chain, build_ground_equation, fsv_member, \
    interpret_also, interpret_only, solve_fsv
from .soe import SoeProblem, build_soe_equations, schedule_solve
from .term_core.signature import Signature
from .term_core.syntax import TokenStream, format_term, parse_term_tokens, parse_type_tokens
from .term_core.terms import Term, spine
from .term_core.types import order_of_type
from .unification import Problem, SearchLimits, check_order, ho_match, pre_unify

EXIT_OK, EXIT_EXPECT, EXIT_PARSE, EXIT_TYPE, EXIT_LIMIT = 0, 1, 2, 3, 4
TASK_KINDS = ("ground", "member", "only", "also", "chain", "soe", "match", "unify")
LIMIT_OPTIONS = ("max_depth", "max_solutions", "max_nodes")


@dataclass
class Task:
    kind: str
    line: int
    args: dict
    expect: int | None = None   # None: at least one solution
    expect_given: bool = False


@dataclass
class Scenario:
    sig: Signature
    tasks: list[Task]
    options: dict = field(default_factory=dict)


@dataclass
class TaskReport:
    task: Task
    solutions: list[list[tuple[str, str]]] = field(default_factory=list)
    status: str = "none"
    message: str = ""
    elapsed: float = 0.0
    orders: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.status == "limit":
            return False
        if self.task.expect_given:
            return len(self.solutions) == (self.task.expect or 0)
        return len(self.solutions) >= 1


@dataclass
class Report:
    tasks: list[TaskReport]
    exit_code: int = EXIT_OK
    error: str = ""

    def render(self, verbose: bool = False) -> str:
        out = []
        for i, tr in enumerate(self.tasks, 1):
            out.append(f"task {i}: {tr.task.kind} (line {tr.task.line})")
            for k, sol in enumerate(tr.solutions, 1):
                for var, term in sol:
                    out.append(f"solution {k}: {var} := {term}")
            if tr.message:
                out.append(f"note: {tr.message}")
            out.append(f"status: {tr.status}")
            if not tr.passed:
                want = "none" if tr.task.expect == 0 else (tr.task.expect or "at least 1")
                out.append(f"expectation failed: wanted {want}, got {len(tr.solutions)}")
            if verbose:
                out.append(f"order: {max(tr.orders, default=0)}")
                out.append(f"time: {tr.elapsed:.3f}s")
        if self.error:
            out.append(f"error: {self.error}")
        return "\n".join(out) + ("\n" if out else "")


# -- scenario parsing ------------------------------------------------------

def _term(ts: TokenStream, sig: Signature) -> Term:
    return parse_term_tokens(ts, sig)


def _keyword(ts: TokenStream, word: str):
    tok = ts.peek()
    if tok.kind != "ident" or tok.value != word:
        raise ts.error(f"expected {word!r}")
    ts.next()


def _parse_task(ts: TokenStream, sig: Signature, line: int) -> Task:
    kind = ts.ident().value
    args: dict = {}
    if kind == "ground":
        args["sem"] = _term(ts, sig)
        _keyword(ts, "focus")
        foci = [_term(ts, sig)]
        while ts.accept(","):
            foci.append(_term(ts, sig))
        args["foci"] = foci
        if ts.at("as"):
            ts.next()
            args["name"] = ts.ident().value
    elif kind == "member":
        args["candidate"] = _term(ts, sig)
        _keyword(ts, "in")
        args["fsv"] = ts.ident().value
    elif kind in ("only", "also"):
        args["np"] = _term(ts, sig)
        args["vp"] = _term(ts, sig)
        _keyword(ts, "focus")
        args["focus"] = _term(ts, sig)
    elif kind == "chain":
        args["np"] = _term(ts, sig)
        args["vp"] = _term(ts, sig)
        _keyword(ts, "ops")
        ops = []
        while ts.accept("("):
            op = ts.ident()
            if op.value not in ("only", "also"):
                raise ParseError(f"unknown focus operator {op.value!r}", op.pos, ts.text)
            ops.append((op.value, _term(ts, sig)))
            ts.expect(")")
        if not ops:
            raise ts.error("a chain needs at least one (operator focus) group")
        args["ops"] = ops
    elif kind == "soe":
        _keyword(ts, "source")
        args["source"] = _term(ts, sig)
        _keyword(ts, "pairs")
        pairs = []
        while ts.accept("("):
            sp = _term(ts, sig)
            ts.expect(",")
            pairs.append((sp, _term(ts, sig)))
            ts.expect(")")
        args["pairs"] = pairs
        _keyword(ts, "template")
        args["template"] = _term(ts, sig)
    elif kind in ("match", "unify"):
        args["lhs"] = _term(ts, sig)
        ts.expect("==")
        args["rhs"] = _term(ts, sig)
    else:
        raise ParseError(f"unknown task kind {kind!r}", ts.tokens[ts.i - 1].pos, ts.text)
    task = Task(kind, line, args)
    if ts.at("expect"):
        ts.next()
        tok = ts.next()
        if tok.kind == "ident" and tok.value == "none":
            task.expect = 0
        elif tok.kind == "num":
            task.expect = int(tok.value)
        else:
            raise ParseError("expected 'none' or a number after 'expect'", tok.pos, ts.text)
        task.expect_given = True
    return task


def parse_scenario(text: str) -> Scenario:
    sig = Signature()
    scenario = Scenario(sig, [])
    for lineno, raw in enumerate(text.splitlines(), 1):
        ts = TokenStream(raw)
        if ts.at_end():
            continue
        try:
            word = ts.ident().value
            if word == "basetype":
                sig.declare_base(ts.ident().value)
            elif word == "const":
                name = ts.ident().value
                ts.expect(":")
                sig.declare_const(name, parse_type_tokens(ts, sig))
            elif word == "meta":
                name = ts.ident().value
                ts.expect(":")
                sig.declare_meta(name, None if ts.accept("?") else parse_type_tokens(ts, sig))
            elif word == "let":
                name = ts.ident().value
                ts.expect("=")
                sig.define(name, _term(ts, sig))
            elif word == "option":
                name = ts.ident().value
                tok = ts.next()
                if name == "por" and tok.value in {m.value for m in PorMode}:
                    scenario.options["por"] = tok.value
                elif name in LIMIT_OPTIONS and tok.kind == "num" and int(tok.value) > 0:
                    scenario.options[name] = int(tok.value)
                else:
                    raise ParseError(f"bad option {name} {tok.value!r}", tok.pos, raw)
            elif word == "task":
                scenario.tasks.append(_parse_task(ts, sig, lineno))
            else:
                raise ParseError(f"unknown directive {word!r}", 0, raw)
            if not ts.at_end():
                raise ts.error(f"unexpected {ts.peek().value!r}")
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except TypeMismatch as exc:
            raise TypeMismatch(f"line {lineno}: {exc}") from None
    return scenario


# -- execution -------------------------------------------------------------

def _fmt(t: Term) -> str:
    return format_term(t)


def _run_task(task: Task, sig: Signature, lim: SearchLimits, mode: PorMode, fsvs: dict, report: TaskReport):
    a = task.args
    sols = report.solutions
    if task.kind == "ground":
        geq = build_ground_equation(a["sem"], a["foci"], sig)
        report.orders.append(check_order(geq.problem()))
        name = a.get("name", geq.gd_var.name)
        fsvs[name] = []  # later member tasks see an empty value if this one fails
        found = fsvs[name] = solve_fsv(geq, lim, mode)
        sols.extend([(geq.gd_var.name, _fmt(f.gd))] for f in found)
    elif task.kind == "member":
        if a["fsv"] not in fsvs:
            raise FocusError(f"no ground task named {a['fsv']!r} ran before this one")
        for fsv in fsvs[a["fsv"]]:
            wits = fsv_member(fsv, a["candidate"], lim)
            if wits is not None:
                sols.append([(f"t{i}", _fmt(w)) for i, w in enumerate(wits, 1)] or [("member", "true")])
    elif task.kind in ("only", "also"):
        geq = build_ground_equation(a["vp"], [a["focus"]], sig)
        report.orders.append(check_order(geq.problem()))
        interpret = interpret_only if task.kind == "only" else interpret_also
        for fsv in solve_fsv(geq, lim, mode):
            sols.append([("reading", _fmt(interpret(a["np"], a["vp"], fsv)))])
    elif task.kind == "chain":
        for reading in analyze_operator_chain(a["vp"], a["ops"], a["np"], lim, mode):
            lines = []
            for k, stage in enumerate(reading.stages, 1):
                report.orders.append(check_order(stage.equation.problem()))
                lines.append((f"G{k}", _fmt(stage.fsv.gd)))
            lines.append(("reading", _fmt(reading.formula)))
            sols.append(lines)
    elif task.kind == "soe":
        eqs = build_soe_equations(SoeProblem(a["source"], a["pairs"], a["template"]))
        trace: list = []
        try:
            results = schedule_solve(eqs, lim, mode, trace)
        finally:
            report.orders.extend(max((order_of_type(ty) for ty in types.values()), default=0)
                                 for _, types, _ in trace)
        an_name = spine(eqs[0].lhs)[0].name
        gd_head, focus_vars = spine(eqs[2].lhs) if len(eqs) > 2 else (None, [])
        for r in results:
            lines = [(an_name, _fmt(r.an))]
            if r.gd is not None:
                lines.append((gd_head.name, _fmt(r.gd)))
                lines.extend((v.name, _fmt(f)) for v, f in zip(focus_vars, r.foci))
            lines.append(("TSem", _fmt(r.target_sem)))
            sols.append(lines)
    else:
        problem = Problem([(a["lhs"], a["rhs"])], sig)
        report.orders.append(check_order(problem))
        names = list(dict.fromkeys(sorted(problem.free_var_types())))
        if task.kind == "match":
            for s in ho_match(problem, lim):
                sols.append([(n, _fmt(s[n])) for n in names if n in s] or [("identity", "{}")])
        else:
            for s in pre_unify(problem, lim):
                lines = [(n, _fmt(s.substitution[n])) for n in names if n in s.substitution]
                lines += [("residual", f"{_fmt(l)} == {_fmt(r)}") for l, r in s.residual_flex_flex]
                sols.append(lines or [("identity", "{}")])


def run_scenario(path, max_depth=None, max_solutions=None, max_nodes=None, por=None) -> Report:
    """Parse and run a scenario file; flags given here override the
    scenario's own ``option`` lines."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        scenario = parse_scenario(text)
    except ParseError as exc:
        return Report([], EXIT_PARSE, str(exc))
    except TypeMismatch as exc:
        return Report([], EXIT_TYPE, str(exc))
    opts = scenario.options
    lim = SearchLimits(
        max_depth=max_depth or opts.get("max_depth", 8),
        max_solutions=max_solutions or opts.get("max_solutions", 50),
        max_nodes=max_nodes or opts.get("max_nodes", 100_000),
    )
    mode = PorMode(por or opts.get("por", "dsp"))
    report = Report([])
    fsvs: dict = {}
    for task in scenario.tasks:
        tr = TaskReport(task)
        report.tasks.append(tr)
        start = time.perf_counter()
        try:
            _run_task(task, scenario.sig, lim, mode, fsvs, tr)
        except LimitExceeded as exc:
            tr.status, tr.message = "limit", str(exc)
        except (NoSolution, Deadlock) as exc:
            tr.solutions.clear()
            tr.message = str(exc)
        except (TypeMismatch, FocusError, PreconditionViolated, ValueError) as exc:
            tr.elapsed = time.perf_counter() - start
            report.exit_code, report.error = EXIT_TYPE, f"task {len(report.tasks)} (line {task.line}): {exc}"
            return report
        tr.elapsed = time.perf_counter() - start
        if tr.status != "limit":
            tr.status = "ok" if tr.solutions else "none"
    if any(tr.status == "limit" for tr in report.tasks):
        report.exit_code = EXIT_LIMIT
    elif not all(tr.passed for tr in report.tasks):
        report.exit_code = EXIT_EXPECT
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hou-focus",
                                     description="Focus semantic values by higher-order unification.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the tasks of a scenario file")
    run.add_argument("file")
    run.add_argument("--max-depth", type=int, default=None, help="binding depth bound (default 8)")
    run.add_argument("--max-solutions", type=int, default=None, help="default 50")
    run.add_argument("--max-nodes", type=int, default=None, help="default 100000")
    run.add_argument("--por", choices=[m.value for m in PorMode], default=None,
                     help="primary occurrence restriction (default dsp)")
    run.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for flag in ("max_depth", "max_solutions", "max_nodes"):
        value = getattr(args, flag)
        if value is not None and value <= 0:
            print(f"hou-focus: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_PARSE
    try:
        report = run_scenario(args.file, args.max_depth, args.max_solutions, args.max_nodes, args.por)
    except OSError as exc:
        print(f"hou-focus: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(report.render(args.verbose))
    for i, tr in enumerate(report.tasks, 1):
        order = max(tr.orders, default=0)
        if order > 3:
            print(f"warning: task {i} involves a variable of order {order}; "
                  f"matching is only known to be decidable up to order 3", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
