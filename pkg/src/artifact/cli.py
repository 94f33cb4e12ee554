"""Command-line front end.

Exit codes: 0 yes/ok, 1 no, 2 usage or input error, 3 internal invariant violation.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import decide, ecs, fixtures, games, generators, oracle, sim, synth
from .graphalg import mec_decomposition
from .model import InvalidMdp, MdpError, format_mdp, parse_mdp, resolve_parity, validate
from .qpl import ClauseBlowup, QplSyntaxError, bind, parse, pretty

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _err(msg):
    print(f"artifact: {msg}", file=sys.stderr)


def load_mdp(spec, *, check=True):
    """A file path, or ``fixture:NAME`` for a built-in example."""
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        if name not in fixtures.FIXTURES:
            raise UsageError(f"unknown fixture {name!r} (have {', '.join(sorted(fixtures.FIXTURES))})")
        return fixtures.FIXTURES[name][0]()
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc.strerror}") from None
    return parse_mdp(text, check=check)


def _formula(args):
    if args.formula is not None and args.formula_file is not None:
        raise UsageError("give --formula or --formula-file, not both")
    if args.formula_file is not None:
        text = Path(args.formula_file).read_text(encoding="utf-8")
        text = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    elif args.formula is not None:
        text = args.formula
    else:
        raise UsageError("missing --formula")
    return parse(text)


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_decide(args):
    m = load_mdp(args.mdp)
    f = _formula(args)
    bind(f, m)
    v = decide.decide_formula(m, args.state, f, args.path, threads=args.threads)
    if args.verify:
        try:
            problems = decide.verify_verdict(m, args.state, f, v)
        except oracle.SizeLimit as exc:
            _err(f"--verify skipped: {exc}")
        else:
            if problems:
                for p in problems:
                    _err(f"verify: {p}")
                raise decide.InvariantViolation("verdict disagrees with the brute-force oracle")
            _err("verify: oracle agrees")
    if args.emit_dot:
        conds = [] if v.analysis is None else v.analysis.sure
        arena = games.game_of_mdp(m, conds or None)
        region = frozenset(range(len(arena)))
        if conds:
            region = games.solve_streett(arena, [c.name for c in conds], strategy=False).region
        Path(args.emit_dot).write_text(games.arena_to_dot(arena, region), encoding="utf-8")
    if args.json:
        _emit(v.to_json())
    else:
        print("yes" if v.answer else "no")
        if v.answer:
            print(f"clause: {v.clause}")
        else:
            print(f"reason: {v.reason}")
    return EXIT_YES if v.answer else EXIT_NO


def cmd_synth(args):
    m = load_mdp(args.mdp)
    f = _formula(args)
    bind(f, m)
    eps = Fraction(args.epsilon)
    if not 0 < eps < 1:
        raise UsageError("--epsilon must lie strictly between 0 and 1")
    v = decide.decide_formula(m, args.state, f, args.path, threads=args.threads)
    if not v.answer:
        _err(f"not realizable at {args.state} ({v.reason})")
        return EXIT_NO
    sigma = synth.synthesize_clause(m, v.analysis, eps)
    _emit(
        {"schema_version": decide.SCHEMA_VERSION, "formula": pretty(f), "state": args.state, "epsilon": str(eps), "strategy": sigma.to_json(m)},
        args.out,
    )
    return EXIT_YES


def cmd_simulate(args):
    m = load_mdp(args.mdp)
    if (args.strategy is None) == (args.formula is None and args.formula_file is None):
        raise UsageError("give exactly one of --strategy or --formula")
    if args.strategy is not None:
        doc = json.loads(Path(args.strategy).read_text(encoding="utf-8"))
        sigma = synth.strategy_from_json(m, doc.get("strategy", doc))
    else:
        f = _formula(args)
        bind(f, m)
        v = decide.decide_formula(m, args.state, f, args.path)
        if not v.answer:
            _err(f"not realizable at {args.state} ({v.reason})")
            return EXIT_NO
        sigma = synth.synthesize_clause(m, v.analysis, Fraction(args.epsilon))
    objs = [sim.parse_objective(m, o) for o in args.objective]
    window = args.window if args.window is not None else args.horizon // 2
    ests = sim.estimate_many(m, sigma, args.state, objs, args.runs, args.horizon, window, args.seed, args.workers)
    _emit(
        {
            "schema_version": decide.SCHEMA_VERSION,
            "seed": args.seed,
            "rng": "Philox (numpy), stream per run from SeedSequence([seed, run])",
            "runs": args.runs,
            "horizon": args.horizon,
            "window": window,
            "estimates": {
                o: {"successes": e.successes, "value": float(e.value), "wilson95": [e.low, e.high]} for o, e in zip(args.objective, ests)
            },
        }
    )
    return EXIT_YES


def _names(m, xs):
    return m.base.names(xs)


def _ec_json(m, kind, C, witnesses=None):
    return {
        "type": kind,
        "carrier": _names(m, C.carrier),
        "acts": {m.states[s]: sorted(m.actions[a] for a in acts) for s, acts in sorted(C.acts)},
        "witnesses": witnesses or {},
    }


def _cond_list(m, text):
    return [resolve_parity(m, x) for x in (text.split(",") if text else []) if x]


def cmd_ecs(args):
    m = load_mdp(args.mdp)
    A, AS, NZ = _cond_list(m, args.sure), _cond_list(m, args.almost), _cond_list(m, args.nonzero)
    out = [_ec_json(m, "MEC", C) for C in mec_decomposition(m)]
    if A:
        out += [_ec_json(m, "I", C) for C in ecs.max_type_one_all(m, A, args.path)]
    if A or AS:
        for C in ecs.max_type_two(m, A, AS, args.path):
            w = ecs.check_as_conjunction(m, C, A + AS).witness
            out.append(_ec_json(m, "II", C, {"as_sub_ec": _names(m, w.carrier)}))
    for p in NZ:
        for C in mec_decomposition(m):
            for D in ecs.good_sub_ecs(m, C, A + AS + [p]):
                out.append(_ec_json(m, f"III:{p.name}", D))
    _emit({"schema_version": decide.SCHEMA_VERSION, "ecs": out})
    return EXIT_YES


def _read_dimacs(text):
    clauses, cur = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "cp%":
            continue
        for tok in line.split():
            x = int(tok)
            if x == 0:
                if cur:
                    clauses.append(cur)
                cur = []
            else:
                cur.append(x)
    if cur:
        clauses.append(cur)
    return clauses


def cmd_gen_sat(args):
    if args.cnf:
        cnf = _read_dimacs(Path(args.cnf).read_text(encoding="utf-8"))
        header = f"# encoded from {args.cnf}"
    else:
        cnf = generators.random_cnf(args.seed, args.vars, args.clauses)
        header = f"# random CNF seed={args.seed} vars={args.vars} clauses<={args.clauses}"
    m, f, s = decide.encode_sat(cnf)
    Path(args.out_mdp).write_text(header + "\n" + format_mdp(m), encoding="utf-8")
    Path(args.out_formula).write_text(header + "\n" + pretty(f) + "\n", encoding="utf-8")
    print(json.dumps({"cnf": cnf, "state": s, "mdp": args.out_mdp, "formula": args.out_formula}))
    return EXIT_YES


def cmd_random(args):
    m = generators.random_mdp(args.seed, args.states, args.actions, args.priorities, args.conditions)
    header = f"# artifact random seed={args.seed} states={args.states} actions={args.actions} priorities={args.priorities} conditions={args.conditions}\n"
    text = header + format_mdp(m)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_YES


def cmd_validate(args):
    m = load_mdp(args.mdp, check=False)
    validate(m)
    print(f"ok: {len(m.states)} states, {len(m.actions)} actions, conditions {', '.join(sorted(m.parities)) or '-'}")
    return EXIT_YES


# ---------------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(prog="artifact", description="Qualitative parity objectives on MDPs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formula=True):
        sp.add_argument("--mdp", required=True, help="MDP file, or fixture:NAME")
        if formula:
            sp.add_argument("--formula")
            sp.add_argument("--formula-file", help=".qpl file holding one formula")
            sp.add_argument("--state", required=True)
        sp.add_argument("--path", default="auto", choices=ecs.PATHS)

    d = sub.add_parser("decide", help="decide realizability of a formula at a state")
    common(d)
    d.add_argument("--json", action="store_true")
    d.add_argument("--verify", action="store_true", help="cross-check against the brute-force oracle")
    d.add_argument("--emit-dot", metavar="FILE")
    d.add_argument("--threads", type=int, default=1)
    d.set_defaults(func=cmd_decide)

    s = sub.add_parser("synth", help="synthesize a witness strategy as JSON")
    common(s)
    s.add_argument("--epsilon", default="1/2")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    r = sub.add_parser("simulate", help="Monte Carlo estimates for a strategy")
    common(r)
    r.add_argument("--strategy", help="strategy JSON written by synth")
    r.add_argument("--epsilon", default="1/2")
    r.add_argument("--objective", action="append", required=True, help="condition name or reach:s1,s2 (repeatable)")
    r.add_argument("--runs", type=int, default=1000)
    r.add_argument("--horizon", type=int, default=10000)
    r.add_argument("--window", type=int)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--workers", type=int, default=1)
    r.set_defaults(func=cmd_simulate)

    e = sub.add_parser("ecs", help="classify end components as JSON")
    common(e, formula=False)
    e.add_argument("--sure", default="", help="comma-separated sure conditions")
    e.add_argument("--almost", default="")
    e.add_argument("--nonzero", default="")
    e.set_defaults(func=cmd_ecs)

    g = sub.add_parser("gen-sat", help="write the SAT encoding of a CNF")
    g.add_argument("--cnf", help="DIMACS file; random CNF when omitted")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--vars", type=int, default=4)
    g.add_argument("--clauses", type=int, default=6)
    g.add_argument("--out-mdp", required=True)
    g.add_argument("--out-formula", required=True)
    g.set_defaults(func=cmd_gen_sat)

    n = sub.add_parser("random", help="seeded random MDP")
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--states", type=int, default=5)
    n.add_argument("--actions", type=int, default=2)
    n.add_argument("--priorities", type=int, default=4)
    n.add_argument("--conditions", type=int, default=2)
    n.add_argument("--out")
    n.set_defaults(func=cmd_random)

    v = sub.add_parser("validate", help="check MDP invariants")
    v.add_argument("--mdp", required=True)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    try:
        return args.func(args)
    except decide.InvariantViolation as exc:
        _err(f"internal invariant violated: {exc}")
        return EXIT_INVARIANT
    except InvalidMdp as exc:
        for x in exc.violations:
            _err(f"{x.kind}: state={x.state} action={x.action} {x.detail}")
        return EXIT_USAGE
    except QplSyntaxError as exc:
        _err(f"formula syntax error: {exc}")
        return EXIT_USAGE
    except (UsageError, MdpError, ClauseBlowup, ValueError, OSError, KeyError) as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
