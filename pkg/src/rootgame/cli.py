"""Command-line surface: solve, oracle queries, sweeps, rendering, serving.

Exit codes: 0 on success and clean sweeps, 1 when a sweep finds a
mismatch or failed check, 2 on usage errors, 3 on internal oracle
consistency failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import board, game, oracle, solver, sweeps, weyl
from .embedding import EmbeddingSpecError, build_embedding
from .roots import GroupSpecError, build_root_system

USAGE_EXIT = 2
INTERNAL_EXIT = 3


def _parse_copies(text):
    return frozenset(int(tok) for tok in text.split(",") if tok)


def _solver_config(args) -> solver.SolverConfig:
    policy = None
    if getattr(args, "no_split", False):
        policy = solver.NONE
    return solver.SolverConfig(
        allow_merges=getattr(args, "merges", False),
        movable_copies=_parse_copies(args.copies) if getattr(
            args, "copies", None) else None,
        splitting_policy=policy,
        node_budget=getattr(args, "budget", None) or 10_000_000)


def cmd_solve(args) -> int:
    e = build_embedding(args.embedding)
    pi = weyl.parse_element(e.target, args.pi)
    verdict = solver.solve(e, pi, _solver_config(args), mode=args.mode)
    if args.json:
        out = verdict.to_json()
        out["embedding"] = e.spec
        out["pi"] = weyl.format_element(pi)
        print(json.dumps(out))
    else:
        print(verdict.kind.upper().replace("_", " "))
        if verdict.witness is not None:
            names = [e.target.roots[i].name for i in verdict.witness]
            print("witness ideal:", " ".join(names))
        if verdict.certificate is not None:
            for step in verdict.certificate:
                print(" ", _step_text(e, step))
    return 0


def _step_text(e, step) -> str:
    if isinstance(step, game.MoveStep):
        return f"move [{e.target.roots[step.beta].name}, region {step.region}]"
    if isinstance(step, game.MergeStep):
        return f"merge region {step.region}: copy {step.k2} -> {step.k1}"
    names = " ".join(e.target.roots[i].name for i in step.ideal)
    return f"split along {{{names}}}"


def cmd_oracle(args) -> int:
    if args.group and args.embedding:
        print("give either --group or --embedding, not both", file=sys.stderr)
        return USAGE_EXIT
    if args.group:
        rs = build_root_system(args.group)
        pis = [weyl.parse_element(rs, lit) for lit in args.pi]
        value = oracle.intersection_number(rs, pis)
        if args.json:
            print(json.dumps({"group": rs.spec,
                              "pi": [weyl.format_element(p) for p in pis],
                              "intersection_number": value}))
        else:
            print(value)
        return 0
    if args.embedding:
        e = build_embedding(args.embedding)
        if len(args.pi) != 1:
            print("branching takes a single element", file=sys.stderr)
            return USAGE_EXIT
        pi = weyl.parse_element(e.target, args.pi[0])
        vec = oracle.branching_expand(e, pi)
        if args.json:
            print(json.dumps({"embedding": e.spec,
                              "pi": weyl.format_element(pi),
                              "degree": vec.degree,
                              "expansion": vec.to_json()}))
        else:
            if vec.is_zero():
                print("0")
            else:
                for lit, c in sorted(vec.to_json().items()):
                    print(f"{c} * w[{lit}]")
        return 0
    print("oracle needs --group or --embedding", file=sys.stderr)
    return USAGE_EXIT


def cmd_verify(args) -> int:
    kwargs = {}
    if args.suite == "sl6-sample" and args.samples:
        kwargs["count"] = args.samples
    report = sweeps.run_suite(args.suite, jobs=args.jobs, **kwargs)
    if args.json:
        print(json.dumps(report.to_json()))
    else:
        print(report.summary())
    return 0 if report.ok else 1


def cmd_render(args) -> int:
    e = build_embedding(args.embedding)
    if args.pi:
        pi = weyl.parse_element(e.target, args.pi)
        pos = game.initial_position(e, pi, mode=args.mode)
        print(board.render_position(pos))
        st = game.status(pos)
        print("status:", st.verdict.upper())
    else:
        print(board.render_phat_table(e))
    return 0


def cmd_serve(args) -> int:
    from .service import serve
    serve(port=args.port, static_dir=args.static, snapshot=args.snapshot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rootgame",
        description="Token games on root systems, with an exact "
                    "cohomology oracle")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="decide one game")
    ps.add_argument("--embedding", required=True)
    ps.add_argument("--pi", required=True)
    ps.add_argument("--mode", choices=[game.TOP, game.FREE], default=None)
    ps.add_argument("--merges", action="store_true")
    ps.add_argument("--copies", help="restrict moves to these copies, e.g. 1,2")
    ps.add_argument("--no-split", action="store_true", dest="no_split")
    ps.add_argument("--budget", type=int, default=None)
    ps.add_argument("--json", action="store_true")
    ps.set_defaults(fn=cmd_solve)

    po = sub.add_parser("oracle", help="exact intersection / branching numbers")
    po.add_argument("--group")
    po.add_argument("--embedding")
    po.add_argument("--pi", nargs="+", required=True)
    po.add_argument("--json", action="store_true")
    po.set_defaults(fn=cmd_oracle)

    pv = sub.add_parser("verify", help="run a verification sweep")
    pv.add_argument("--suite", required=True,
                    choices=sorted(sweeps.SUITES))
    pv.add_argument("--jobs", type=int, default=1)
    pv.add_argument("--samples", type=int, default=None,
                    help="sample count for sl6-sample")
    pv.add_argument("--json", action="store_true")
    pv.set_defaults(fn=cmd_verify)

    pr = sub.add_parser("render", help="draw a board or a phat table")
    pr.add_argument("--embedding", required=True)
    pr.add_argument("--pi")
    pr.add_argument("--mode", choices=[game.TOP, game.FREE], default=None)
    pr.set_defaults(fn=cmd_render)

    pe = sub.add_parser("serve", help="serve the session API and UI")
    pe.add_argument("--port", type=int, default=8642)
    pe.add_argument("--static", default=None)
    pe.add_argument("--snapshot", default=None)
    pe.set_defaults(fn=cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except oracle.OracleConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return INTERNAL_EXIT
    except (GroupSpecError, EmbeddingSpecError, weyl.WeylParseError,
            game.IllegalStepError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
