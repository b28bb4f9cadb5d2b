"""Command-line front end: ``run``, ``query``, ``measure`` and ``oracle`` subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import credal, measures, oracle
from .credal import PartialModel
from .errors import BeliefChangeError
from .logic import Language, parse_sentence
from .lprob import ConstraintSet, parse_constraint_file
from .mce import MceConfig, mce_update
from .prob import parse_distribution, uniform
from .session import Caps, QueryLine, RunConfig, Session, _parse_query, jsonable, parse_script


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _config(args) -> RunConfig:
    return RunConfig(
        mce=MceConfig(residual_tol=args.mce_residual_tol, max_iters=args.mce_max_iters),
        caps=Caps(vertex_n=args.caps_vertex_n, event_n=args.caps_vertex_n),
        oracle=args.oracle,
    )


def _lang(args) -> Language | None:
    return Language.of(*args.letters.replace(",", " ").split()) if args.letters else None


def _load_model(args) -> tuple[ConstraintSet, credal.Model]:
    S = parse_constraint_file(Path(args.model).read_text(encoding="utf-8"), _lang(args))
    M = PartialModel(S)
    if getattr(args, "evidence", None):
        M = credal.condition_extended(M, parse_sentence(args.evidence, S.lang))
    return S, M


def _human(report: dict) -> str:
    lines = [f"language: {' '.join(report['language'])}"]
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    for key, value in report["answers"].items():
        lines.append(f"{key} = {value}")
    if "oracle" in report:
        o = report["oracle"]
        lines.append(f"oracle: {o['checked']} envelope(s) checked, max deviation {o['max_deviation']}")
    return "\n".join(lines) + "\n"


def cmd_run(args) -> str:
    text = Path(args.script).read_text(encoding="utf-8")
    script = parse_script(text, _lang(args))
    report = Session(script.lang, _config(args)).run(script)
    return _dump(report) if args.json else _human(report)


def cmd_query(args) -> str:
    S, M = _load_model(args)
    session = Session(S.lang, _config(args))
    session.state = M
    q: QueryLine = _parse_query(args.expr, S.lang, 0)
    value = jsonable(session.answer(q))
    if args.json:
        out = {"query": q.text, "value": value}
        if args.oracle:
            out["oracle"] = {"checked": session.oracle_checks, "max_deviation": jsonable(session.oracle_max_dev)}
        return _dump(out)
    return f"{q.text} = {value}\n"


def cmd_measure(args) -> str:
    _, M = _load_model(args)
    cfg = _config(args)
    report = measures.measure(M, cfg.mce, cfg.caps.event_n).to_json()
    if args.json:
        return _dump(report)
    return "".join(f"{k} = {v}\n" for k, v in report.items())


def cmd_oracle(args) -> str:
    S, _ = _load_model(args)
    cap = args.caps_vertex_n
    if args.kind == "vertices":
        result = [str(v) for v in oracle.vertices(S, cap)]
    elif args.kind == "grid":
        result = [str(v) for v in oracle.grid_points(S, oracle.GridSpec(args.resolution))]
    else:
        prior = parse_distribution(args.prior, S.lang) if args.prior else uniform(S.lang)
        point, objective = oracle.kl_grid_min(prior, S, oracle.GridSpec(args.resolution))
        result = {"grid_min": str(point), "objective": objective}
        if args.compare:
            sol = mce_update(prior, S, _config(args).mce)
            result["solver"] = list(sol.result)
            result["solver_objective"] = sol.objective
    if args.json:
        return _dump({"kind": args.kind, "result": result})
    if isinstance(result, dict):
        return "".join(f"{k} = {v}\n" for k, v in result.items())
    return "".join(f"{r}\n" for r in result)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--oracle", action="store_true", help="cross-check envelopes against vertex enumeration")
    common.add_argument("--letters", help="language letters, e.g. 'p,q,r' (overrides any header)")
    common.add_argument("--mce.residual_tol", dest="mce_residual_tol", type=float, default=MceConfig.residual_tol)
    common.add_argument("--mce.max_iters", dest="mce_max_iters", type=int, default=MceConfig.max_iters)
    common.add_argument("--caps.vertex_n", dest="caps_vertex_n", type=int, default=Caps.vertex_n)

    parser = argparse.ArgumentParser(prog="beliefchange", description="Belief change over probabilistic belief states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="execute an evidence-ledger script")
    p.add_argument("script")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("query", parents=[common], help="answer one query on a model file")
    p.add_argument("model")
    p.add_argument("expr", help="e.g. 'upper P(r)', 'accepted !p', 'top'")
    p.add_argument("--evidence", help="condition the model on this sentence first")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("measure", parents=[common], help="uncertainty and ignorance of a model file")
    p.add_argument("model")
    p.add_argument("--evidence", help="condition the model on this sentence first")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference computations")
    p.add_argument("kind", choices=("grid", "vertices", "kl-min"))
    p.add_argument("model")
    p.add_argument("--resolution", type=int, default=20, help="grid denominator d")
    p.add_argument("--prior", help="prior for kl-min, e.g. '0: 1/2, 3: 1/2' (default uniform)")
    p.add_argument("--compare", action="store_true", help="also run the MCE solver (kl-min only)")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sys.stdout.write(args.func(args))
    except BeliefChangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
