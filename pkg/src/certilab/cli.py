"""``certilab`` command-line interface.

Exit codes: 0 success / global accept / full coverage, 1 usage, parse or guard
error, 2 prover found no certificate, 3 verifier rejected or coverage failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from certilab import adversary, graph_core
from certilab.certification import (
    CertificationError,
    SweepGuardError,
    VerifierDomainError,
    format_labeling,
    read_ids,
    read_labeling,
)
from certilab.graph_core import GraphError, SearchBudgetExceeded, read_graph
from certilab.schemes import get_scheme
from certilab.score_analysis import NotRegularError, lemma33_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_CERTIFICATE = 2
EXIT_REJECT = 3

DEFAULT_SEED = 0
DEFAULT_ID_TRIALS = 1000


class UsageError(Exception):
    pass


def make_report(command: str, parameters: dict, result: dict, status: int) -> dict:
    return {"command": command, "parameters": parameters, "result": result, "status": status}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"status: {report['status']}"]

    def walk(prefix: str, value: object) -> None:
        if isinstance(value, dict):
            for key in sorted(value):
                walk(f"{prefix}.{key}" if prefix else str(key), value[key])
        else:
            lines.append(f"{prefix}: {json.dumps(value, sort_keys=True)}")

    walk("", report["result"])
    return "\n".join(lines) + "\n"


def emit(report: dict, args: argparse.Namespace) -> int:
    text = _text(report) if getattr(args, "format", "json") == "text" else dumps(report)
    out = getattr(args, "report", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return report["status"]


def resolve_workers(value: int | None) -> int:
    if value is None:
        env = os.environ.get("CERTILAB_WORKERS")
        if env is None:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"CERTILAB_WORKERS must be an integer, got {env!r}") from None
    if value < 1:
        raise UsageError("worker count must be >= 1")
    return value


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _require(args: argparse.Namespace, name: str) -> int:
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"{args.family} needs --{name}")
    return value


def cmd_gen(args: argparse.Namespace) -> int:
    roles = None
    if args.family == "complete":
        graph = graph_core.build_complete(_require(args, "n"))
    elif args.family == "path":
        graph = graph_core.build_path(_require(args, "n"))
    elif args.family == "cycle":
        graph = graph_core.build_cycle(_require(args, "n"))
    else:
        graph, structure = graph_core.build_necklace(_require(args, "k"))
        roles = structure.roles()
    text = graph_core.format_graph(graph)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
        notes = sys.stdout
    else:
        sys.stdout.write(text)
        notes = sys.stderr
    if roles is not None:
        for v in range(graph.n):
            notes.write(f"# {v} {roles[v]}\n")
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    scheme = get_scheme(args.scheme, budget=args.budget)
    cert = scheme.certify(read_graph(args.graph))
    if cert is None:
        sys.stdout.write("no certificate\n")
        return EXIT_NO_CERTIFICATE
    text = format_labeling(cert)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    scheme = get_scheme(args.scheme)
    graph = read_graph(args.graph)
    cert = read_labeling(args.labeling, width=scheme.width)
    ids = read_ids(args.ids, graph.n, args.id_range) if args.ids else None
    verdict = scheme.verify(graph, cert, ids)
    status = EXIT_OK if verdict.accepted else EXIT_REJECT
    result = {
        "decisions": ["accept" if ok else "reject" for ok in verdict.decisions],
        "verdict": "accept" if verdict.accepted else "reject",
    }
    params = {"scheme": scheme.name, "n": graph.n, "width": scheme.width, "ids": ids is not None}
    return emit(make_report("verify", params, result, status), args)


def _experiment(name: str, args: argparse.Namespace) -> dict:
    k = args.k
    if name == "lemma33":
        result = lemma33_sweep(k, workers=resolve_workers(args.workers)).to_dict()
        status = EXIT_OK if result["successes"] == result["total"] else EXIT_REJECT
        return make_report("lemma33", {"k": k}, result, status)
    if name == "anon-attack":
        result = adversary.anon_attack_sweep(k, workers=resolve_workers(args.workers))
        status = EXIT_OK if result["covered"] == result["total"] else EXIT_REJECT
        return make_report("anon-attack", {"k": k}, result, status)
    if name == "id-attack":
        result = adversary.id_attack_sweep(k, args.trials, args.seed)
        status = EXIT_OK if result["successes"] == result["trials"] else EXIT_REJECT
        params = {"k": k, "trials": args.trials, "seed": args.seed}
        return make_report("id-attack", params, result, status)
    if name == "census":
        result = adversary.verifier_census(k).to_dict()
        status = EXIT_OK if result["separating_verifiers"] == 0 else EXIT_REJECT
        return make_report("census", {"k": k}, result, status)
    raise UsageError(f"unknown experiment {name!r}")


def cmd_experiments(args: argparse.Namespace) -> int:
    return emit(_experiment(args.name, args), args)


def cmd_census(args: argparse.Namespace) -> int:
    return emit(_experiment("census", args), args)


def cmd_adversary_anon(args: argparse.Namespace) -> int:
    graph, _ = graph_core.build_necklace(args.k)
    lab = read_labeling(args.labeling, width=1)
    h = adversary.anon_no_instance(args.k, lab, column=args.column)
    h_inst = adversary.Instance(graph_core.build_complete(args.k + 1), h)
    coverage = adversary.check_view_coverage(h_inst, [adversary.Instance(graph, lab)])
    if args.out:
        adversary.write_instance(h_inst, args.out)
    result = {"column": sum(h.bits), "h_labeling": "".join(h.labels), "coverage": coverage.to_dict()}
    status = EXIT_OK if coverage.covered else EXIT_REJECT
    return emit(make_report("adversary anon", {"k": args.k}, result, status), args)


def cmd_adversary_id(args: argparse.Namespace) -> int:
    files = sorted(p for p in Path(args.labelings).iterdir() if p.is_file())
    labelings = [read_labeling(p, width=1) for p in files]
    attack = adversary.id_attack(args.k, labelings, column=args.column)
    coverage = adversary.check_view_coverage(attack.instance, attack.yes_instances)
    if args.out:
        adversary.write_instance(attack.instance, args.out)
    result = {
        "column": attack.column,
        "copy_columns": list(attack.columns),
        "lambda0": list(attack.lambda0),
        "witnesses": [{"copy": i, "vertex": v} for i, v in attack.witnesses],
        "h_labeling": "".join(attack.instance.labeling.labels),
        "h_ids": list(attack.instance.ids.ids),
        "plan": adversary.id_block_plan(args.k).to_dict(),
        "coverage": coverage.to_dict(),
    }
    status = EXIT_OK if coverage.covered else EXIT_REJECT
    params = {"k": args.k, "files": [p.name for p in files]}
    return emit(make_report("adversary id", params, result, status), args)


def cmd_coverage(args: argparse.Namespace) -> int:
    h = adversary.read_instance(args.h)
    yes = [adversary.read_instance(p) for p in args.yes]
    report = adversary.check_view_coverage(h, yes)
    status = EXIT_OK if report.covered else EXIT_REJECT
    return emit(make_report("coverage", {"yes_instances": len(yes)}, report.to_dict(), status), args)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--report", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="certilab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a graph in the edge-list text format")
    p.add_argument("family", choices=("complete", "necklace", "path", "cycle"))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="run a scheme's prover on a graph")
    p.add_argument("scheme")
    p.add_argument("graph")
    p.add_argument("--out")
    p.add_argument("--budget", type=int, default=graph_core.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="run a scheme's verifier on a labeled graph")
    p.add_argument("scheme")
    p.add_argument("graph")
    p.add_argument("labeling")
    p.add_argument("--ids")
    p.add_argument("--id-range", type=int, help="identifier range (default 3n^3+3n)")
    _add_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiments", help="run an exhaustive or seeded experiment")
    p.add_argument("name", choices=("lemma33", "anon-attack", "id-attack", "census"))
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=DEFAULT_ID_TRIALS)
    p.add_argument("--workers", type=int)
    _add_output(p)
    p.set_defaults(func=cmd_experiments)

    p = sub.add_parser("census", help="census of degree-k binary table verifiers")
    p.add_argument("--k", type=int, default=3)
    _add_output(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("adversary", help="build a fooling K_{k+1} instance")
    adv = p.add_subparsers(dest="mode", required=True)
    q = adv.add_parser("anon", help="anonymous model, from one labeling of N_k")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--labeling", required=True)
    q.add_argument("--column", type=int, help="use this collision column instead of the smallest")
    q.add_argument("--out", help="write the K_{k+1} instance (JSON) here")
    _add_output(q)
    q.set_defaults(func=cmd_adversary_anon)
    q = adv.add_parser("id", help="identifier model, from (k+1)^2+1 labelings of N_k")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--labelings", required=True, help="directory of labeling files, read in name order")
    q.add_argument("--column", type=int, help="use this collision column instead of the pigeonhole choice")
    q.add_argument("--out", help="write the K_{k+1} instance (JSON) here")
    _add_output(q)
    q.set_defaults(func=cmd_adversary_id)

    p = sub.add_parser("coverage", help="check that every view of H occurs in a yes-instance")
    p.add_argument("--h", required=True)
    p.add_argument("--yes", nargs="+", required=True)
    _add_output(p)
    p.set_defaults(func=cmd_coverage)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (
        UsageError,
        GraphError,
        CertificationError,
        SweepGuardError,
        VerifierDomainError,
        NotRegularError,
        SearchBudgetExceeded,
        KeyError,
        ValueError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"certilab: error: {msg}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
