"""Command-line front end: generate, eval, sweep, detect, fixture.

Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
3 when --fail-on-flag is set and the detector flagged at least one ECU.

Every command is byte-deterministic on stdout and all produced files
for identical flags and inputs. The seed for anything randomized comes
from --seed, falling back to the TRUSTCONNECT_SEED environment
variable, then to 0.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .detector import DetectorParams, detect
from .errors import TrustConnectError
from .experiment import (
    emit_figure_data,
    load_sweep_spec,
    reference_fixture,
    reference_sweep_spec,
    run_sweep,
    sweep_spec_to_text,
)
from .graph import (
    generate_random,
    load_graph,
    parse_epsilon_dist,
    save_graph,
    to_text as graph_to_text,
)
from .snapshot import (
    ATTACK_MODES,
    AttackSpec,
    ScenarioSpec,
    constant_ground_truth,
    load_scenario,
    load_snapshot,
    scenario_to_text,
    synthesize_snapshot,
)
from .svgchart import grouped_bar_svg
from .trust import MODES, TrustParams, full_report

_SCENARIO_FLAG_NAMES = (
    "truth_constant",
    "noise_sigma",
    "attack_nodes",
    "attack_mode",
    "delta",
    "scenario_seed",
)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TRUSTCONNECT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"TRUSTCONNECT_SEED must be an integer, got {env!r}")


def _inline_scenario_flags(args) -> list[str]:
    return [
        name for name in _SCENARIO_FLAG_NAMES if getattr(args, name) is not None
    ]


def _build_scenario(args, graph) -> ScenarioSpec:
    """Resolve the snapshot scenario from a file, inline flags, or both.

    Inline flags win over the scenario file field by field; overriding
    prints a warning to stderr naming the flags that took precedence.
    """
    inline = _inline_scenario_flags(args)
    if args.scenario_file is not None:
        base = load_scenario(args.scenario_file)
        if inline:
            flags = ", ".join("--" + name.replace("_", "-") for name in inline)
            print(
                f"warning: inline scenario flags override {args.scenario_file}: {flags}",
                file=sys.stderr,
            )
        truth = dict(base.ground_truth)
        noise_sigma = base.noise_sigma
        attack = base.attack
        seed = base.seed
    else:
        truth = constant_ground_truth(graph, 0.0)
        noise_sigma = 0.0
        attack = None
        seed = _resolve_seed(args)

    if args.truth_constant is not None:
        truth = constant_ground_truth(graph, args.truth_constant)
    if args.noise_sigma is not None:
        noise_sigma = args.noise_sigma
    if args.scenario_seed is not None:
        seed = args.scenario_seed

    if args.attack_nodes is not None:
        compromised = frozenset(int(part) for part in args.attack_nodes.split(","))
        attack = AttackSpec(
            compromised=compromised,
            mode=args.attack_mode if args.attack_mode is not None else "self-injection",
            delta=args.delta if args.delta is not None else 1.0,
        )
    elif attack is not None and (args.attack_mode is not None or args.delta is not None):
        attack = AttackSpec(
            compromised=attack.compromised,
            mode=args.attack_mode if args.attack_mode is not None else attack.mode,
            delta=args.delta if args.delta is not None else attack.delta,
        )
    elif args.attack_mode is not None or args.delta is not None:
        raise ValueError(
            "--attack-mode/--delta need --attack-nodes or a scenario file with an attack"
        )
    return ScenarioSpec(
        ground_truth=truth, noise_sigma=noise_sigma, attack=attack, seed=seed
    )


def _resolve_snapshot(args, graph):
    if args.snapshot is not None:
        if args.scenario_file is not None or _inline_scenario_flags(args):
            raise ValueError("--snapshot and scenario flags are mutually exclusive")
        return load_snapshot(args.snapshot)
    return synthesize_snapshot(graph, _build_scenario(args, graph))


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _render_report(report, fmt: str) -> str:
    if fmt == "csv":
        return report.to_csv()
    if fmt == "json":
        return report.to_json()
    return report.to_text()


def cmd_generate(args) -> int:
    graph = generate_random(
        n=args.n,
        edge_probability=args.p,
        epsilon_distribution=parse_epsilon_dist(args.epsilon),
        seed=_resolve_seed(args),
    )
    out = Path(args.out) if args.out else Path(args.output_dir) / "graph.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_graph(graph, out)
    print(f"wrote {out} ({len(graph.nodes)} nodes, {len(graph.edges)} edges)")
    return 0


def cmd_eval(args) -> int:
    graph = load_graph(args.graph)
    snapshot = _resolve_snapshot(args, graph)
    params = TrustParams(k=args.k, alpha=args.alpha, c0=args.c0, mode=args.mode)
    report = full_report(graph, snapshot, params)
    _emit(_render_report(report, args.format), args.out)
    if args.svg is not None:
        chart = grouped_bar_svg(
            f"k={args.k:g} alpha={args.alpha:g}",
            [e.label for e in report.entries],
            [
                ("btv", [e.btv for e in report.entries]),
                ("trust", [e.trust for e in report.entries]),
                ("eatv", [e.eatv for e in report.entries]),
            ],
        )
        Path(args.svg).write_text(chart, encoding="utf-8", newline="\n")
    return 0


def cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.spec)
    result = run_sweep(spec)
    written = emit_figure_data(result, args.output_dir)
    print(f"wrote {len(written)} files to {args.output_dir}")
    return 0


def cmd_detect(args) -> int:
    graph = load_graph(args.graph)
    snapshot = _resolve_snapshot(args, graph)
    trust_params = TrustParams(k=args.k, alpha=args.alpha)
    det_params = DetectorParams(
        weight_threshold=args.weight_threshold,
        evidence_threshold=args.evidence_threshold,
    )
    report = detect(graph, snapshot, trust_params, det_params)
    _emit(_render_report(report, args.format), args.out)
    if args.fail_on_flag and report.flagged_ids():
        return 3
    return 0


def cmd_fixture(args) -> int:
    graph, scenario = reference_fixture()
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    graph_path = out_dir / "reference_graph.txt"
    scenario_path = out_dir / "reference_scenario.txt"
    sweep_path = out_dir / "reference_sweep.txt"
    graph_path.write_text(graph_to_text(graph), encoding="utf-8", newline="\n")
    scenario_path.write_text(scenario_to_text(scenario), encoding="utf-8", newline="\n")
    sweep_path.write_text(
        sweep_spec_to_text(reference_sweep_spec()), encoding="utf-8", newline="\n"
    )
    for path in (graph_path, scenario_path, sweep_path):
        print(f"wrote {path}")
    return 0


def _add_scenario_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("snapshot source")
    group.add_argument("--snapshot", metavar="FILE", help="load a snapshot file")
    group.add_argument(
        "--scenario-file", metavar="FILE", help="synthesize from a scenario file"
    )
    group.add_argument(
        "--truth-constant", type=float, metavar="V",
        help="constant ground truth for every node (default 0.0)",
    )
    group.add_argument(
        "--noise-sigma", type=float, metavar="S",
        help="gaussian inference noise (default 0.0)",
    )
    group.add_argument(
        "--attack-nodes", metavar="IDS",
        help="comma-separated compromised node ids",
    )
    group.add_argument(
        "--attack-mode", choices=ATTACK_MODES,
        help="attack mode (default self-injection)",
    )
    group.add_argument(
        "--delta", type=float, metavar="D", help="attack offset (default 1.0)"
    )
    group.add_argument(
        "--scenario-seed", type=int, metavar="N", help="noise stream seed"
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None,
        help="seed for randomized inputs (fallback: TRUSTCONNECT_SEED, then 0)",
    )
    common.add_argument(
        "--output-dir", default=".", metavar="DIR", help="directory for written files"
    )
    common.add_argument(
        "--format", choices=("text", "csv", "json"), default="text",
        help="stdout/report format",
    )

    parser = argparse.ArgumentParser(
        prog="trustconnect",
        description="Topology-based trust scoring for ECU dependency networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "generate", parents=[common], help="write a seeded random dependency graph"
    )
    p.add_argument("--n", type=int, default=20, help="node count (default 20)")
    p.add_argument(
        "--p", type=float, default=0.15, help="edge probability (default 0.15)"
    )
    p.add_argument(
        "--epsilon", default="uniform", metavar="DIST",
        help="epsilon distribution: uniform, uniform:LO,HI or constant:V",
    )
    p.add_argument("--out", metavar="FILE", help="output path (default graph.txt)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser(
        "eval", parents=[common], help="trust report for one graph and snapshot"
    )
    p.add_argument("--graph", required=True, metavar="FILE", help="graph file")
    _add_scenario_flags(p)
    p.add_argument("--k", type=float, default=1.0, help="weight decay (default 1.0)")
    p.add_argument(
        "--alpha", type=float, default=0.1, help="neighbor trust gain (default 0.1)"
    )
    p.add_argument("--c0", type=float, default=1.0, help="trust prior (default 1.0)")
    p.add_argument(
        "--mode", choices=MODES, default="single-pass", help="evaluation mode"
    )
    p.add_argument("--out", metavar="FILE", help="write the report here, not stdout")
    p.add_argument("--svg", metavar="FILE", help="also render a grouped-bar chart")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "sweep", parents=[common], help="run a (k, alpha) grid from a sweep spec file"
    )
    p.add_argument("spec", help="sweep spec file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "detect", parents=[common], help="rank ECUs by contradiction evidence"
    )
    p.add_argument("--graph", required=True, metavar="FILE", help="graph file")
    _add_scenario_flags(p)
    p.add_argument("--k", type=float, default=1.0, help="weight decay (default 1.0)")
    p.add_argument(
        "--alpha", type=float, default=0.1, help="unused by evidence, kept for parity"
    )
    p.add_argument(
        "--weight-threshold", type=float, default=0.5,
        help="edge weight below this is a contradiction (default 0.5)",
    )
    p.add_argument(
        "--evidence-threshold", type=float, default=1.0,
        help="flag a node at this much evidence (default 1.0)",
    )
    p.add_argument(
        "--fail-on-flag", action="store_true", help="exit 3 if any node is flagged"
    )
    p.add_argument("--out", metavar="FILE", help="write the report here, not stdout")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser(
        "fixture", parents=[common],
        help="write the bundled reference graph, scenario, and sweep spec",
    )
    p.set_defaults(func=cmd_fixture)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (TrustConnectError, ValueError) as exc:
        print(f"trustconnect: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"trustconnect: i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
