"""Command-line entry point.

Subcommands: learn, interpret, cluster, rules, classify, simulate, serve,
pipeline.  All accept --seed and --config; flags override config values.
Exit codes: 0 success, 1 usage error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .patterns import extract_patterns
from .pipeline import (
    PipelineError,
    ProjectConfig,
    load_config,
    run_pipeline,
    run_syndrome,
    simulate,
)
from .rules import apply_rule
from .search import SearchConfig, east_search
from .server import serve

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _add_common(p):
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (overrides the config file)")
    p.add_argument("--config", type=Path, default=None,
                   help="project config JSON supplying defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltmkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", help="learn a latent tree model from CSV data")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--max-passes", type=int, default=50)
    _add_common(p)

    p = sub.add_parser("interpret", help="extract patterns from a model file")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--coverage", type=float, default=0.95)
    _add_common(p)

    p = sub.add_parser("cluster", help="joint clustering for mapped syndromes")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--mapping", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--coverage", type=float, default=0.95)
    _add_common(p)

    p = sub.add_parser("rules", help="derive classification rules (cluster + rules)")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--mapping", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.add_argument("--coverage", type=float, default=0.95)
    _add_common(p)

    p = sub.add_parser("classify", help="score cases against stored rules")
    p.add_argument("--rules-dir", type=Path, required=True)
    p.add_argument("--symptoms", type=str, default=None,
                   help="comma-separated present symptoms")
    p.add_argument("--data", type=Path, default=None, help="CSV of cases to score")
    _add_common(p)

    p = sub.add_parser("simulate", help="sample cases from a stored model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    _add_common(p)

    p = sub.add_parser("serve", help="HTTP scoring endpoint over a rules directory")
    p.add_argument("--rules-dir", type=Path, required=True)
    p.add_argument("--bind", type=str, default="127.0.0.1:8000")
    _add_common(p)

    p = sub.add_parser("pipeline", help="run the full pipeline from a config file")
    _add_common(p)
    return parser


def _seed_of(args, default=0):
    if args.seed is not None:
        return args.seed
    if args.config is not None:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if "seed" in cfg:
            return int(cfg["seed"])
    return default


def _per_syndrome(args, with_rules: bool):
    dataset = io.ingest_csv(args.data)
    mappings = io.read_mappings(args.mapping)
    seed = _seed_of(args)
    out = Path(args.out)
    cfg = ProjectConfig(dataset=args.data, output_dir=out, seed=seed,
                        mapping=args.mapping, coverage=args.coverage)
    (out / "quantifications").mkdir(parents=True, exist_ok=True)
    (out / "joint_models").mkdir(parents=True, exist_ok=True)
    if with_rules:
        (out / "rules").mkdir(parents=True, exist_ok=True)
    for mapping in mappings:
        art = run_syndrome(mapping, dataset, cfg)
        slug = art.name.lower().replace(" ", "_").replace("-", "_")
        io.write_quantification(art.quantification, out / "quantifications" / f"{slug}.json")
        io.write_model(art.joint.model, out / "joint_models" / f"{slug}.json")
        print(f"{art.name}: {len(art.quantification.clusters)} clusters")
        if with_rules:
            for rule in art.rules:
                rslug = rule.positive_label.lower().replace(" ", "_").replace("-", "_")
                io.write_rule(rule, out / "rules" / f"{rslug}.json")
                print(f"  rule {rule.positive_label}: {len(rule.items)} items, "
                      f"threshold {rule.threshold:.2f}, accuracy {rule.accuracy:.3f}")


def _classify(args):
    rules = io.read_rules_dir(args.rules_dir)
    if (args.symptoms is None) == (args.data is None):
        print("error: give exactly one of --symptoms or --data", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    if args.symptoms is not None:
        cases = [[s.strip() for s in args.symptoms.split(",") if s.strip()]]
    else:
        ds = io.ingest_csv(args.data)
        cases = []
        for i in range(ds.n_cases):
            row = ds.case_mapping(i)
            present = [k for k, v in row.items() if v == 1]
            cases.extend([present] * int(ds.counts[i]))
    out = []
    for case in cases:
        decisions = []
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for rule in rules:
                d = apply_rule(rule, case)
                decisions.append({"syndrome": rule.syndrome_name,
                                  "positiveLabel": rule.positive_label,
                                  "totalScore": d.total_score,
                                  "threshold": rule.threshold,
                                  "decision": d.decision})
        out.append({"symptoms": case, "decisions": decisions})
    print(json.dumps(out, indent=2, sort_keys=True))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "learn":
            ds = io.ingest_csv(args.data)
            model = east_search(ds, SearchConfig(seed=_seed_of(args),
                                                 max_passes=args.max_passes))
            io.write_model(model, args.out)
            print(f"learned model: {len(model.latent_ids)} latent variables -> {args.out}")
        elif args.command == "interpret":
            model = io.read_model(args.model)
            patterns = extract_patterns(model, args.coverage)
            io.write_patterns(patterns, args.coverage, args.out)
            print(f"extracted {len(patterns)} patterns -> {args.out}")
        elif args.command == "cluster":
            _per_syndrome(args, with_rules=False)
        elif args.command == "rules":
            _per_syndrome(args, with_rules=True)
        elif args.command == "classify":
            _classify(args)
        elif args.command == "simulate":
            ds = simulate(args.model, args.n, _seed_of(args), args.out)
            print(f"wrote {ds.total_n} cases -> {args.out}")
        elif args.command == "serve":
            serve(args.rules_dir, args.bind)
        elif args.command == "pipeline":
            if args.config is None:
                print("error: pipeline requires --config", file=sys.stderr)
                return USAGE_ERROR
            config = load_config(args.config)
            if args.seed is not None:
                config = ProjectConfig(config.dataset, config.output_dir, args.seed,
                                       config.mapping, config.coverage,
                                       config.search, config.em)
            bundle = run_pipeline(config)
            print(f"pipeline wrote {len(bundle.paths)} artifacts "
                  f"-> {config.output_dir}")
        return 0
    except (io.DataFormatError, PipelineError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
