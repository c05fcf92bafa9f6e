"""Command-line entry point: ``qgridrl train | screen | report``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

import yaml

from .agents import PolicyAgent, make_baseline
from .config import RunConfig, load_config, write_config
from .errors import ConfigError, QGridError, ShapeError, TrainingAborted
from .grid.env import GridEnv, node_feature_dim, n_actions
from .ppo import load_checkpoint, save_checkpoint, train
from .screening import aggregate, enumerate_contingencies, screen, write_report

log = logging.getLogger("qgridrl")


def grid_fingerprint(spec) -> str:
    blob = json.dumps(spec.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--seed", type=int, help="global seed (overrides config)")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--parallel", type=int, help="screening worker processes")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgridrl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train an agent and write a checkpoint")
    _common(p)
    p.add_argument("--procedure", choices=["iterative", "cached", "hybrid", "none"])
    p.add_argument("--refresh", help="hybrid refresh interval S (integer or 'inf')")
    p.add_argument("--steps", type=int, help="total environment steps")
    p.add_argument("--grid", help="grid file")

    p = sub.add_parser("screen", help="N-k contingency screening")
    _common(p)
    p.add_argument("--checkpoint", help="trained checkpoint (.npz)")
    p.add_argument("--baseline", help="donothing, random, or a benchmark checkpoint path")
    p.add_argument("--k", type=int, action="append", help="outage size; repeatable")
    p.add_argument("--load-scale", type=float)
    p.add_argument("--limit", type=int, help="screen only the first N cases")
    p.add_argument("--grid", help="grid file")

    p = sub.add_parser("report", help="compare screening result directories")
    p.add_argument("results", nargs="+", help="directories written by 'screen'")
    p.add_argument("--out", help="directory for report.csv / report.md")
    return parser


def _refresh(value):
    if value is None:
        return None
    if value.lower() in ("inf", "infinity"):
        return "inf"
    try:
        return int(value)
    except ValueError:
        raise ConfigError("quantum.refresh_interval", f"not an integer or 'inf': {value!r}") from None


def _resolve(args, extra: dict) -> RunConfig:
    overrides = {"seed": args.seed, "output": args.out, "parallel": args.parallel,
                 "grid": getattr(args, "grid", None), **extra}
    return load_config(args.config, overrides)


def cmd_train(args) -> int:
    cfg = _resolve(args, {
        "quantum.procedure": args.procedure,
        "quantum.refresh_interval": _refresh(args.refresh),
        "train.total_steps": args.steps,
    })
    spec = cfg.load_grid()
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    write_config(cfg, out / "resolved_config.yaml")
    ckpt = out / "checkpoint.npz"
    config_dump = cfg.to_dict()
    config_dump["grid_fingerprint"] = grid_fingerprint(spec)
    try:
        net, tlog = train(
            lambda s: GridEnv(spec, cfg.env, s), cfg.opponent, cfg.ppo, cfg.quantum,
            cfg.train.total_steps, cfg.seed, cfg.train.outage_k,
            checkpoint_path=out / "checkpoint_aborted.npz",
        )
    except TrainingAborted as exc:
        print(f"training aborted: {exc}; resumable state in {exc.checkpoint}", file=sys.stderr)
        return 1
    state = tlog.final_state
    save_checkpoint(ckpt, net, config=config_dump, seed=cfg.seed,
                    extra={k: state[k] for k in ("env_steps", "adam_t", "provider")},
                    arrays=state["adam"])
    tlog.to_csv(out / "training_log.csv")
    print(f"wrote {ckpt} and {out / 'training_log.csv'}")
    return 0


def _load_agent(path, cfg: RunConfig, spec):
    path = Path(path)
    if not path.exists():
        raise ConfigError("checkpoint", f"checkpoint not found: {path}")
    ck = load_checkpoint(path)
    net = ck["net"]
    try:
        net.check(node_feature_dim(spec), n_actions(spec.n_lines))
    except ShapeError as exc:
        raise ShapeError(f"checkpoint {path} does not fit the grid: {exc}") from None
    quantum = cfg.quantum
    saved = ck["meta"].get("config", {}).get("quantum")
    if saved:
        saved = dict(saved)
        saved["rescale"] = tuple(saved["rescale"])
        if saved["refresh_interval"] == "inf":
            saved["refresh_interval"] = float("inf")
        quantum = replace(quantum, **saved)
    return PolicyAgent(net, quantum, cfg.screening.deterministic)


def cmd_screen(args) -> int:
    extra = {"screening.load_scale": args.load_scale}
    cfg = _resolve(args, extra)
    spec = cfg.load_grid()
    if args.checkpoint and args.baseline:
        raise ConfigError("baseline", "give either --checkpoint or --baseline, not both")
    if args.checkpoint:
        agent = _load_agent(args.checkpoint, cfg, spec)
    elif args.baseline in ("donothing", "random"):
        agent = make_baseline(args.baseline)
    elif args.baseline:
        agent = _load_agent(args.baseline, cfg, spec)
        agent.name = "benchmark" if not agent.net.use_quantum else agent.name
    else:
        raise ConfigError("checkpoint", "screen needs --checkpoint or --baseline")
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    write_config(cfg, out / "resolved_config.yaml")
    env_cfg = cfg.screening_env()
    for k in args.k or [cfg.screening.k]:
        cases = enumerate_contingencies(spec.n_lines, k, allow_large_k=cfg.screening.allow_large_k)
        if args.limit:
            cases = cases[:args.limit]
        results = screen(cases, agent, spec, env_cfg, cfg.opponent, cfg.seed, cfg.parallel)
        report = aggregate(results, meta={
            "agent": agent.name, "grid_fingerprint": grid_fingerprint(spec),
            "seed": cfg.seed, "load_scale": env_cfg.load_scale,
            "opponent": asdict(cfg.opponent),
        })
        write_report(report, out, k)
        print(f"{agent.name} k={k}: {report.n_cases} cases, "
              f"mean steps survived {report.mean_steps_survived:.2f}, "
              f"mean reward {report.mean_cumulative_reward:.2f}")
    return 0


def cmd_report(args) -> int:
    rows, hist_rows, fingerprints = [], [], set()
    ks = set()
    for d in args.results:
        d = Path(d)
        summaries = sorted(d.glob("summary_k*.yaml")) if d.is_dir() else []
        if not summaries:
            print(f"no screening summaries in {d}", file=sys.stderr)
            return 2
        row = {"agent": None, "dir": str(d)}
        for s in summaries:
            data = yaml.safe_load(s.read_text())
            fingerprints.add(data.get("grid_fingerprint"))
            row["agent"] = data.get("agent", d.name)
            row[int(data["k"])] = data["mean_steps_survived"]
            ks.add(int(data["k"]))
            for c, p in data.get("cascade_histogram", {}).items():
                hist_rows.append([row["agent"], data["k"], int(c), p])
        rows.append(row)
    if len(fingerprints) > 1:
        print("result directories were screened on different grids", file=sys.stderr)
        return 2
    ks = sorted(ks)
    header = ["agent"] + [f"k={k}" for k in ks]
    table = [[r["agent"]] + [("" if k not in r else f"{r[k]:.2f}") for k in ks] for r in rows]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(t) + " |" for t in table]
    md = "Average steps survived (100-step limit)\n\n" + "\n".join(lines) + "\n"
    print(md)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with (out / "report.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(table)
        with (out / "cascade_histograms.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["agent", "k", "cascade_count", "relative_frequency"])
            w.writerows(hist_rows)
        (out / "report.md").write_text(md)
    return 0


COMMANDS = {"train": cmd_train, "screen": cmd_screen, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ShapeError as exc:
        print(f"dimension mismatch: {exc}", file=sys.stderr)
        return 2
    except QGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
