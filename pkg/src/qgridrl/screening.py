"""N-k contingency screening: enumerate outages, run episodes, aggregate."""
from __future__ import annotations

import csv
import logging
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .errors import InvalidArgumentError
from .grid.env import EnvConfig, GridEnv
from .grid.spec import GridSpec
from .opponent import Opponent, OpponentConfig

log = logging.getLogger(__name__)

DEFAULT_MAX_K = 4


@dataclass(frozen=True)
class ContingencyCase:
    removed_lines: Tuple[int, ...]
    case_index: int


@dataclass(frozen=True)
class ContingencyResult:
    case: ContingencyCase
    steps_survived: int
    cumulative_reward: float
    cascade_count: int
    blackout: bool

    def row(self) -> dict:
        return {
            "case_index": self.case.case_index,
            "removed_lines": " ".join(map(str, self.case.removed_lines)),
            "steps_survived": self.steps_survived,
            "cumulative_reward": repr(float(self.cumulative_reward)),
            "cascade_count": self.cascade_count,
            "blackout": int(self.blackout),
        }


@dataclass
class ScreeningReport:
    results: List[ContingencyResult]
    mean_steps_survived: float
    mean_cumulative_reward: float
    mean_cascades: float
    blackout_rate: float
    cascade_histogram: Dict[int, float]
    meta: dict = field(default_factory=dict)

    @property
    def n_cases(self) -> int:
        return len(self.results)


def enumerate_contingencies(n_lines: int, k: int, max_k: Optional[int] = DEFAULT_MAX_K,
                            allow_large_k: bool = False) -> List[ContingencyCase]:
    """All k-subsets of line ids in lexicographic order."""
    if not 1 <= k <= n_lines:
        raise InvalidArgumentError(f"k must satisfy 1 <= k <= {n_lines}, got {k}")
    if max_k is not None and k > max_k:
        if not allow_large_k:
            raise InvalidArgumentError(f"k={k} exceeds the default cap {max_k}; pass allow_large_k")
        warnings.warn(f"screening {comb(n_lines, k)} cases for k={k}", stacklevel=2)
    return [ContingencyCase(c, i) for i, c in enumerate(combinations(range(n_lines), k))]


def case_seed(seed: int, case_index: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(case_index)]).generate_state(1)[0])


def run_case(case: ContingencyCase, agent, spec: GridSpec, env_cfg: EnvConfig = EnvConfig(),
             opponent_cfg: OpponentConfig = OpponentConfig(), seed: int = 0) -> ContingencyResult:
    """One episode from the outage ``case``; the seed is derived from the case index."""
    s = case_seed(seed, case.case_index)
    env = GridEnv(spec, env_cfg, seed=s)
    opponent = Opponent(opponent_cfg)
    agent.reset(s)
    obs = env.reset(case.removed_lines)
    survived, total = 0, 0.0
    while not env.done:
        res = env.step(agent.act(obs, env), opponent.attack(env.state))
        total += res.reward.total
        obs = res.observation
        if env.state.alive:
            survived += 1
    return ContingencyResult(case, survived, total, env.state.cascade_count, not env.state.alive)


def _run_chunk(args):
    cases, agent, spec, env_cfg, opponent_cfg, seed = args
    return [run_case(c, agent, spec, env_cfg, opponent_cfg, seed) for c in cases]


def screen(cases: Sequence[ContingencyCase], agent, spec: GridSpec,
           env_cfg: EnvConfig = EnvConfig(), opponent_cfg: OpponentConfig = OpponentConfig(),
           seed: int = 0, parallel: int = 1) -> List[ContingencyResult]:
    """Run every case; results come back ordered by ``case_index``."""
    cases = list(cases)
    if parallel <= 1 or len(cases) < 2:
        results = _run_chunk((cases, agent, spec, env_cfg, opponent_cfg, seed))
    else:
        chunks = [cases[i::parallel] for i in range(parallel)]
        jobs = [(c, agent, spec, env_cfg, opponent_cfg, seed) for c in chunks if c]
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = [r for part in pool.map(_run_chunk, jobs) for r in part]
    return sorted(results, key=lambda r: r.case.case_index)


def aggregate(results: Sequence[ContingencyResult], meta: Optional[dict] = None) -> ScreeningReport:
    if not results:
        raise InvalidArgumentError("cannot aggregate an empty result list")
    results = list(results)
    n = len(results)
    counts = Counter(r.cascade_count for r in results)
    return ScreeningReport(
        results=results,
        mean_steps_survived=float(np.mean([r.steps_survived for r in results])),
        mean_cumulative_reward=float(np.mean([r.cumulative_reward for r in results])),
        mean_cascades=float(np.mean([r.cascade_count for r in results])),
        blackout_rate=float(np.mean([r.blackout for r in results])),
        cascade_histogram={c: counts[c] / n for c in sorted(counts)},
        meta=dict(meta or {}),
    )


CASE_COLUMNS = ["case_index", "removed_lines", "steps_survived", "cumulative_reward",
                "cascade_count", "blackout"]


def write_report(report: ScreeningReport, outdir, k: int) -> List[Path]:
    """Per-case CSV, YAML summary and cascade histogram CSV for one k."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cases = outdir / f"cases_k{k}.csv"
    with cases.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CASE_COLUMNS)
        w.writeheader()
        w.writerows(r.row() for r in report.results)
    hist = outdir / f"cascade_histogram_k{k}.csv"
    with hist.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cascade_count", "relative_frequency"])
        for c, p in report.cascade_histogram.items():
            w.writerow([c, repr(p)])
    summary = outdir / f"summary_k{k}.yaml"
    summary.write_text(yaml.safe_dump({
        **report.meta,
        "k": k,
        "n_cases": report.n_cases,
        "mean_steps_survived": report.mean_steps_survived,
        "mean_cumulative_reward": report.mean_cumulative_reward,
        "mean_cascades": report.mean_cascades,
        "blackout_rate": report.blackout_rate,
        "cascade_histogram": {int(c): float(p) for c, p in report.cascade_histogram.items()},
    }, sort_keys=False))
    return [cases, hist, summary]


def read_cases(path) -> List[ContingencyResult]:
    out = []
    with Path(path).open() as fh:
        for row in csv.DictReader(fh):
            lines = tuple(int(x) for x in row["removed_lines"].split())
            out.append(ContingencyResult(
                ContingencyCase(lines, int(row["case_index"])), int(row["steps_survived"]),
                float(row["cumulative_reward"]), int(row["cascade_count"]), bool(int(row["blackout"]))))
    return out
