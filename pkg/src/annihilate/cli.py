"""Command-line entry point: simulations, sweeps, and verification suites.

Subcommands
-----------
simulate   one (system, graph, n, p) point, many trials, prints a summary
exact      print a closed-form law's probs/mean/variance, optionally sample
sweep      grid run from a JSON config, appends rows to a CSV
verify     run the invariant and bound-check suite; nonzero exit on any failure
fit        read a sweep CSV and fit second-order models to mean_T

CSV schema (one row per grid point):
    system,topology,n,p,trials,mean_T,stderr_T,mean_M,mean_maxocc,verdicts,seed,wall_ms

Per-trial seeds are base_seed XOR mix64(point_index, trial_index), so any
point can be re-run in isolation and a re-run of the same config
reproduces every column except wall_ms.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from . import comparison, laws, stats
from .dynamics import BatchResult, SimulationParams, run_many, run_trajectory, verify_master_identity
from .seeding import derive_trial_seed
from .state import Coloring, SystemKind, Topology, TopologyKind

CSV_HEADER = [
    "system", "topology", "n", "p", "trials", "mean_T", "stderr_T",
    "mean_M", "mean_maxocc", "verdicts", "seed", "wall_ms",
]

_SYSTEMS = {"one": SystemKind.ONE_TYPE, "two": SystemKind.TWO_TYPE}
_GRAPHS = {"complete": TopologyKind.COMPLETE, "star": TopologyKind.STAR}
_LAWS = {
    "k1": ("one-type complete", lambda n: laws.one_type_complete_law(n)),
    "s1": ("one-type star", lambda n: laws.one_type_star_law(n)),
    "kp1": ("two-type p=1 complete",
            lambda n: laws.two_type_p1_law(TopologyKind.COMPLETE, n)),
    "sp1": ("two-type p=1 star",
            lambda n: laws.two_type_p1_law(TopologyKind.STAR, n)),
}


def _default_jobs(value) -> int:
    if value is not None:
        return max(1, int(value))
    env = os.environ.get("ANNIHILATE_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep: the grid, trial count, seed, and output target."""

    system: SystemKind
    topology: TopologyKind
    n_grid: tuple[int, ...]
    p_grid: tuple[float, ...]
    trials: int
    base_seed: int
    output_csv: str
    record_series: bool = False
    max_steps: int | None = None

    def __post_init__(self):
        if not self.n_grid or not self.p_grid:
            raise ValueError("n_grid and p_grid must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.system is SystemKind.ONE_TYPE and any(p != 0.5 for p in self.p_grid):
            raise ValueError("one-type sweeps must use p_grid = [0.5]")

    @classmethod
    def from_json(cls, path: str) -> "ExperimentSpec":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        outputs = raw.get("outputs", {})
        return cls(
            system=_SYSTEMS[raw["system"]],
            topology=_GRAPHS[raw["topology"]],
            n_grid=tuple(int(n) for n in raw["n_grid"]),
            p_grid=tuple(float(p) for p in raw["p_grid"]),
            trials=int(raw["trials"]),
            base_seed=int(raw["base_seed"]),
            output_csv=outputs.get("csv", raw.get("output_csv", "sweep.csv")),
            record_series=bool(raw.get("record_series", False)),
            max_steps=raw.get("max_steps"),
        )

    def points(self):
        idx = 0
        for n in self.n_grid:
            for p in self.p_grid:
                yield idx, n, p
                idx += 1


def _point_params(spec: ExperimentSpec, n: int, p: float) -> SimulationParams:
    return SimulationParams(
        topology=Topology(spec.topology, n),
        system_kind=spec.system,
        p=p,
        max_steps=spec.max_steps,
        record_series=False,
    )


def _run_point(spec: ExperimentSpec, point_index: int, n: int, p: float,
               jobs: int) -> dict:
    t0 = time.perf_counter()
    seeds = [derive_trial_seed(spec.base_seed, point_index, t)
             for t in range(spec.trials)]
    params = _point_params(spec, n, p)
    batch = run_many(params, seeds, jobs=jobs)
    verdicts = _point_verdicts(spec, params, batch, point_index)
    wall_ms = int(round((time.perf_counter() - t0) * 1000))
    return {
        "system": spec.system.value,
        "topology": spec.topology.value,
        "n": n,
        "p": _fmt(p),
        "trials": spec.trials,
        "mean_T": _fmt(batch.steps.mean()),
        "stderr_T": _fmt(batch.steps.std(ddof=1) / math.sqrt(spec.trials)
                         if spec.trials > 1 else 0.0),
        "mean_M": _fmt(batch.final_m.mean()),
        "mean_maxocc": _fmt(batch.max_occ.mean()),
        "verdicts": verdicts,
        "seed": spec.base_seed,
        "wall_ms": wall_ms,
    }


def _point_verdicts(spec: ExperimentSpec, params: SimulationParams,
                    batch: BatchResult, point_index: int) -> str:
    n = params.topology.n
    checks = [("reached", bool(batch.reached.all()))]
    if batch.reached.all():
        checks.append(("collision_parity", bool((batch.collisions == n).all())))
    if spec.topology is TopologyKind.STAR:
        ok = batch.reached.astype(bool)
        checks.append(("t_ge_2n", bool((batch.steps[ok] >= 2 * n).all())))
    if params.system_kind is SystemKind.ONE_TYPE:
        checks.append(("single_occupancy", bool((batch.max_occ == 1).all())))
    if spec.record_series:
        rec = replace(params, record_series=True)
        traj = run_trajectory(rec, derive_trial_seed(spec.base_seed, point_index, 0))
        if spec.topology is TopologyKind.STAR:
            checks.append(
                ("master_identity", verify_master_identity(traj, n).holds))
    return ";".join(f"{name}={'pass' if ok else 'fail'}" for name, ok in checks)


def _fmt(x) -> str:
    """Locale-independent decimal rendering, stable across re-runs."""
    if isinstance(x, float) or isinstance(x, np.floating):
        return repr(float(x))
    return str(x)


def _write_rows(path: str, rows: list[dict], append: bool) -> None:
    mode = "a" if append and os.path.exists(path) else "w"
    with open(path, mode, encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        if mode == "w":
            writer.writeheader()
        for row in rows:
            writer.writerow(row)


# -- subcommands -----------------------------------------------------------


def _cmd_simulate(args) -> int:
    spec = ExperimentSpec(
        system=_SYSTEMS[args.system],
        topology=_GRAPHS[args.graph],
        n_grid=(args.n,),
        p_grid=(args.p,),
        trials=args.trials,
        base_seed=args.seed,
        output_csv=args.csv or "simulate.csv",
        record_series=args.record_series,
        max_steps=args.max_steps,
    )
    row = _run_point(spec, 0, args.n, args.p, _default_jobs(args.jobs))
    print(f"system={row['system']} topology={row['topology']} n={row['n']} "
          f"p={row['p']} trials={row['trials']}")
    print(f"mean_T={row['mean_T']} stderr_T={row['stderr_T']} "
          f"mean_M={row['mean_M']} mean_maxocc={row['mean_maxocc']}")
    print(f"verdicts: {row['verdicts']}")
    if args.csv:
        _write_rows(args.csv, [row], append=True)
        print(f"appended row to {args.csv}")
    return 0 if "fail" not in row["verdicts"] else 1


def _cmd_exact(args) -> int:
    label, build = _LAWS[args.law]
    law = build(args.n)
    print(f"law={args.law} ({label}) n={args.n} scale={law.scale}")
    print("probs " + ",".join(_fmt(q) for q in law.probs))
    print(f"mean {_fmt(law.exact_mean)}")
    print(f"variance {_fmt(law.exact_variance)}")
    if args.samples:
        rng = np.random.default_rng(args.seed)
        values = laws.sample_law(law, rng, size=args.samples)
        print(f"samples {args.samples}: mean {_fmt(values.mean())} "
              f"min {values.min()} max {values.max()}")
    return 0


def _cmd_sweep(args) -> int:
    spec = ExperimentSpec.from_json(args.config)
    if args.csv:
        spec = replace(spec, output_csv=args.csv)
    if args.trials:
        spec = replace(spec, trials=args.trials)
    jobs = _default_jobs(args.jobs)
    rows = []
    for idx, n, p in spec.points():
        row = _run_point(spec, idx, n, p, jobs)
        rows.append(row)
        print(f"point {idx}: n={n} p={p} mean_T={row['mean_T']} "
              f"({row['wall_ms']} ms)")
    _write_rows(spec.output_csv, rows, append=not args.fresh)
    print(f"wrote {len(rows)} rows to {spec.output_csv}")
    return 0


def _cmd_fit(args) -> int:
    with open(args.csv, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        print("no data rows", file=sys.stderr)
        return 1
    sel = [r for r in rows
           if r["system"] == args.system and r["topology"] == args.graph
           and abs(float(r["p"]) - args.p) < 1e-12]
    if len(sel) < 4:
        print(f"need >= 4 matching rows, found {len(sel)}", file=sys.stderr)
        return 1
    n_grid = [int(r["n"]) for r in sel]
    means = [float(r["mean_T"]) for r in sel]
    stderrs = [float(r["stderr_T"]) for r in sel]
    baseline = "star" if args.graph == "star" else "complete"
    for model in (stats.FitModel.SQRT_N, stats.FitModel.SQRT_N_LOG_N,
                  stats.FitModel.N_LOG_N):
        fit = stats.fit_second_order(n_grid, means, model, baseline=baseline,
                                     stderrs=stderrs)
        print(f"{model.value}: coefficient={fit.coefficient:.6g} "
              f"residual={fit.residual_norm:.4g}")
    return 0


def _cmd_verify(args) -> int:
    from .verification import run_verification_suite

    verdicts = run_verification_suite(quick=args.quick, seed=args.seed,
                                      jobs=_default_jobs(args.jobs))
    width = max(len(name) for name, _ in verdicts)
    failures = 0
    for name, verdict in verdicts:
        word = "pass" if verdict.passed else "FAIL"
        print(f"{name:<{width}}  {word}  statistic={verdict.statistic:.6g} "
              f"threshold={verdict.threshold:.6g}")
        if not verdict.passed:
            failures += 1
    print(f"{len(verdicts) - failures}/{len(verdicts)} checks passed")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annihilate",
        description="Annihilating random walks on complete and star graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one parameter point")
    sim.add_argument("--system", choices=sorted(_SYSTEMS), required=True)
    sim.add_argument("--graph", choices=sorted(_GRAPHS), required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--p", type=float, default=0.5)
    sim.add_argument("--trials", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-steps", type=int, default=None)
    sim.add_argument("--record-series", action="store_true")
    sim.add_argument("--csv", default=None, help="append the row to this CSV")
    sim.add_argument("--jobs", type=int, default=None)
    sim.set_defaults(func=_cmd_simulate)

    ex = sub.add_parser("exact", help="print a closed-form law")
    ex.add_argument("--law", choices=sorted(_LAWS), required=True)
    ex.add_argument("--n", type=int, required=True)
    ex.add_argument("--samples", type=int, default=0)
    ex.add_argument("--seed", type=int, default=0)
    ex.set_defaults(func=_cmd_exact)

    sw = sub.add_parser("sweep", help="grid run from a JSON config")
    sw.add_argument("--config", required=True)
    sw.add_argument("--csv", default=None, help="override the output CSV path")
    sw.add_argument("--trials", type=int, default=None)
    sw.add_argument("--fresh", action="store_true",
                    help="overwrite the CSV instead of appending")
    sw.add_argument("--jobs", type=int, default=None)
    sw.set_defaults(func=_cmd_sweep)

    ver = sub.add_parser("verify", help="run the invariant and bound-check suite")
    ver.add_argument("--quick", action="store_true")
    ver.add_argument("--seed", type=int, default=20240901)
    ver.add_argument("--jobs", type=int, default=None)
    ver.set_defaults(func=_cmd_verify)

    fit = sub.add_parser("fit", help="fit second-order models to a sweep CSV")
    fit.add_argument("--csv", required=True)
    fit.add_argument("--system", choices=sorted(_SYSTEMS), default="two")
    fit.add_argument("--graph", choices=sorted(_GRAPHS), default="star")
    fit.add_argument("--p", type=float, default=0.5)
    fit.set_defaults(func=_cmd_fit)

    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
