"""Scenario runner and table emitter.

Subcommands: ``scenario`` (migration-vs-checkpointing improvement tables over
the MTBF/machines/epsilon grid), ``yield`` (periodic-checkpointing yield
table), ``spares`` (one spare-pool sizing), ``periodic`` (optimal period and
feasibility numbers), ``simulate`` (Monte Carlo runs).

Exit codes: 0 success, 2 invalid arguments, 3 infeasible model (the
lower-bound sizing cannot reach the requested success probability).

Parallel workloads need a power-of-two machine count for the job mix; grid
sizes like 10**5 are mapped to the nearest power of two for the mix and the
throughputs are rescaled to the actual machine count (spare sizing always
uses the actual count). Improvement percentages are unaffected by the
rescaling.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .errors import InfeasibleSpareCountError, ParameterError
from .failures import (
    MINUTES_PER_DAY,
    MINUTES_PER_MONTH,
    MINUTES_PER_WEEK,
    MINUTES_PER_YEAR,
    Exponential,
    Weibull,
)
from .jobmix import DEFAULT_P_SEQUENTIAL, solve_job_mix
from .periodic import (
    min_waste,
    min_waste_unclamped,
    mtbf_feasibility_threshold,
    optimal_period,
    waste_extended,
    yield_independent,
    yield_parallel,
)
from .presets import (
    GRID_EPSILON,
    GRID_MACHINES,
    GRID_MTBF_MINUTES,
    YIELD_DEFAULT_MACHINES,
    YIELD_DEFAULT_MTBF_MINUTES,
    load_presets,
)
from .simulator import Migration, Periodic, PredictedCheckpoint, SimConfig, simulate
from .spares import availability_params, min_spares
from .throughput import (
    CostParams,
    improvement_pct,
    throughput_checkpoint_parallel,
    throughput_checkpoint_sequential,
    throughput_migration_parallel,
    throughput_migration_sequential,
)

_MTBF_SUFFIXES = {
    "d": MINUTES_PER_DAY,
    "w": MINUTES_PER_WEEK,
    "mo": MINUTES_PER_MONTH,
    "y": MINUTES_PER_YEAR,
    "m": 1.0,
}
_MTBF_LABELS = {
    MINUTES_PER_DAY: "1 day",
    MINUTES_PER_WEEK: "1 week",
    MINUTES_PER_MONTH: "1 month",
    MINUTES_PER_YEAR: "1 year",
}


def parse_mtbf(text: str) -> float:
    """Parse an MTBF with unit suffix: 1d, 1w, 1mo, 1y, or minutes (42 or 42m)."""
    text = text.strip().lower()
    for suffix in ("mo", "y", "w", "d", "m"):
        if text.endswith(suffix):
            number = text[: -len(suffix)] or "1"
            try:
                value = float(number)
            except ValueError:
                raise ParameterError(f"cannot parse MTBF {text!r}") from None
            return value * _MTBF_SUFFIXES[suffix]
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"cannot parse MTBF {text!r}") from None


def mtbf_label(minutes: float) -> str:
    return _MTBF_LABELS.get(minutes, f"{minutes:g} min")


def _round_log2(n: int) -> int:
    return round(math.log2(n))


def scenario_cell(
    costs: CostParams,
    mtbf: float,
    machines: int,
    epsilon: float,
    workload: str = "seq",
    p_sequential: float = DEFAULT_P_SEQUENTIAL,
    method: str = "exact",
) -> dict:
    """One table cell: spare sizing plus both throughputs and the improvement."""
    params = availability_params(mtbf, costs.migration, costs.downtime)
    if workload == "seq":
        rho_cp = throughput_checkpoint_sequential(machines, mtbf, costs)
    elif workload == "par":
        mix = solve_job_mix(_round_log2(machines), p_sequential)
        rho_cp = throughput_checkpoint_parallel(mix, Exponential(mtbf), costs) * (machines / mix.machines)
    else:
        raise ParameterError(f"workload must be 'seq' or 'par', got {workload!r}")

    cell = {
        "mu_minutes": mtbf,
        "N": machines,
        "epsilon": epsilon,
        "spares": None,
        "rho_cp": rho_cp,
        "rho_m": None,
        "improvement_pct": None,
    }
    try:
        sizing = min_spares(machines, params, epsilon, method)
    except InfeasibleSpareCountError:
        return cell
    if workload == "seq":
        rho_m = throughput_migration_sequential(machines, sizing.spares, mtbf, costs.migration)
    else:
        unscaled = throughput_migration_parallel(mix, mtbf, costs.migration, 0)
        rho_m = unscaled * (machines - sizing.spares) / mix.machines
    cell.update(spares=sizing.spares, rho_m=rho_m, improvement_pct=improvement_pct(rho_m, rho_cp))
    return cell


def scenario_grid(
    costs: CostParams,
    workload: str = "seq",
    p_sequential: float = DEFAULT_P_SEQUENTIAL,
    mtbf_grid=GRID_MTBF_MINUTES,
    machines_grid=GRID_MACHINES,
    epsilon_grid=GRID_EPSILON,
    method: str = "exact",
) -> list[dict]:
    return [
        scenario_cell(costs, mu, n, eps, workload, p_sequential, method)
        for mu in mtbf_grid
        for n in machines_grid
        for eps in epsilon_grid
    ]


def yield_grid(
    ckpt: float,
    recovery: float,
    downtime: float,
    p_sequential: float = DEFAULT_P_SEQUENTIAL,
    machines_grid=YIELD_DEFAULT_MACHINES,
    mtbf_grid=YIELD_DEFAULT_MTBF_MINUTES,
) -> list[dict]:
    """Yield (percent of platform) per (N, mtbf) under periodic checkpointing."""
    rows = []
    for n in machines_grid:
        if n < 1 or n & (n - 1):
            raise ParameterError(f"machine counts must be powers of two for the job mix, got {n}")
        z = int(math.log2(n))
        for mu in mtbf_grid:
            if p_sequential >= 1.0:
                rho = yield_independent(n, ckpt, mu, recovery, downtime)
            else:
                mix = solve_job_mix(z, p_sequential)
                rho = yield_parallel(mix, ckpt, mu, recovery, downtime)
            rows.append({"N": n, "mu_minutes": mu, "yield_pct": 100.0 * rho / n})
    return rows


def _format_cell(cell: dict) -> str:
    if cell["spares"] is None:
        return "infeasible"
    return f"{cell['improvement_pct']:.1f}% ({cell['spares']})"


def render_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(r[i].ljust(widths[i]) for i in range(len(headers))).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _scenario_table(name: str, cells: list[dict]) -> str:
    columns = sorted({(c["N"], c["epsilon"]) for c in cells})
    mtbfs = sorted({c["mu_minutes"] for c in cells})
    by_key = {(c["mu_minutes"], c["N"], c["epsilon"]): c for c in cells}
    headers = ["mtbf"] + [f"N={n:g} eps={eps:g}" for n, eps in columns]
    rows = [
        [mtbf_label(mu)] + [_format_cell(by_key[(mu, n, eps)]) for n, eps in columns]
        for mu in mtbfs
    ]
    return f"scenario: {name}\n" + render_table(headers, rows)


def _scenario_csv(name: str, cells: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["scenario", "mu_minutes", "N", "epsilon", "spares", "rho_cp", "rho_m", "improvement_pct"])
    for c in cells:
        writer.writerow(
            [name, c["mu_minutes"], c["N"], c["epsilon"], c["spares"], c["rho_cp"], c["rho_m"], c["improvement_pct"]]
        )
    return buf.getvalue()


def _yield_table(rows: list[dict]) -> str:
    mtbfs = sorted({r["mu_minutes"] for r in rows})
    machines = sorted({r["N"] for r in rows})
    by_key = {(r["N"], r["mu_minutes"]): r for r in rows}
    headers = ["N"] + [f"yield (mtbf={mtbf_label(mu)})" for mu in mtbfs]
    body = [
        [f"2^{int(math.log2(n))}"] + [f"{by_key[(n, mu)]['yield_pct']:.1f}%" for mu in mtbfs]
        for n in machines
    ]
    return render_table(headers, body)


def _rows_csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _kv_table(pairs: list[tuple[str, object]]) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _warn_sensibility(costs: CostParams) -> None:
    if not costs.migration_sensible:
        print(
            f"warning: migration makes sense only if M < C+D+R "
            f"(M={costs.migration:g}, C+D+R={costs.outage:g})",
            file=sys.stderr,
        )


def _costs_from_args(args) -> CostParams:
    missing = [flag for flag in ("C", "R", "D", "M") if getattr(args, flag) is None]
    if missing:
        raise ParameterError(f"custom scenario requires --{' --'.join(missing)}")
    return CostParams(checkpoint=args.C, recovery=args.R, downtime=args.D, migration=args.M)


def _cmd_scenario(args) -> int:
    presets = load_presets(args.presets)
    if args.preset == "custom":
        costs = _costs_from_args(args)
        name = "custom"
    elif args.preset in presets:
        costs = presets[args.preset]
        name = args.preset
        for flag in ("C", "R", "D", "M"):
            if getattr(args, flag) is not None:
                raise ParameterError(f"--{flag} only applies to the 'custom' scenario")
    else:
        raise ParameterError(f"unknown preset {args.preset!r}; choose from {sorted(presets)} or 'custom'")

    _warn_sensibility(costs)
    mtbf_grid = [parse_mtbf(t) for t in args.mtbf] if args.mtbf else GRID_MTBF_MINUTES
    machines_grid = args.N or GRID_MACHINES
    epsilon_grid = args.epsilon or GRID_EPSILON
    cells = scenario_grid(costs, args.workload, args.p1, mtbf_grid, machines_grid, epsilon_grid, args.method)

    if args.format == "json":
        text = json.dumps({"scenario": name, "grid": cells}, indent=2) + "\n"
    elif args.format == "csv":
        text = _scenario_csv(name, cells)
    else:
        text = _scenario_table(name, cells)
    _emit(text, args.out)
    return 3 if any(c["spares"] is None for c in cells) else 0


def _cmd_yield(args) -> int:
    machines_grid = args.N or YIELD_DEFAULT_MACHINES
    mtbf_grid = [parse_mtbf(t) for t in args.mtbf] if args.mtbf else YIELD_DEFAULT_MTBF_MINUTES
    rows = yield_grid(args.C, args.R, args.D, args.p1, machines_grid, mtbf_grid)
    if args.format == "json":
        text = json.dumps({"C": args.C, "R": args.R, "D": args.D, "p1": args.p1, "grid": rows}, indent=2) + "\n"
    elif args.format == "csv":
        text = _rows_csv(rows, ["N", "mu_minutes", "yield_pct"])
    else:
        text = _yield_table(rows)
    _emit(text, args.out)
    return 0


def _cmd_spares(args) -> int:
    mtbf = parse_mtbf(args.mtbf)
    costs = CostParams(checkpoint=args.C, recovery=args.R, downtime=args.D, migration=args.M)
    _warn_sensibility(costs)
    params = availability_params(mtbf, costs.migration, costs.downtime)
    sizing = min_spares(args.N, params, args.epsilon, args.method)
    record = {
        "N": args.N,
        "mu_minutes": mtbf,
        "epsilon": args.epsilon,
        "method": sizing.method,
        "spares": sizing.spares,
        "achieved_success": sizing.achieved_success,
        "busy_probability": params.busy,
    }
    if args.format == "json":
        text = json.dumps(record, indent=2) + "\n"
    elif args.format == "csv":
        text = _rows_csv([record], list(record))
    else:
        text = _kv_table(list(record.items()))
    _emit(text, args.out)
    return 0


def _cmd_periodic(args) -> int:
    mtbf = parse_mtbf(args.mtbf)
    t_opt = optimal_period(args.C, mtbf)
    nu_b, mtbf_min = mtbf_feasibility_threshold(args.C, args.R, args.D)
    record = {
        "mu_minutes": mtbf,
        "optimal_period": t_opt,
        "waste_at_optimum": waste_extended(args.C, t_opt, mtbf, args.R, args.D) if t_opt > 0 else min_waste(args.C, mtbf, args.R, args.D),
        "min_waste": min_waste(args.C, mtbf, args.R, args.D),
        "min_waste_unclamped": min_waste_unclamped(args.C, mtbf, args.R, args.D),
        "nu_b": nu_b,
        "mtbf_min": mtbf_min,
    }
    if args.N is not None:
        if args.p1 >= 1.0:
            record["yield_machines"] = yield_independent(args.N, args.C, mtbf, args.R, args.D)
        else:
            if args.N < 1 or args.N & (args.N - 1):
                raise ParameterError(f"parallel yield needs a power-of-two machine count, got {args.N}")
            mix = solve_job_mix(int(math.log2(args.N)), args.p1)
            record["yield_machines"] = yield_parallel(mix, args.C, mtbf, args.R, args.D)
        record["yield_pct"] = 100.0 * record["yield_machines"] / args.N
    if args.format == "json":
        text = json.dumps(record, indent=2) + "\n"
    elif args.format == "csv":
        text = _rows_csv([record], list(record))
    else:
        text = _kv_table(list(record.items()))
    _emit(text, args.out)
    return 0


def _cmd_simulate(args) -> int:
    mtbf = parse_mtbf(args.mtbf)
    if args.dist == "exp":
        model = Exponential(mtbf)
    else:
        if args.weibull_shape is None:
            raise ParameterError("--weibull-shape is required with --dist weibull")
        scale = args.weibull_scale if args.weibull_scale is not None else mtbf / math.gamma(1.0 + 1.0 / args.weibull_shape)
        model = Weibull(scale=scale, shape=args.weibull_shape)
    costs = CostParams(checkpoint=args.C, recovery=args.R, downtime=args.D, migration=args.M)

    if args.policy == "checkpoint":
        policy = PredictedCheckpoint()
    elif args.policy == "migration":
        if args.spares is None:
            raise ParameterError("--spares is required with --policy migration")
        policy = Migration(spares=args.spares)
    else:
        k = args.job_size_log2
        if args.period == "opt":
            period = optimal_period(args.C, model.mean() / 2.0**k)
        else:
            period = float(args.period)
        policy = Periodic(period=period, job_size_log2=k)

    config = SimConfig(
        machines=args.N,
        horizon=args.horizon,
        failure_model=model,
        costs=costs,
        policy=policy,
        seed=args.seed,
        replications=args.replications,
    )
    result = simulate(config)
    record = {
        "policy": args.policy,
        "machines": args.N,
        "horizon": args.horizon,
        "seed": args.seed,
        "replications": args.replications,
        "mean_throughput": result.mean_throughput,
        "ci95_halfwidth": result.ci95_halfwidth,
        "run_failure_rate": result.run_failure_rate,
        "measured_waste": result.measured_waste,
        "mean_work_lost_per_failure": result.mean_work_lost_per_failure,
        "outage_fraction": result.outage_fraction,
    }
    if args.format == "json":
        text = json.dumps(record, indent=2) + "\n"
    elif args.format == "csv":
        text = _rows_csv([record], list(record))
    else:
        text = _kv_table(list(record.items()))
    _emit(text, args.out)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("table", "csv", "json"), default="table")
    parser.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ckptmig", description="checkpointing vs migration scenario tables")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scenario", help="improvement table for a cost preset or custom costs")
    p.add_argument("preset", help="preset name (see --presets) or 'custom'")
    p.add_argument("--presets", help="JSON file with preset definitions")
    p.add_argument("--workload", choices=("seq", "par"), default="seq")
    p.add_argument("--p1", type=float, default=DEFAULT_P_SEQUENTIAL, help="probability a job is sequential")
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--M", type=float, default=None)
    p.add_argument("--mtbf", nargs="+", help="MTBF grid values (1d, 1w, 1mo, 1y, or minutes)")
    p.add_argument("--N", type=int, nargs="+", help="machine-count grid values")
    p.add_argument("--epsilon", type=float, nargs="+", help="target failure-probability grid values")
    p.add_argument("--method", choices=("exact", "lower-bound"), default="exact")
    _add_common(p)
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("yield", help="periodic-checkpointing yield table")
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--R", type=float, default=1.0)
    p.add_argument("--D", type=float, default=1.0)
    p.add_argument("--p1", type=float, default=DEFAULT_P_SEQUENTIAL)
    p.add_argument("--N", type=int, nargs="+", help="power-of-two machine counts")
    p.add_argument("--mtbf", nargs="+")
    _add_common(p)
    p.set_defaults(func=_cmd_yield)

    p = sub.add_parser("spares", help="minimal spare count for a success target")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mtbf", required=True)
    p.add_argument("--C", type=float, default=0.0)
    p.add_argument("--R", type=float, default=0.0)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--method", choices=("exact", "lower-bound"), default="exact")
    _add_common(p)
    p.set_defaults(func=_cmd_spares)

    p = sub.add_parser("periodic", help="optimal period, minimum waste, and feasibility threshold")
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--D", type=float, required=True)
    p.add_argument("--mtbf", required=True)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--p1", type=float, default=DEFAULT_P_SEQUENTIAL)
    _add_common(p)
    p.set_defaults(func=_cmd_periodic)

    p = sub.add_parser("simulate", help="Monte Carlo validation runs")
    p.add_argument("--policy", choices=("checkpoint", "migration", "periodic"), required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replications", type=int, default=1)
    p.add_argument("--dist", choices=("exp", "weibull"), default="exp")
    p.add_argument("--mtbf", required=True)
    p.add_argument("--weibull-shape", type=float, default=None)
    p.add_argument("--weibull-scale", type=float, default=None, help="defaults to matching the --mtbf mean")
    p.add_argument("--C", type=float, default=0.0)
    p.add_argument("--R", type=float, default=0.0)
    p.add_argument("--D", type=float, default=0.0)
    p.add_argument("--M", type=float, default=0.0)
    p.add_argument("--spares", type=int, default=None)
    p.add_argument("--period", default="opt", help="checkpoint period in minutes, or 'opt'")
    p.add_argument("--job-size-log2", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleSpareCountError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
