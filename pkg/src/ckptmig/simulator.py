"""Seeded Monte Carlo discrete-event oracle for the analytic models.

Three policies:

* ``PredictedCheckpoint`` — every machine runs its own sequential job;
  failure prediction is perfect and costless, so the machine checkpoints
  just in time and is unavailable for C+D+R per failure. The next failure
  is drawn fresh when work resumes (outages are failure-free).
* ``Migration`` — N-m machines run jobs, m wait as spares. On a predicted
  failure the job moves to a spare (M minutes of job downtime) while the
  victim reboots for D and then rejoins the pool. A predicted failure that
  finds the pool empty aborts the replication: it is excluded from the
  throughput mean and counted in ``run_failure_rate``. Only machines
  running jobs draw predicted failures; an idle spare has nothing to move.
* ``Periodic`` — no prediction: a single job on 2**k processors checkpoints
  every ``period`` minutes of work. The group fails at the minimum of its
  members' failure times; a failure discards all work since the last
  committed checkpoint (a full period if it hits during the checkpoint
  write itself) and costs R+D before work resumes. Failures may also strike
  during checkpoints and recoveries, which the first-order waste formula
  ignores; the simulator exists to quantify exactly that gap.

``mean_work_lost_per_failure`` averages the discarded work over failures
that interrupt work or a checkpoint write; failures landing inside a
recovery window interrupt no work and are excluded from that average
(they still extend the recovery and count toward the waste).

Replications draw from independently seeded streams spawned from the one
config seed, so identical configs give bit-identical results.
"""

from __future__ import annotations

import heapq
import math
import statistics
import warnings
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .failures import FailureModel, group_min_model, replication_streams, sample_failure_times
from .throughput import CostParams


@dataclass(frozen=True)
class PredictedCheckpoint:
    pass


@dataclass(frozen=True)
class Migration:
    spares: int


@dataclass(frozen=True)
class Periodic:
    period: float
    job_size_log2: int = 0


Policy = PredictedCheckpoint | Migration | Periodic


@dataclass(frozen=True)
class SimConfig:
    machines: int
    horizon: float
    failure_model: FailureModel
    costs: CostParams
    policy: Policy
    seed: int = 0
    replications: int = 1


@dataclass(frozen=True)
class SimResult:
    mean_throughput: float
    ci95_halfwidth: float
    run_failure_rate: float
    measured_waste: float | None = None
    mean_work_lost_per_failure: float | None = None
    outage_fraction: float | None = None


def _validate(config: SimConfig) -> None:
    if config.machines != int(config.machines) or config.machines < 1:
        raise ParameterError(f"machines must be a positive integer, got {config.machines}")
    if not config.horizon > 0:
        raise ParameterError(f"horizon must be positive, got {config.horizon}")
    if config.replications < 1:
        raise ParameterError(f"replications must be >= 1, got {config.replications}")
    policy = config.policy
    if isinstance(policy, Migration):
        if policy.spares != int(policy.spares) or not 0 <= policy.spares <= config.machines:
            raise ParameterError(f"spares must be an integer in [0, {config.machines}], got {policy.spares}")
    elif isinstance(policy, Periodic):
        if not policy.period > 0:
            raise ParameterError(f"period must be positive, got {policy.period}")
        if policy.job_size_log2 < 0 or 2**policy.job_size_log2 > config.machines:
            raise ParameterError(
                f"job_size_log2 must satisfy 2**k <= machines, got k={policy.job_size_log2} for {config.machines}"
            )
    elif not isinstance(policy, PredictedCheckpoint):
        raise ParameterError(f"unknown policy {policy!r}")

    if isinstance(policy, Periodic):
        scale = group_min_model(config.failure_model, policy.job_size_log2).mean()
    else:
        scale = config.failure_model.mean()
    if config.horizon < 100.0 * scale:
        warnings.warn(
            f"horizon {config.horizon} is below 100x the relevant MTBF {scale:.6g}; estimates may be noisy",
            stacklevel=3,
        )


def _run_predicted_checkpoint(config: SimConfig, rng: np.random.Generator) -> dict:
    n, horizon = config.machines, config.horizon
    outage = config.costs.outage
    now = np.zeros(n)
    useful = np.zeros(n)
    active = np.arange(n)
    while active.size:
        draws = sample_failure_times(config.failure_model, rng, active.size)
        useful[active] += np.minimum(draws, horizon - now[active])
        now[active] += draws + outage
        active = active[now[active] < horizon]
    total_useful = float(useful.sum())
    return {
        "throughput": total_useful / horizon,
        "outage_fraction": 1.0 - total_useful / (n * horizon),
    }


_EV_JOIN, _EV_FAIL = 0, 1  # JOIN sorts first so a spare freed at time t can serve a failure at t


def _run_migration(config: SimConfig, rng: np.random.Generator) -> dict:
    n, horizon = config.machines, config.horizon
    m = config.policy.spares
    mig, reboot = config.costs.migration, config.costs.downtime
    n_jobs = n - m
    if n_jobs == 0:
        return {"throughput": 0.0, "outage_fraction": 0.0}

    pool = deque(range(n_jobs, n))
    events: list[tuple[float, int, int]] = []
    for machine in range(n_jobs):
        t = float(sample_failure_times(config.failure_model, rng))
        if t < horizon:
            heapq.heappush(events, (t, _EV_FAIL, machine))

    job_downtime = 0.0
    busy_time = 0.0  # machine-minutes spent migrating or rebooting
    while events:
        t, kind, machine = heapq.heappop(events)
        if kind == _EV_JOIN:
            pool.append(machine)
            continue
        if not pool:
            if mig + reboot == 0.0:
                # zero-length outage: the machine serves as its own spare
                t_next = t + float(sample_failure_times(config.failure_model, rng))
                if t_next < horizon:
                    heapq.heappush(events, (t_next, _EV_FAIL, machine))
                continue
            return {"failed_at": t}
        target = pool.popleft()
        job_downtime += min(mig, horizon - t)
        busy_time += min(mig + reboot, horizon - t)
        resume = t + mig
        if resume < horizon:
            t_next = resume + float(sample_failure_times(config.failure_model, rng))
            if t_next < horizon:
                heapq.heappush(events, (t_next, _EV_FAIL, target))
        rejoin = t + mig + reboot
        if rejoin < horizon:
            heapq.heappush(events, (rejoin, _EV_JOIN, machine))

    return {
        "throughput": (n_jobs * horizon - job_downtime) / horizon,
        "outage_fraction": busy_time / (n * horizon),
    }


def _run_periodic(config: SimConfig, rng: np.random.Generator) -> dict:
    horizon = config.horizon
    period = config.policy.period
    group = 2**config.policy.job_size_log2
    C, R, D = config.costs.checkpoint, config.costs.recovery, config.costs.downtime
    model = group_min_model(config.failure_model, config.policy.job_size_log2)

    def next_failure(t: float) -> float:
        return t + float(sample_failure_times(model, rng))

    t = 0.0
    committed = 0.0
    progress = 0.0  # work done since the last committed checkpoint
    failures = 0
    work_failures = 0  # failures that interrupted work or a checkpoint write
    lost = 0.0
    fail_at = next_failure(0.0)

    def recover(t_fail: float) -> tuple[float, float]:
        # returns (time work resumes, next pending failure); nested failures restart recovery
        nonlocal failures
        end = t_fail + R + D
        pending = next_failure(t_fail)
        while pending < min(end, horizon):
            failures += 1
            end = pending + R + D
            pending = next_failure(pending)
        return min(end, horizon), pending

    while t < horizon:
        # work phase until the next checkpoint is due
        work_end = t + (period - progress)
        if fail_at < min(work_end, horizon):
            progress += fail_at - t
            failures += 1
            work_failures += 1
            lost += progress
            progress = 0.0
            t, fail_at = recover(fail_at)
            continue
        if work_end >= horizon:
            progress += horizon - t
            break
        progress = period
        t = work_end
        # checkpoint write
        ckpt_end = t + C
        if fail_at < min(ckpt_end, horizon):
            failures += 1
            work_failures += 1
            lost += progress
            progress = 0.0
            t, fail_at = recover(fail_at)
            continue
        if ckpt_end >= horizon:
            break  # horizon hit mid-write; the period stays uncommitted in `progress`
        t = ckpt_end
        committed += period
        progress = 0.0

    useful = committed + progress  # in-flight work at the horizon still counts as progress
    waste = 1.0 - useful / horizon
    return {
        "throughput": (useful / horizon) * group,
        "waste": waste,
        "failures": failures,
        "work_failures": work_failures,
        "lost": lost,
    }


def simulate(config: SimConfig) -> SimResult:
    """Run the configured policy over seeded replications and aggregate.

    Deterministic: the same config always produces the same result. Failed
    migration replications are excluded from the throughput statistics and
    reported through ``run_failure_rate``.
    """
    _validate(config)
    if isinstance(config.policy, PredictedCheckpoint):
        runner = _run_predicted_checkpoint
    elif isinstance(config.policy, Migration):
        runner = _run_migration
    else:
        runner = _run_periodic

    outcomes = [runner(config, rng) for rng in replication_streams(config.seed, config.replications)]
    completed = [o for o in outcomes if "failed_at" not in o]
    failed = len(outcomes) - len(completed)

    throughputs = [o["throughput"] for o in completed]
    if throughputs:
        mean = statistics.fmean(throughputs)
        ci95 = 1.96 * statistics.stdev(throughputs) / math.sqrt(len(throughputs)) if len(throughputs) > 1 else 0.0
    else:
        mean = math.nan
        ci95 = math.nan

    waste = None
    lost_per_failure = None
    outage = None
    if isinstance(config.policy, Periodic):
        waste = statistics.fmean(o["waste"] for o in completed) if completed else math.nan
        total_lost = sum(o["lost"] for o in completed)
        total_work_failures = sum(o["work_failures"] for o in completed)
        lost_per_failure = total_lost / total_work_failures if total_work_failures else math.nan
    elif completed:
        outage = statistics.fmean(o["outage_fraction"] for o in completed)

    return SimResult(
        mean_throughput=mean,
        ci95_halfwidth=ci95,
        run_failure_rate=failed / len(outcomes),
        measured_waste=waste,
        mean_work_lost_per_failure=lost_per_failure,
        outage_fraction=outage,
    )
