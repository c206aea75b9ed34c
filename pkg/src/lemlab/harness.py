"""Experiment harness: config, deterministic parallel trials, CSV output.

Each trial is a pure function of (master_seed, trial_index): its
substream is derived independently of every other trial, so any thread
arrangement produces the same records.  Records are buffered, sorted by
trial index, and written in one pass; summaries merge per-block
accumulators in fixed index order.  Outputs are therefore byte-identical
across thread counts (timing column aside, which --no-timing zeroes).
"""

from __future__ import annotations

import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .analytic import limit_constant
from .components import annulus_inner_radius, area_outside_mc, count_components, inradius_holds
from .critical import RootCollisionError, find_critical_points
from .polyeval import RootedPolynomial
from .rng import derive_substream, sample_disc_array

CSV_HEADER = (
    "trial,n,components,components_annulus,n_crit_outside,"
    "area_outside_est,max_residual,inradius_ok,wall_micros"
)

#: abort threshold on the fraction of failed trials
FAILURE_ABORT_FRACTION = 1e-3

#: accumulator block size for fixed-order summary merging
SUMMARY_BLOCK = 1024


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericFailureError(RuntimeError):
    """Too many failed trials or a violated numeric contract (exit 3)."""


@dataclass
class ExperimentConfig:
    command: str = "simulate"
    n: int = 100
    trials: int = 100
    master_seed: int = 0
    kappa: float = 2.0
    threads: int = 0
    resolution: int = 512
    bound: float = 1.25
    eps: float = 1e-3
    grid: int = 512
    r: float = 0.5
    a: float = 0.0
    b: float = 0.0
    c_n: float = 0.0
    q1: bool = False
    mode: str = "epsint"
    out_path: str = ""
    area_samples: int = 1024
    boundary_points: int = 512
    solver_max_iters: int = 120
    no_timing: bool = False
    dump_crit: bool = False
    n_list: tuple = ()

    def validate(self):
        checks = [
            (self.n >= 1, "n >= 1"),
            (self.trials >= 1, "trials >= 1"),
            (self.kappa > 0, "kappa > 0"),
            (self.threads >= 0, "threads >= 0"),
            (self.resolution >= 64, "resolution >= 64"),
            (self.bound > 1.0, "bound > 1"),
            (self.eps > 0, "eps > 0"),
            (self.grid >= 256, "grid >= 256"),
            (self.area_samples >= 1, "area_samples >= 1"),
            (self.boundary_points >= 256, "boundary_points >= 256"),
            (self.solver_max_iters >= 1, "solver_max_iters >= 1"),
            (self.master_seed >= 0, "master_seed >= 0"),
        ]
        for ok, what in checks:
            if not ok:
                raise ConfigError("config violates %s" % what)
        if self.command == "scaling" and len(self.n_list) < 2:
            raise ConfigError("scaling needs at least two n values")
        return self


def parse_seed(text):
    """Seed as decimal or 0x-prefixed hex."""
    text = text.strip()
    try:
        if text.lower().startswith("0x"):
            return int(text, 16)
        return int(text, 10)
    except ValueError as exc:
        raise ConfigError("bad seed %r (decimal or 0x hex)" % text) from exc


def read_config_file(path):
    """Plain key=value lines; '#' starts a comment."""
    values = {}
    known = set(ExperimentConfig.__dataclass_fields__)
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key=value" % (path, lineno))
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
            values[key] = val
    return values


# ------------------------------------------------------------- accumulators


@dataclass
class SummaryAccumulator:
    """Streaming count/mean/M2/min/max with exact pooled merging."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: float = math.inf
    max: float = -math.inf

    def add(self, x):
        x = float(x)
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        self.min = min(self.min, x)
        self.max = max(self.max, x)

    @property
    def variance(self):
        if self.count < 2:
            return math.nan
        return self.m2 / (self.count - 1)

    @property
    def se(self):
        if self.count < 2:
            return math.nan
        return math.sqrt(self.variance / self.count)


def merge_summaries(a, b):
    """Exact pooled combination (Chan's parallel update)."""
    if a.count == 0:
        return replace(b)
    if b.count == 0:
        return replace(a)
    count = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * (b.count / count)
    m2 = a.m2 + b.m2 + delta * delta * (a.count * b.count / count)
    return SummaryAccumulator(
        count=count, mean=mean, m2=m2, min=min(a.min, b.min), max=max(a.max, b.max)
    )


def summarize(values):
    """Fixed-order block accumulation of an index-sorted value sequence."""
    blocks = []
    acc = SummaryAccumulator()
    for i, v in enumerate(values):
        acc.add(v)
        if (i + 1) % SUMMARY_BLOCK == 0:
            blocks.append(acc)
            acc = SummaryAccumulator()
    if acc.count:
        blocks.append(acc)
    total = SummaryAccumulator()
    for b in blocks:
        total = merge_summaries(total, b)
    return total


# ------------------------------------------------------------------ trials


@dataclass
class TrialRecord:
    trial_index: int
    n: int
    components: int = 0
    components_annulus: int = 0
    n_crit_outside: int = 0
    area_outside_est: float = 0.0
    max_residual: float = 0.0
    inradius_ok: bool = False
    wall_micros: int = 0
    failed: bool = False
    fail_reason: str = ""

    def csv_row(self):
        return "%d,%d,%d,%d,%d,%r,%r,%d,%d" % (
            self.trial_index,
            self.n,
            self.components,
            self.components_annulus,
            self.n_crit_outside,
            self.area_outside_est,
            self.max_residual,
            1 if self.inradius_ok else 0,
            self.wall_micros,
        )


def run_trial(config, trial_index, stream_index=None):
    """One full simulate trial; never raises on solver failure."""
    t0 = time.perf_counter_ns()
    stream = derive_substream(
        config.master_seed,
        trial_index if stream_index is None else stream_index,
    )
    n = config.n
    roots = sample_disc_array(stream, n)
    poly = RootedPolynomial(roots)
    rec = TrialRecord(trial_index=trial_index, n=n)
    try:
        crit = find_critical_points(
            poly, max_iters=config.solver_max_iters, stream=stream
        )
    except RootCollisionError as exc:
        rec.failed = True
        rec.fail_reason = "root-collision: %s" % exc
        return rec, None, None
    if not crit.converged:
        rec.failed = True
        rec.fail_reason = "solver did not converge (max residual %g)" % (
            float(crit.residuals.max()) if len(crit) else math.nan
        )
        return rec, None, None
    report = count_components(poly, crit, kappa=config.kappa)
    rec.components = report.components
    rec.components_annulus = report.components_annulus
    rec.n_crit_outside = report.n_crit_outside
    rec.max_residual = float(crit.residuals.max()) if len(crit) else 0.0
    if annulus_inner_radius(n, config.kappa) > 0:
        rec.inradius_ok = inradius_holds(poly, config.kappa, config.boundary_points)
    else:
        rec.inradius_ok = True  # probed disc is empty: vacuously inside
    rec.area_outside_est = area_outside_mc(poly, config.area_samples, stream)
    if not config.no_timing:
        rec.wall_micros = (time.perf_counter_ns() - t0) // 1000
    return rec, poly, crit


def _run_trials(config, indices, stream_indices=None):
    """Execute trials under the configured thread count; index-sorted list."""
    workers = config.threads if config.threads > 0 else (os.cpu_count() or 1)

    def job(k):
        idx = indices[k]
        sidx = None if stream_indices is None else stream_indices[k]
        rec, poly, crit = run_trial(config, idx, stream_index=sidx)
        if config.dump_crit and crit is not None and config.out_path:
            path = "%s.crit.%d.csv" % (config.out_path, idx)
            with open(path, "w") as fh:
                for p, res in zip(crit.points, crit.residuals):
                    fh.write("%r,%r,%r\n" % (float(p.real), float(p.imag), float(res)))
        return rec

    if workers <= 1 or len(indices) == 1:
        records = [job(k) for k in range(len(indices))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(job, range(len(indices))))
    records.sort(key=lambda r: r.trial_index)
    return records


def _write_outputs(config, records, out):
    ok = [r for r in records if not r.failed]
    failed = [r for r in records if r.failed]
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for rec in ok:
                fh.write(rec.csv_row() + "\n")
        if failed:
            with open(config.out_path + ".failures", "w") as fh:
                for rec in failed:
                    fh.write("%d,%s\n" % (rec.trial_index, rec.fail_reason))
    return ok, failed


def run_simulate(config, out=sys.stdout):
    """The headline experiment: per-trial component counts plus summary."""
    config.validate()
    records = _run_trials(config, list(range(config.trials)))
    ok, failed = _write_outputs(config, records, out)
    if ok:
        comp = summarize(r.components for r in ok)
        scaled_mean = comp.mean / math.sqrt(config.n)
        scaled_se = comp.se / math.sqrt(config.n)
        lim = limit_constant()
        print("# simulate n=%d trials=%d seed=%d kappa=%g" % (
            config.n, config.trials, config.master_seed, config.kappa), file=out)
        print("# records=%d failures=%d" % (comp.count, len(failed)), file=out)
        print("# mean components        = %.6f (se %.6f)" % (comp.mean, comp.se), file=out)
        print("# mean components/sqrt n = %.6f (se %.6f)" % (scaled_mean, scaled_se), file=out)
        print("# limit constant         = %.10f (|diff| %.6f)" % (
            lim, abs(scaled_mean - lim)), file=out)
    if len(failed) > FAILURE_ABORT_FRACTION * config.trials:
        raise NumericFailureError(
            "%d/%d trials failed (threshold %.2g)"
            % (len(failed), config.trials, FAILURE_ABORT_FRACTION)
        )
    return records


#: scaling rows must keep mean/sqrt(n) inside this bracket for n >= 100
SCALING_BRACKET = (0.2, 1.0)


def run_scaling(config, out=sys.stdout):
    """Component-count scaling across an n-list, with the sqrt(n) bracket."""
    config.validate()
    rows = []
    print("# scaling seed=%d trials=%d kappa=%g" % (
        config.master_seed, config.trials, config.kappa), file=out)
    print("n,trials,failures,mean_components,se,mean_over_sqrt_n,se_over_sqrt_n",
          file=out)
    for n in config.n_list:
        sub = replace(config, n=int(n), command="simulate")
        # distinct substreams per n so rows are independent
        stream_indices = [int(n) * (1 << 32) + t for t in range(config.trials)]
        records = _run_trials(sub, list(range(config.trials)), stream_indices)
        ok = [r for r in records if not r.failed]
        failed = len(records) - len(ok)
        if failed > FAILURE_ABORT_FRACTION * config.trials:
            raise NumericFailureError("n=%d: %d failures" % (n, failed))
        comp = summarize(r.components for r in ok)
        sq = math.sqrt(n)
        row = (int(n), comp.count, failed, comp.mean, comp.se,
               comp.mean / sq, comp.se / sq)
        rows.append(row)
        print("%d,%d,%d,%r,%r,%r,%r" % row, file=out)
    lim = limit_constant()
    for row in rows:
        n, _, _, _, _, scaled, _ = row
        if n >= 100 and not (SCALING_BRACKET[0] <= scaled <= SCALING_BRACKET[1]):
            raise NumericFailureError(
                "n=%d: mean/sqrt(n)=%.4f outside %s" % (n, scaled, SCALING_BRACKET)
            )
    print("# limit constant = %.10f" % lim, file=out)
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write("n,trials,failures,mean_components,se,"
                     "mean_over_sqrt_n,se_over_sqrt_n\n")
            for row in rows:
                fh.write("%d,%d,%d,%r,%r,%r,%r\n" % row)
    return rows
