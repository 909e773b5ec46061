"""Monte Carlo sweep engine with common random numbers.

A sweep runs T independent block realizations for every grid point of
(K, N, snr or tx power, eta_I, scheduler). Channel material for trial t of a
(mode, K, N) group is derived only from (master_seed, mode, K, N, t), so all
schedulers and all threshold or power settings see identical channels, any
subset of the grid reproduces the full run's numbers exactly, and execution
order cannot matter.
"""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import prob_at_least_one
from .channel import (
    ChannelRealization,
    cross_gain_sums,
    desired_gains,
    draw_flat,
    draw_geometric,
    hex_cluster,
    place_users_uniform,
    uniform_beta,
)
from .metrics import genie_cell_rates, per_cell_rate, sinr
from .scheduling import SCHEDULERS, DosParams, decide, eta_tr_for, report_from_parts

MODES = ("flat", "geometric")
_MODE_TAG = {"flat": 0, "geometric": 1}

# target element count of one batch's gain tensor; keeps memory modest
_BATCH_BUDGET = 4_000_000

__all__ = [
    "EtaTable",
    "MODES",
    "ScalingReport",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "find_optimal_eta",
    "mc_at_least_one",
    "read_sweep_csv",
    "run_sweep",
    "scaling_probe",
    "summarize",
    "trial_rng",
    "write_csv_atomic",
]


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep grid.

    Exactly one of ``snr_db`` (flat mode) or ``tx_power_dbm`` (geometric
    mode) must be set. ``eta_tr=None`` derives the signal threshold per N as
    epsilon * ln N; a float pins it for every grid point.
    """

    mode: str = "flat"
    schedulers: tuple[str, ...] = ("dos",)
    K: tuple[int, ...] = (3,)
    N: tuple[int, ...] = (100,)
    snr_db: tuple[float, ...] | None = None
    tx_power_dbm: tuple[float, ...] | None = None
    eta_I: tuple[float, ...] = (0.5,)
    eta_tr: float | None = None
    epsilon: float = 0.5
    trials: int = 10_000
    master_seed: int = 1
    beta_cross: float = 1.0
    interference_includes_snr: bool = True
    cell_radius_m: float = 500.0
    pl_exponent: float = 3.0
    shadow_std_db: float = 8.0
    noise_dbm: float = -104.0

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in ("schedulers", "K", "N", "eta_I"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} axis must be nonempty")
        unknown = set(self.schedulers) - set(SCHEDULERS)
        if unknown:
            raise ValueError(f"unknown schedulers {sorted(unknown)}; expected {SCHEDULERS}")
        if any(k < 1 for k in self.K) or any(n < 1 for n in self.N):
            raise ValueError("K and N values must be >= 1")
        if any(e <= 0 for e in self.eta_I):
            raise ValueError("eta_I values must be > 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.mode == "flat":
            if self.snr_db is None or self.tx_power_dbm is not None:
                raise ValueError("flat mode sweeps snr_db (tx_power_dbm not allowed)")
        else:
            if self.tx_power_dbm is None or self.snr_db is not None:
                raise ValueError("geometric mode sweeps tx_power_dbm (snr_db not allowed)")
            if max(self.K) > 7:
                raise ValueError("geometric mode supports at most 7 cells")
        if len(self.axis_values) == 0:
            raise ValueError("the snr or power axis must be nonempty")
        if not 0 < self.beta_cross <= 1:
            raise ValueError("beta_cross must lie in (0, 1]")
        if self.eta_tr is not None and self.eta_tr < 0:
            raise ValueError("eta_tr must be >= 0")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    @property
    def axis_name(self) -> str:
        return "snr_db" if self.mode == "flat" else "tx_power_dbm"

    @property
    def axis_values(self) -> tuple[float, ...]:
        return self.snr_db if self.mode == "flat" else self.tx_power_dbm

    def snr_linear(self, axis_value: float) -> float:
        """Linear transmit-power to noise-power ratio at one axis point."""
        if self.mode == "flat":
            return 10.0 ** (axis_value / 10.0)
        return 10.0 ** ((axis_value - self.noise_dbm) / 10.0)

    def eta_tr_at(self, N: int) -> float:
        return self.eta_tr if self.eta_tr is not None else eta_tr_for(N, self.epsilon)


@dataclass
class SweepRow:
    """Aggregated results of one grid point."""

    scheduler: str
    K: int
    N: int
    snr_db: float | None
    tx_power_dbm: float | None
    eta_I: float
    eta_tr: float
    mean_rate_per_cell: float
    std_error: float
    ci95: float
    qualifier_mean: float
    fallback_frac: float
    trials: int
    seed: int
    genie_mean: float = float("nan")  # in-memory only, not serialized


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow] = field(default_factory=list)

    def csv_header(self) -> list[str]:
        return [
            "scheduler",
            "K",
            "N",
            self.spec.axis_name,
            "eta_I",
            "eta_tr",
            "mean_rate_per_cell",
            "ci95",
            "qualifier_mean",
            "fallback_frac",
            "trials",
            "seed",
        ]

    def to_csv(self, path: str) -> None:
        """Write one row per grid point; atomic so readers never see a stub."""
        axis = self.spec.axis_name
        records = []
        for r in self.rows:
            records.append(
                [
                    r.scheduler,
                    r.K,
                    r.N,
                    getattr(r, axis),
                    r.eta_I,
                    r.eta_tr,
                    r.mean_rate_per_cell,
                    r.ci95,
                    r.qualifier_mean,
                    r.fallback_frac,
                    r.trials,
                    r.seed,
                ]
            )
        write_csv_atomic(path, self.csv_header(), records)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)) or isinstance(value, str):
        return str(value)
    return f"{float(value):.10g}"


def write_csv_atomic(path: str, header: list[str], records: list[list]) -> None:
    """Write a CSV deterministically; temp file plus rename, never partial."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".csv.tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for rec in records:
                writer.writerow([_fmt(v) for v in rec])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_sweep_csv(path: str) -> list[dict]:
    """Read a sweep CSV back into dicts with numeric fields coerced."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rec = {}
            for key, val in row.items():
                if key == "scheduler":
                    rec[key] = val
                elif key in ("K", "N", "trials", "seed"):
                    rec[key] = int(val)
                else:
                    rec[key] = float(val)
            out.append(rec)
    return out


def summarize(values: np.ndarray) -> tuple[float, float, float]:
    """Mean, standard error and 95% CI half-width of per-trial statistics."""
    values = np.asarray(values, float)
    n = values.size
    mean = float(values.mean())
    if n < 2:
        return mean, 0.0, 0.0
    se = float(values.std(ddof=1) / np.sqrt(n))
    return mean, se, 1.96 * se


def trial_rng(master_seed: int, mode: str, K: int, N: int, trial: int) -> np.random.Generator:
    """Independent generator for one trial of a (mode, K, N) group.

    Keyed by values only, so the same trial yields the same channel no
    matter which grid points consume it or in what order trials run.
    """
    return np.random.default_rng(
        np.random.SeedSequence((master_seed, _MODE_TAG[mode], K, N, trial))
    )


def _draw_trial(spec: SweepSpec, K: int, N: int, trial: int):
    """One trial's channel (snr unset) plus its grant tie-break uniforms.

    Draw order inside the trial stream is fixed: placement and shadowing
    (geometric only), small-scale gains, then the (K, N) uniforms.
    """
    rng = trial_rng(spec.master_seed, spec.mode, K, N, trial)
    if spec.mode == "flat":
        ch = draw_flat(K, N, uniform_beta(K, spec.beta_cross), rng)
    else:
        geom = place_users_uniform(hex_cluster(spec.cell_radius_m, K), N, rng)
        ch = draw_geometric(geom, spec.pl_exponent, spec.shadow_std_db, rng)
    return ch, rng.random((K, N))


def _batch_trials(spec: SweepSpec, K: int, N: int, start: int, count: int):
    """Stack ``count`` consecutive trials into batched arrays."""
    small = np.empty((count, K, K, N))
    ties = np.empty((count, K, N))
    # flat mode shares one (K, K) amplitude matrix; geometric is per link
    large = None if spec.mode == "flat" else np.empty((count, K, K, N))
    beta = None
    for j in range(count):
        ch, tie = _draw_trial(spec, K, N, start + j)
        small[j] = ch.small
        ties[j] = tie
        if large is None:
            beta = ch.large
        else:
            large[j] = ch.large
    return ChannelRealization(small=small, large=beta if large is None else large), ties


@dataclass
class _PointAccumulator:
    """Per-trial statistics of one grid point, gathered across batches.

    Keeping the raw per-trial values (a few floats per trial) makes the
    aggregates independent of how trials were split into batches.
    """

    rate: list = field(default_factory=list)
    qual: list = field(default_factory=list)
    fallback: list = field(default_factory=list)
    genie: list = field(default_factory=list)


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run the full grid and aggregate per-point statistics.

    The reported per-cell rate averages all cells in flat mode; in geometric
    mode it is the center cell's rate, the one with a full ring of
    interferers.
    """
    spec.validate()
    result = SweepResult(spec=spec)
    for K in spec.K:
        for N in spec.N:
            result.rows.extend(_run_group(spec, K, N))
    return result


def _run_group(spec: SweepSpec, K: int, N: int) -> list[SweepRow]:
    eta_tr = spec.eta_tr_at(N)
    points = [
        (axis_value, eta, sched)
        for axis_value in spec.axis_values
        for eta in spec.eta_I
        for sched in spec.schedulers
    ]
    acc = {p: _PointAccumulator() for p in points}
    batch = max(1, min(spec.trials, _BATCH_BUDGET // (K * K * N)))
    start = 0
    while start < spec.trials:
        count = min(batch, spec.trials - start)
        ch, ties = _batch_trials(spec, K, N, start, count)
        gains = ch.gains
        desired = desired_gains(gains)
        cross = cross_gain_sums(gains)
        for point in points:
            axis_value, eta, sched = point
            snr = spec.snr_linear(axis_value)
            params = DosParams(
                eta_tr=eta_tr,
                eta_I=eta,
                epsilon=spec.epsilon,
                interference_includes_snr=spec.interference_includes_snr,
            )
            report = report_from_parts(desired, cross, snr, params)
            dec = decide(sched, report, ties)
            ch_at = replace(ch, snr=snr)
            rates = per_cell_rate(sinr(ch_at, dec, gains=gains))
            genie = genie_cell_rates(ch_at, dec, gains=gains)
            if spec.mode == "flat":
                rate_stat = rates.mean(axis=-1)
                genie_stat = genie.mean(axis=-1)
            else:
                rate_stat = rates[..., 0]
                genie_stat = genie[..., 0]
            a = acc[point]
            a.rate.append(rate_stat)
            a.qual.append(dec.qualifier_count.mean(axis=-1))
            a.fallback.append(dec.fallback_used.mean(axis=-1))
            a.genie.append(genie_stat)
        start += count
    rows = []
    for point in points:
        axis_value, eta, sched = point
        a = acc[point]
        rate = np.concatenate(a.rate)
        mean, se, ci = summarize(rate)
        rows.append(
            SweepRow(
                scheduler=sched,
                K=K,
                N=N,
                snr_db=axis_value if spec.mode == "flat" else None,
                tx_power_dbm=axis_value if spec.mode == "geometric" else None,
                eta_I=eta,
                eta_tr=eta_tr,
                mean_rate_per_cell=mean,
                std_error=se,
                ci95=ci,
                qualifier_mean=float(np.concatenate(a.qual).mean()),
                fallback_frac=float(np.concatenate(a.fallback).mean()),
                trials=rate.size,
                seed=spec.master_seed,
                genie_mean=float(np.concatenate(a.genie).mean()),
            )
        )
    return rows


@dataclass
class EtaTable:
    """Best interference threshold per (K, N), from one sweep's grid."""

    entries: dict[tuple[int, int], tuple[float, float]]  # (K, N) -> (eta, rate)

    def to_csv(self, path: str) -> None:
        records = [
            [K, N, eta, rate] for (K, N), (eta, rate) in sorted(self.entries.items())
        ]
        write_csv_atomic(path, ["K", "N", "optimal_eta_I", "achieved_rate"], records)


def find_optimal_eta(spec: SweepSpec) -> EtaTable:
    """Argmax of mean per-cell rate over the eta_I axis for each (K, N).

    Requires a single scheduler and a single snr or power point so the
    argmax is unambiguous; ties resolve to the smaller threshold.
    """
    if len(spec.schedulers) != 1:
        raise ValueError("eta search needs exactly one scheduler")
    if len(spec.axis_values) != 1:
        raise ValueError("eta search needs a single snr or power point")
    result = run_sweep(spec)
    entries: dict[tuple[int, int], tuple[float, float]] = {}
    for row in result.rows:
        key = (row.K, row.N)
        best = entries.get(key)
        # strict improvement keeps the smallest eta on ties; rows arrive in
        # ascending eta order within a group
        if best is None or row.mean_rate_per_cell > best[1]:
            entries[key] = (float(row.eta_I), float(row.mean_rate_per_cell))
    return EtaTable(entries=entries)


def mc_at_least_one(
    K: int,
    N: int,
    snr: float,
    params: DosParams,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Monte Carlo frequency of a cell having at least one qualified user.

    Draws raw serving and cross gains for one cell's users per trial and
    applies the same threshold logic as the scheduler path; cross-checks
    :func:`dossim.analysis.prob_at_least_one`.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hits = 0
    done = 0
    batch = max(1, _BATCH_BUDGET // (K * N))
    while done < trials:
        B = min(batch, trials - done)
        desired = rng.standard_exponential((B, 1, N))
        if K > 1:
            cross = rng.standard_exponential((B, K - 1, N)).sum(axis=1, keepdims=True)
        else:
            cross = np.zeros((B, 1, N))
        rep = report_from_parts(desired, cross, snr, params)
        hits += int((rep.passes_signal & rep.passes_interference).any(axis=-1).sum())
        done += B
    return hits / trials


@dataclass
class ScalingReport:
    """Mean rates and qualifier availability across a growing user count."""

    N: np.ndarray
    mean_rate: np.ndarray
    ci95: np.ndarray
    nonempty_freq: np.ndarray
    predicted_nonempty: np.ndarray
    fit_intercept: float
    fit_slope: float
    residuals: np.ndarray


def scaling_probe(
    K: int,
    snr_db: float,
    epsilon: float,
    N_list,
    trials: int,
    *,
    eta_I: float = 0.5,
    master_seed: int = 1,
    interference_includes_snr: bool = False,
) -> ScalingReport:
    """Probe how the random-grant scheduler's rate grows with the user count.

    Runs the two-threshold scheduler at each N with eta_tr = epsilon * ln N,
    then fits mean rate against log2(ln N) by least squares. The fraction of
    trials with a nonempty qualifier set comes from the fallback statistics
    and is compared against the closed-form prediction.
    """
    N_tuple = tuple(int(n) for n in N_list)
    spec = SweepSpec(
        mode="flat",
        schedulers=("dos",),
        K=(K,),
        N=N_tuple,
        snr_db=(snr_db,),
        eta_I=(eta_I,),
        epsilon=epsilon,
        trials=trials,
        master_seed=master_seed,
        interference_includes_snr=interference_includes_snr,
    )
    rows = {r.N: r for r in run_sweep(spec).rows}
    N_arr = np.array(N_tuple, dtype=float)
    rate = np.array([rows[n].mean_rate_per_cell for n in N_tuple])
    ci = np.array([rows[n].ci95 for n in N_tuple])
    nonempty = np.array([1.0 - rows[n].fallback_frac for n in N_tuple])
    snr = spec.snr_linear(snr_db)
    predicted = np.array(
        [
            prob_at_least_one(
                K,
                n,
                snr,
                DosParams(
                    eta_tr=eta_tr_for(n, epsilon),
                    eta_I=eta_I,
                    epsilon=epsilon,
                    interference_includes_snr=interference_includes_snr,
                ),
            )
            for n in N_tuple
        ]
    )
    x = np.log2(np.log(N_arr))
    if len(N_tuple) >= 2:
        slope, intercept = np.polyfit(x, rate, 1)
    else:
        slope, intercept = 0.0, float(rate[0])
    residuals = rate - (intercept + slope * x)
    return ScalingReport(
        N=N_arr,
        mean_rate=rate,
        ci95=ci,
        nonempty_freq=nonempty,
        predicted_nonempty=predicted,
        fit_intercept=float(intercept),
        fit_slope=float(slope),
        residuals=residuals,
    )
