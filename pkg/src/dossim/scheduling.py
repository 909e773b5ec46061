"""User selection rules for the interfering uplink cells.

The distributed two-threshold protocol ("dos") lets each user self-test its
serving-link gain against ``eta_tr`` and the interference it would generate
toward foreign base stations against ``eta_I``; the base station then grants
one passing user at random. "dos-max" keeps only the interference test and
grants the strongest passing user. MaxSNR, MinGI and a uniform-random pick
serve as baselines.

All selection functions accept batched inputs (leading axes) and break ties
deterministically at the lowest user index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, cross_gain_sums, desired_gains

SCHEDULERS = ("dos", "dos-max", "maxsnr", "mingi", "random")

__all__ = [
    "SCHEDULERS",
    "DosParams",
    "QualificationReport",
    "SchedulingDecision",
    "decide",
    "eta_tr_for",
    "qualify",
    "qualify_multicarrier",
    "report_from_parts",
    "schedule_dos",
    "schedule_dos_max",
    "schedule_maxsnr",
    "schedule_mingi",
    "schedule_random",
]


@dataclass(frozen=True)
class DosParams:
    """Thresholds of the two-threshold protocol.

    eta_tr: minimum serving-link power gain a user must see.
    eta_I: maximum generated interference a user may cause.
    epsilon: exponent in (0, 1) used when eta_tr is derived from the user
        count as epsilon * ln N.
    interference_includes_snr: when True the generated-interference metric is
        the cross-gain sum multiplied by the linear SNR (an interference-to-
        noise reading); when False the threshold applies to the raw cross-gain
        sum, which keeps one eta_I meaningful across transmit powers.
    """

    eta_tr: float
    eta_I: float
    epsilon: float = 0.5
    interference_includes_snr: bool = True

    def __post_init__(self):
        if self.eta_tr < 0:
            raise ValueError("eta_tr must be >= 0")
        if self.eta_I <= 0:
            raise ValueError("eta_I must be > 0")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


def eta_tr_for(N: int, epsilon: float, base: float = math.e) -> float:
    """Signal threshold epsilon * log(N) giving pass probability N**(-epsilon).

    Natural log by default; ``base`` is an escape hatch for other conventions.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    return epsilon * math.log(N) / math.log(base)


@dataclass
class QualificationReport:
    """Per-user threshold test results, arrays of shape (..., K, N)."""

    desired_gain: np.ndarray
    generated_interference: np.ndarray
    passes_signal: np.ndarray
    passes_interference: np.ndarray


@dataclass
class SchedulingDecision:
    """One granted user per cell.

    selected: user indices, shape (..., K).
    fallback_used: True where the scheduler's primary rule had no candidate.
    qualifier_count: size of the eligibility set the scheduler drew from
        (users passing both tests for dos, the interference test for dos-max,
        all N users for the baselines).
    """

    selected: np.ndarray
    fallback_used: np.ndarray
    qualifier_count: np.ndarray


def report_from_parts(
    desired: np.ndarray, cross_sums: np.ndarray, snr: float, params: DosParams
) -> QualificationReport:
    """Build a report from precomputed gain summaries (sweep-loop fast path)."""
    gi = cross_sums * snr if params.interference_includes_snr else cross_sums
    return QualificationReport(
        desired_gain=desired,
        generated_interference=gi,
        passes_signal=desired >= params.eta_tr,
        passes_interference=gi <= params.eta_I,
    )


def qualify(ch: ChannelRealization, params: DosParams) -> QualificationReport:
    """Evaluate both thresholds for every user of every cell."""
    g = ch.gains
    return report_from_parts(desired_gains(g), cross_gain_sums(g), ch.snr, params)


def qualify_multicarrier(
    ch: ChannelRealization, n_sub: int, params: DosParams
) -> QualificationReport:
    """Threshold test on squared vector norms over n_sub equal subcarriers.

    With identical per-subcarrier coefficients each squared norm is n_sub
    times the scalar power gain, so both metrics scale by n_sub; n_sub=1
    reduces exactly to :func:`qualify`.
    """
    if not isinstance(n_sub, (int, np.integer)) or n_sub < 1:
        raise ValueError("n_sub must be an integer >= 1")
    g = ch.gains
    return report_from_parts(
        n_sub * desired_gains(g), n_sub * cross_gain_sums(g), ch.snr, params
    )


def _masked_argmax(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    # entries outside the mask rank below any nonnegative value; first
    # occurrence wins, giving the lowest-index tie-break
    return np.where(mask, values, -1.0).argmax(axis=-1)


def schedule_dos(
    report: QualificationReport,
    rng: np.random.Generator | None = None,
    *,
    tie_break: np.ndarray | None = None,
) -> SchedulingDecision:
    """Grant a uniform-random user among those passing both thresholds.

    If a cell has no such user, fall back to the strongest user passing the
    interference test, and if none passes even that, to the minimum-generated-
    interference user. ``tie_break`` can supply the (..., K, N) uniforms
    explicitly so that sweeps reuse one draw across grid points.
    """
    both = report.passes_signal & report.passes_interference
    n_both = both.sum(axis=-1)
    n_int = report.passes_interference.sum(axis=-1)
    if tie_break is None:
        if rng is None:
            raise ValueError("schedule_dos needs rng or tie_break")
        tie_break = rng.random(both.shape)
    pick_random = _masked_argmax(tie_break, both)
    pick_strong = _masked_argmax(report.desired_gain, report.passes_interference)
    pick_quiet = report.generated_interference.argmin(axis=-1)
    selected = np.where(n_both > 0, pick_random, np.where(n_int > 0, pick_strong, pick_quiet))
    return SchedulingDecision(
        selected=selected, fallback_used=n_both == 0, qualifier_count=n_both
    )


def schedule_dos_max(report: QualificationReport) -> SchedulingDecision:
    """Grant the strongest user among those passing the interference test.

    The signal threshold is ignored. A cell where nobody passes degrades to
    the plain strongest user (the MaxSNR choice).
    """
    n_int = report.passes_interference.sum(axis=-1)
    pick = _masked_argmax(report.desired_gain, report.passes_interference)
    pick_all = report.desired_gain.argmax(axis=-1)
    selected = np.where(n_int > 0, pick, pick_all)
    return SchedulingDecision(
        selected=selected, fallback_used=n_int == 0, qualifier_count=n_int
    )


def schedule_maxsnr(ch: ChannelRealization) -> SchedulingDecision:
    """Grant the user with the largest serving-link gain in each cell."""
    desired = desired_gains(ch.gains)
    return _baseline_decision(desired.argmax(axis=-1), desired.shape)


def schedule_mingi(ch: ChannelRealization) -> SchedulingDecision:
    """Grant the user generating the least interference toward foreign BSs."""
    cross = cross_gain_sums(ch.gains)
    return _baseline_decision(cross.argmin(axis=-1), cross.shape)


def schedule_random(
    N: int,
    rng: np.random.Generator | None = None,
    *,
    cells: int = 1,
    size: tuple[int, ...] = (),
    tie_break: np.ndarray | None = None,
) -> SchedulingDecision:
    """Grant a uniform-random user per cell, independent across cells."""
    if N < 1 or cells < 1:
        raise ValueError("N and cells must be >= 1")
    if tie_break is None:
        if rng is None:
            raise ValueError("schedule_random needs rng or tie_break")
        tie_break = rng.random(size + (cells, N))
    return _baseline_decision(tie_break.argmax(axis=-1), tie_break.shape)


def _baseline_decision(selected: np.ndarray, full_shape: tuple[int, ...]) -> SchedulingDecision:
    N = full_shape[-1]
    return SchedulingDecision(
        selected=selected,
        fallback_used=np.zeros(selected.shape, dtype=bool),
        qualifier_count=np.full(selected.shape, N, dtype=np.int64),
    )


def decide(
    name: str, report: QualificationReport, tie_break: np.ndarray
) -> SchedulingDecision:
    """Run the named scheduler from one shared report and tie-break draw.

    Used by sweep loops so that every scheduler at a grid point sees the
    same channel quantities and the same uniforms.
    """
    if name == "dos":
        return schedule_dos(report, tie_break=tie_break)
    if name == "dos-max":
        return schedule_dos_max(report)
    if name == "maxsnr":
        return _baseline_decision(
            report.desired_gain.argmax(axis=-1), report.desired_gain.shape
        )
    if name == "mingi":
        return _baseline_decision(
            report.generated_interference.argmin(axis=-1),
            report.generated_interference.shape,
        )
    if name == "random":
        return _baseline_decision(tie_break.argmax(axis=-1), tie_break.shape)
    raise ValueError(f"unknown scheduler {name!r}; expected one of {SCHEDULERS}")
