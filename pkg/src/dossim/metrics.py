"""Rate and SINR computation for a realization plus a scheduling decision.

Inter-cell interference is treated as Gaussian noise, so the achieved rate
of a cell is log2(1 + SINR) of its granted user. All functions accept
batched inputs with leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization
from .scheduling import DosParams, SchedulingDecision

_LN2 = np.log(2.0)

__all__ = [
    "CellMetrics",
    "cell_metrics",
    "genie_cell_rates",
    "genie_rate",
    "per_cell_rate",
    "selected_gain_matrix",
    "sinr",
    "sum_rate_lower_bound",
]


@dataclass
class CellMetrics:
    """Per-cell SINR and rate plus their sum, shapes (..., K) and (...)."""

    sinr: np.ndarray
    rate: np.ndarray
    sum_rate: np.ndarray


def selected_gain_matrix(
    ch: ChannelRealization,
    decision: SchedulingDecision,
    *,
    gains: np.ndarray | None = None,
) -> np.ndarray:
    """Gain matrix G[..., i, k] of cell k's granted user toward BS i.

    ``gains`` may pass a precomputed ``ch.gains`` tensor so sweep loops do
    not recompute it per grid point.
    """
    g = ch.gains if gains is None else gains
    idx = decision.selected[..., None, :, None]
    idx = np.broadcast_to(idx, g.shape[:-1] + (1,))
    return np.take_along_axis(g, idx, axis=-1)[..., 0]


def sinr(
    ch: ChannelRealization,
    decision: SchedulingDecision,
    cell: int | None = None,
    *,
    gains: np.ndarray | None = None,
) -> np.ndarray:
    """Linear SINR at each BS (or one ``cell``) under the given grants.

    Signal is the granted user's serving gain times SNR; interference is the
    foreign granted users' cross gains times SNR on top of unit noise.
    """
    G = selected_gain_matrix(ch, decision, gains=gains)
    sig = np.diagonal(G, axis1=-2, axis2=-1)
    interf = G.sum(axis=-1) - sig
    out = sig * ch.snr / (1.0 + ch.snr * interf)
    return out if cell is None else out[..., cell]


def per_cell_rate(sinr_value) -> np.ndarray:
    """Achieved rate log2(1 + sinr), bits per channel use."""
    return np.log1p(sinr_value) / _LN2


def cell_metrics(
    ch: ChannelRealization,
    decision: SchedulingDecision,
    *,
    gains: np.ndarray | None = None,
) -> CellMetrics:
    s = sinr(ch, decision, gains=gains)
    r = per_cell_rate(s)
    return CellMetrics(sinr=s, rate=r, sum_rate=r.sum(axis=-1))


def sum_rate_lower_bound(params: DosParams, K: int, snr: float) -> float:
    """Guaranteed sum rate when every granted user passed both thresholds.

    With each granted user's serving gain at least eta_tr and each one's
    generated interference capped at eta_I, every cell's SINR is at least
    eta_tr * snr / (1 + K * eta_I), giving K * log2(1 + that) in total.
    Assumes the SNR-scaled interference metric.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    return K * float(np.log1p(params.eta_tr * snr / (1.0 + K * params.eta_I)) / _LN2)


def genie_cell_rates(
    ch: ChannelRealization,
    decision: SchedulingDecision,
    *,
    gains: np.ndarray | None = None,
) -> np.ndarray:
    """Per-cell rates with all inter-cell interference removed, shape (..., K)."""
    G = selected_gain_matrix(ch, decision, gains=gains)
    sig = np.diagonal(G, axis1=-2, axis2=-1)
    return per_cell_rate(sig * ch.snr)


def genie_rate(
    ch: ChannelRealization,
    decision: SchedulingDecision,
    *,
    gains: np.ndarray | None = None,
) -> np.ndarray:
    """Sum over cells of the interference-free rates; upper-bounds sum_rate."""
    return genie_cell_rates(ch, decision, gains=gains).sum(axis=-1)
