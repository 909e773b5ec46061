"""Block-fading channel generation for K interfering uplink cells.

Two generation modes are supported:

* flat: every link has a fixed amplitude scale ``beta`` in (0, 1] (serving
  links pinned to 1) and unit-mean exponential small-scale power gains.
* geometric: base stations sit on a hexagonal cluster, users are placed
  uniformly inside their hexagon, and large-scale gains follow a power-law
  path loss with log-normal shadowing.

Gain tensors are indexed ``[..., i, k, u]``: receiving base station ``i``,
home cell ``k`` of the transmitting user, user index ``u`` within that cell.
Leading axes batch independent trials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

D0_M = 1.0  # reference distance with unit large-scale gain, meters

__all__ = [
    "D0_M",
    "CellGeometry",
    "ChannelRealization",
    "cross_gain_sums",
    "desired_gains",
    "draw_flat",
    "draw_geometric",
    "hex_cluster",
    "in_hexagon",
    "link_distances",
    "place_users_uniform",
    "uniform_beta",
    "validate_beta",
]


# ---------------------------------------------------------------------------
# geometry

@dataclass(frozen=True)
class CellGeometry:
    """Positions of base stations and users on the plane.

    bs_positions: (K, 2) array, meters.
    user_positions: (K, N, 2) array, meters; N may be 0 for a template.
    cell_radius: center-to-vertex distance of each hexagonal cell, meters.
    """

    bs_positions: np.ndarray
    user_positions: np.ndarray
    cell_radius: float

    @property
    def K(self) -> int:
        return self.bs_positions.shape[0]

    @property
    def N(self) -> int:
        return self.user_positions.shape[1]


# unit normals of the three hexagon edge directions (vertex on the +x axis)
_HEX_NORMALS = np.array(
    [
        [math.cos(math.radians(30 + 60 * j)), math.sin(math.radians(30 + 60 * j))]
        for j in range(3)
    ]
)


def in_hexagon(points: np.ndarray, center, cell_radius: float) -> np.ndarray:
    """Boolean mask of points inside the hexagon (center-to-vertex radius).

    points: (..., 2) array of coordinates.
    """
    rel = np.asarray(points, float) - np.asarray(center, float)
    # a regular hexagon is the intersection of three slabs of half-width
    # apothem = sqrt(3)/2 * radius
    proj = rel @ _HEX_NORMALS.T
    apothem = 0.5 * math.sqrt(3.0) * cell_radius
    return np.all(np.abs(proj) <= apothem, axis=-1)


def hex_cluster(cell_radius: float, K: int = 7) -> CellGeometry:
    """Hexagonal cluster of K cells: one center cell plus up to 6 neighbors.

    Cell 0 is the center; neighbors sit at distance sqrt(3) * cell_radius in
    the edge-normal directions. Returns a geometry template with no users.
    """
    if not 1 <= K <= 7:
        raise ValueError("hex_cluster supports 1 to 7 cells")
    if cell_radius <= 0:
        raise ValueError("cell_radius must be positive")
    centers = [np.zeros(2)]
    spacing = math.sqrt(3.0) * cell_radius
    for j in range(K - 1):
        ang = math.radians(30 + 60 * j)
        centers.append(spacing * np.array([math.cos(ang), math.sin(ang)]))
    return CellGeometry(
        bs_positions=np.array(centers),
        user_positions=np.zeros((K, 0, 2)),
        cell_radius=float(cell_radius),
    )


def place_users_uniform(geom: CellGeometry, N: int, rng: np.random.Generator) -> CellGeometry:
    """Place N users uniformly inside each cell's hexagon.

    Rejection sampling from the bounding square; deterministic for a fixed
    generator state. Returns a new CellGeometry with filled user positions.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    R = geom.cell_radius
    out = np.empty((geom.K, N, 2))
    for k, center in enumerate(geom.bs_positions):
        placed = 0
        while placed < N:
            # acceptance rate is ~0.65, so oversample modestly
            want = max(8, int(1.7 * (N - placed)))
            cand = center + rng.uniform(-R, R, size=(want, 2))
            cand = cand[in_hexagon(cand, center, R)]
            take = min(N - placed, len(cand))
            out[k, placed : placed + take] = cand[:take]
            placed += take
    return CellGeometry(geom.bs_positions, out, R)


def link_distances(geom: CellGeometry) -> np.ndarray:
    """Distances d[i, k, u] from user u of cell k to base station i, meters.

    Floored at the reference distance D0_M so the path gain stays bounded.
    """
    diff = geom.user_positions[None, :, :, :] - geom.bs_positions[:, None, None, :]
    d = np.hypot(diff[..., 0], diff[..., 1])
    return np.maximum(d, D0_M)


# ---------------------------------------------------------------------------
# channel realizations

@dataclass
class ChannelRealization:
    """One block realization of all uplink gains.

    small: |h|^2 power gains, shape (..., K, K, N), unit-mean exponential.
    large: amplitude scale factors beta in (0, 1], shape (K, K) shared by all
        users of a cell (flat mode) or (..., K, K, N) per link (geometric).
    snr: transmit power over receiver noise power, linear scale. Effective
        received SNR of a link is beta^2 * |h|^2 * snr.
    """

    small: np.ndarray
    large: np.ndarray
    snr: float = 1.0

    @property
    def K(self) -> int:
        return self.small.shape[-2]

    @property
    def N(self) -> int:
        return self.small.shape[-1]

    @cached_property
    def gains(self) -> np.ndarray:
        """Effective power gains beta^2 * |h|^2, shape (..., K, K, N)."""
        beta = np.asarray(self.large, float)
        if beta.ndim == 2:
            if np.all(beta == 1.0):
                return self.small
            beta = beta[..., None]
        return beta**2 * self.small


def desired_gains(gains: np.ndarray) -> np.ndarray:
    """Serving-link power gain of every user, shape (..., K, N).

    Entry [..., k, u] is the gain from user u of cell k to its own BS k.
    """
    return np.moveaxis(np.diagonal(gains, axis1=-3, axis2=-2), -1, -2)


def cross_gain_sums(gains: np.ndarray) -> np.ndarray:
    """Sum of each user's power gains toward all foreign BSs, shape (..., K, N)."""
    return gains.sum(axis=-3) - desired_gains(gains)


def validate_beta(beta: np.ndarray, K: int) -> np.ndarray:
    """Check a (K, K) amplitude matrix: entries in (0, 1], unit diagonal."""
    beta = np.asarray(beta, float)
    if beta.shape != (K, K):
        raise ValueError(f"beta must have shape ({K}, {K}), got {beta.shape}")
    if np.any(beta <= 0) or np.any(beta > 1):
        raise ValueError("beta entries must lie in (0, 1]")
    if not np.allclose(np.diagonal(beta), 1.0, rtol=0, atol=0):
        raise ValueError("serving-link beta (diagonal) must equal 1")
    return beta


def uniform_beta(K: int, cross: float = 1.0) -> np.ndarray:
    """Amplitude matrix with unit diagonal and a common off-diagonal value."""
    if not 0 < cross <= 1:
        raise ValueError("cross coupling must lie in (0, 1]")
    beta = np.full((K, K), float(cross))
    np.fill_diagonal(beta, 1.0)
    return beta


def draw_flat(
    K: int,
    N: int,
    beta: np.ndarray | None,
    rng: np.random.Generator,
    *,
    snr: float = 1.0,
    size: int | tuple[int, ...] | None = None,
) -> ChannelRealization:
    """Draw one flat-mode block realization (or a batch, via ``size``).

    All |h|^2 entries are i.i.d. unit-mean exponential. ``beta=None`` means
    full coupling (all amplitudes 1).
    """
    if K < 1 or N < 1:
        raise ValueError("K and N must be >= 1")
    beta = uniform_beta(K) if beta is None else validate_beta(beta, K)
    shape = _batch_shape(size) + (K, K, N)
    small = rng.standard_exponential(shape)
    return ChannelRealization(small=small, large=beta, snr=snr)


def draw_geometric(
    geom: CellGeometry,
    pl_exponent: float,
    shadow_std_db: float,
    rng: np.random.Generator,
    *,
    snr: float = 1.0,
    size: int | tuple[int, ...] | None = None,
) -> ChannelRealization:
    """Draw a geometric-mode block realization for a fixed user placement.

    Large-scale power gain of a link is (d / D0_M) ** (-pl_exponent) scaled
    by a log-normal shadowing factor 10 ** (S / 10), S ~ Normal(0, std^2),
    independent per (BS, user) link, capped at 1 so amplitudes stay in (0, 1].
    Shadowing values are drawn before small-scale gains; the draw order is
    part of the reproducibility contract.
    """
    if pl_exponent <= 2:
        raise ValueError("pl_exponent must exceed 2")
    if shadow_std_db < 0:
        raise ValueError("shadow_std_db must be >= 0")
    if geom.N < 1:
        raise ValueError("geometry has no users; call place_users_uniform first")
    d = link_distances(geom)
    pl = (d / D0_M) ** (-pl_exponent)
    shape = _batch_shape(size) + (geom.K, geom.K, geom.N)
    shadow_db = rng.normal(0.0, shadow_std_db, size=shape)
    power_gain = np.minimum(pl * 10.0 ** (shadow_db / 10.0), 1.0)
    small = rng.standard_exponential(shape)
    return ChannelRealization(small=small, large=np.sqrt(power_gain), snr=snr)


def _batch_shape(size: int | tuple[int, ...] | None) -> tuple[int, ...]:
    if size is None:
        return ()
    if isinstance(size, int):
        return (size,)
    return tuple(size)
