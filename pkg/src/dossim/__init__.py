"""Monte Carlo simulator for uplink user scheduling across interfering cells.

Channel generation (flat or hexagonal-geometric), a family of distributed
schedulers built on two per-user thresholds, rate metrics, closed-form
qualification probabilities, and a reproducible sweep harness with CSV
output. See the README for the command-line surface.
"""

from .analysis import (
    AllFailTrend,
    ScalingCheck,
    all_fail_trend,
    chi2_cdf,
    chi2_cdf_poly_bound,
    gamma_int,
    poly_bound_coefficient,
    prob_at_least_one,
    qualification_probability,
    regularized_lower_gamma,
    scaling_condition_satisfied,
)
from .channel import (
    CellGeometry,
    ChannelRealization,
    draw_flat,
    draw_geometric,
    hex_cluster,
    place_users_uniform,
    uniform_beta,
)
from .config import ConfigError, ScenarioConfig, parse_scenario
from .harness import (
    EtaTable,
    ScalingReport,
    SweepResult,
    SweepRow,
    SweepSpec,
    find_optimal_eta,
    mc_at_least_one,
    read_sweep_csv,
    run_sweep,
    scaling_probe,
    trial_rng,
)
from .metrics import (
    CellMetrics,
    cell_metrics,
    genie_rate,
    per_cell_rate,
    sinr,
    sum_rate_lower_bound,
)
from .scheduling import (
    SCHEDULERS,
    DosParams,
    QualificationReport,
    SchedulingDecision,
    eta_tr_for,
    qualify,
    qualify_multicarrier,
    schedule_dos,
    schedule_dos_max,
    schedule_maxsnr,
    schedule_mingi,
    schedule_random,
)

__version__ = "0.1.0"
