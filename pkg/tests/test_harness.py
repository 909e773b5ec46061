"""Sweep engine: grid handling, reproducibility, aggregation, CSV artifacts."""

import dataclasses
import math

import numpy as np
import pytest

from dossim import (
    DosParams,
    EtaTable,
    SweepSpec,
    cell_metrics,
    find_optimal_eta,
    mc_at_least_one,
    prob_at_least_one,
    read_sweep_csv,
    run_sweep,
    scaling_probe,
    trial_rng,
)
from dossim.harness import _draw_trial, summarize, write_csv_atomic
from dossim.scheduling import decide, qualify


def small_flat_spec(**overrides):
    base = dict(
        mode="flat",
        schedulers=("dos", "maxsnr"),
        K=(2,),
        N=(5,),
        snr_db=(0.0, 10.0),
        eta_I=(0.5, 2.0),
        eta_tr=0.3,
        trials=6,
        master_seed=3,
        interference_includes_snr=False,
    )
    base.update(overrides)
    return SweepSpec(**base)


# --- spec validation --------------------------------------------------------


def test_spec_rejects_inconsistent_axes():
    with pytest.raises(ValueError):
        run_sweep(small_flat_spec(snr_db=None))
    with pytest.raises(ValueError):
        run_sweep(small_flat_spec(tx_power_dbm=(0.0,)))
    with pytest.raises(ValueError):
        run_sweep(
            small_flat_spec(mode="geometric", tx_power_dbm=None, snr_db=(0.0,))
        )
    with pytest.raises(ValueError):
        run_sweep(small_flat_spec(mode="sector"))


def test_spec_rejects_bad_values():
    for bad in (
        dict(schedulers=()),
        dict(schedulers=("argmax",)),
        dict(K=(0,)),
        dict(N=()),
        dict(eta_I=(0.0,)),
        dict(trials=0),
        dict(beta_cross=0.0),
        dict(epsilon=1.0),
        dict(eta_tr=-1.0),
        dict(snr_db=()),
    ):
        with pytest.raises(ValueError):
            run_sweep(small_flat_spec(**bad))
    with pytest.raises(ValueError):
        run_sweep(
            small_flat_spec(
                mode="geometric", snr_db=None, tx_power_dbm=(0.0,), K=(8,)
            )
        )


def test_spec_snr_conversion():
    flat = small_flat_spec()
    assert flat.snr_linear(20.0) == pytest.approx(100.0)
    geo = small_flat_spec(mode="geometric", snr_db=None, tx_power_dbm=(-104.0,))
    assert geo.snr_linear(-104.0) == pytest.approx(1.0)
    assert geo.snr_linear(-74.0) == pytest.approx(1000.0)


def test_spec_signal_threshold_rule():
    assert small_flat_spec().eta_tr_at(100) == 0.3
    derived = small_flat_spec(eta_tr=None)
    assert derived.eta_tr_at(100) == pytest.approx(0.5 * math.log(100.0))


# --- aggregation helpers ----------------------------------------------------


def test_summarize_hand_values():
    mean, se, ci = summarize(np.array([1.0, 2.0, 3.0, 4.0]))
    assert mean == 2.5
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)
    assert ci == pytest.approx(1.96 * se)
    assert summarize(np.array([7.0])) == (7.0, 0.0, 0.0)


def test_csv_round_trip(tmp_path):
    path = tmp_path / "table.csv"
    write_csv_atomic(
        str(path), ["name", "value"], [["a", 1], ["b", 0.123456789012345]]
    )
    text = path.read_text()
    assert text.splitlines()[0] == "name,value"
    assert "0.123456789" in text  # ten significant digits
    rows = list(__import__("csv").DictReader(path.open()))
    assert rows[0]["name"] == "a" and rows[1]["value"].startswith("0.12345678")


def test_trial_rng_is_keyed_by_coordinates():
    a = trial_rng(1, "flat", 3, 50, 0).random(4)
    b = trial_rng(1, "flat", 3, 50, 0).random(4)
    np.testing.assert_array_equal(a, b)
    c = trial_rng(1, "flat", 3, 50, 1).random(4)
    d = trial_rng(2, "flat", 3, 50, 0).random(4)
    e = trial_rng(1, "geometric", 3, 50, 0).random(4)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    assert not np.array_equal(a, e)


# --- sweep runs -------------------------------------------------------------


def test_run_sweep_grid_shape_and_order():
    res = run_sweep(small_flat_spec())
    assert len(res.rows) == 2 * 2 * 2  # snr x eta x scheduler
    coords = [(r.snr_db, r.eta_I, r.scheduler) for r in res.rows]
    assert coords == [
        (s, e, sc)
        for s in (0.0, 10.0)
        for e in (0.5, 2.0)
        for sc in ("dos", "maxsnr")
    ]
    for r in res.rows:
        assert r.tx_power_dbm is None
        assert r.trials == 6 and r.seed == 3 and r.eta_tr == 0.3


def test_run_sweep_is_deterministic():
    a = run_sweep(small_flat_spec())
    b = run_sweep(small_flat_spec())
    assert a.rows == b.rows


def test_subset_of_grid_reproduces_full_run():
    full = run_sweep(small_flat_spec())
    sub = run_sweep(
        small_flat_spec(schedulers=("maxsnr",), snr_db=(10.0,), eta_I=(2.0,))
    )
    (match,) = [
        r
        for r in full.rows
        if (r.scheduler, r.snr_db, r.eta_I) == ("maxsnr", 10.0, 2.0)
    ]
    assert sub.rows == [match]


def test_flat_rows_match_direct_recomputation():
    spec = small_flat_spec(schedulers=("maxsnr",), snr_db=(10.0,), eta_I=(0.5,))
    row = run_sweep(spec).rows[0]
    stats = []
    for t in range(spec.trials):
        ch, ties = _draw_trial(spec, 2, 5, t)
        ch = dataclasses.replace(ch, snr=10.0)
        params = DosParams(
            eta_tr=0.3, eta_I=0.5, interference_includes_snr=False
        )
        dec = decide("maxsnr", qualify(ch, params), ties)
        stats.append(cell_metrics(ch, dec).rate.mean())
    mean, se, ci = summarize(np.array(stats))
    assert row.mean_rate_per_cell == pytest.approx(mean, rel=1e-12)
    assert row.ci95 == pytest.approx(ci, rel=1e-9)
    assert row.qualifier_mean == 5.0 and row.fallback_frac == 0.0


def test_geometric_rows_report_center_cell():
    spec = SweepSpec(
        mode="geometric",
        schedulers=("dos-max",),
        K=(3,),
        N=(4,),
        snr_db=None,
        tx_power_dbm=(-20.0,),
        eta_I=(5.0,),
        eta_tr=0.0,
        trials=5,
        master_seed=9,
    )
    row = run_sweep(spec).rows[0]
    assert row.snr_db is None and row.tx_power_dbm == -20.0
    snr = spec.snr_linear(-20.0)
    stats = []
    for t in range(5):
        ch, ties = _draw_trial(spec, 3, 4, t)
        ch = dataclasses.replace(ch, snr=snr)
        params = DosParams(eta_tr=0.0, eta_I=5.0)
        dec = decide("dos-max", qualify(ch, params), ties)
        stats.append(cell_metrics(ch, dec).rate[0])  # center cell only
    assert row.mean_rate_per_cell == pytest.approx(np.mean(stats), rel=1e-12)


def test_batching_does_not_change_results(monkeypatch):
    import dossim.harness as harness

    before = run_sweep(small_flat_spec(trials=11))
    monkeypatch.setattr(harness, "_BATCH_BUDGET", 1)  # forces one-trial batches
    after = run_sweep(small_flat_spec(trials=11))
    assert before.rows == after.rows


def test_interference_free_ceiling_dominates_mean_rate():
    for spec in (
        small_flat_spec(),
        SweepSpec(
            mode="geometric",
            schedulers=("dos", "mingi"),
            K=(3,),
            N=(6,),
            snr_db=None,
            tx_power_dbm=(-30.0, -10.0),
            eta_I=(10.0,),
            trials=5,
        ),
    ):
        for row in run_sweep(spec).rows:
            assert row.genie_mean >= row.mean_rate_per_cell - 1e-12


def test_baseline_rows_never_fall_back():
    res = run_sweep(small_flat_spec(schedulers=("maxsnr", "mingi", "random")))
    for row in res.rows:
        assert row.fallback_frac == 0.0
        assert row.qualifier_mean == row.N


def test_sweep_csv_artifact(tmp_path):
    spec = small_flat_spec()
    res = run_sweep(spec)
    path = tmp_path / "out.csv"
    res.to_csv(str(path))
    first = path.read_bytes()
    assert first.startswith(
        b"scheduler,K,N,snr_db,eta_I,eta_tr,mean_rate_per_cell,ci95,"
        b"qualifier_mean,fallback_frac,trials,seed"
    )
    res.to_csv(str(path))
    assert path.read_bytes() == first  # rewrites are byte-identical
    back = read_sweep_csv(str(path))
    assert len(back) == len(res.rows)
    for rec, row in zip(back, res.rows):
        assert rec["scheduler"] == row.scheduler
        assert rec["K"] == row.K and isinstance(rec["K"], int)
        assert rec["mean_rate_per_cell"] == pytest.approx(
            row.mean_rate_per_cell, rel=1e-9
        )
    geo = run_sweep(
        SweepSpec(
            mode="geometric",
            schedulers=("random",),
            K=(2,),
            N=(3,),
            snr_db=None,
            tx_power_dbm=(-15.0,),
            eta_I=(1.0,),
            trials=2,
        )
    )
    geo_path = tmp_path / "geo.csv"
    geo.to_csv(str(geo_path))
    assert geo_path.read_text().splitlines()[0].split(",")[3] == "tx_power_dbm"


# --- threshold search -------------------------------------------------------


def test_find_optimal_eta_requires_point_spec():
    with pytest.raises(ValueError):
        find_optimal_eta(small_flat_spec(schedulers=("dos", "maxsnr")))
    with pytest.raises(ValueError):
        find_optimal_eta(small_flat_spec(schedulers=("dos",), snr_db=(0.0, 10.0)))


def test_find_optimal_eta_picks_argmax_and_breaks_ties_low():
    # both thresholds are far above any interference, so the rates tie
    # exactly and the smaller threshold must win
    spec = small_flat_spec(
        schedulers=("dos-max",), snr_db=(10.0,), eta_I=(1e6, 2e6), trials=8
    )
    table = find_optimal_eta(spec)
    assert set(table.entries) == {(2, 5)}
    eta, rate = table.entries[(2, 5)]
    assert eta == 1e6 and rate > 0


def test_find_optimal_eta_matches_sweep_rows():
    spec = small_flat_spec(schedulers=("dos",), snr_db=(10.0,), eta_I=(0.2, 0.5, 2.0))
    rows = run_sweep(spec).rows
    best = max(rows, key=lambda r: r.mean_rate_per_cell)
    table = find_optimal_eta(spec)
    eta, rate = table.entries[(2, 5)]
    assert eta == best.eta_I and rate == pytest.approx(best.mean_rate_per_cell)


def test_eta_table_csv(tmp_path):
    table = EtaTable(entries={(3, 100): (0.5, 3.25), (2, 50): (1.0, 2.0)})
    path = tmp_path / "eta.csv"
    table.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "K,N,optimal_eta_I,achieved_rate"
    assert lines[1] == "2,50,1,2"  # sorted by (K, N)
    assert lines[2] == "3,100,0.5,3.25"


# --- probability probes -----------------------------------------------------


def test_mc_at_least_one_agrees_with_closed_form():
    params = DosParams(eta_tr=1.0, eta_I=2.0, interference_includes_snr=True)
    p = prob_at_least_one(3, 20, 4.0, params)
    freq = mc_at_least_one(3, 20, 4.0, params, 20_000, np.random.default_rng(0))
    sigma = math.sqrt(p * (1.0 - p) / 20_000)
    assert abs(freq - p) < 4.0 * sigma
    with pytest.raises(ValueError):
        mc_at_least_one(3, 20, 4.0, params, 0, np.random.default_rng(0))


def test_mc_at_least_one_single_cell_always_qualifies():
    params = DosParams(eta_tr=0.0, eta_I=1.0)
    assert mc_at_least_one(1, 5, 1.0, params, 500, np.random.default_rng(1)) == 1.0


def test_scaling_probe_shapes_and_fit():
    rep = scaling_probe(2, 10.0, 0.5, [50, 100, 200], trials=60, master_seed=4)
    assert rep.N.tolist() == [50.0, 100.0, 200.0]
    assert rep.mean_rate.shape == (3,)
    x = np.log2(np.log(rep.N))
    np.testing.assert_allclose(
        rep.residuals, rep.mean_rate - (rep.fit_intercept + rep.fit_slope * x)
    )
    assert np.all((rep.nonempty_freq >= 0) & (rep.nonempty_freq <= 1))
    single = scaling_probe(2, 10.0, 0.5, [100], trials=30)
    assert single.fit_slope == 0.0
    assert single.fit_intercept == pytest.approx(single.mean_rate[0])
