"""Smoke tests for the python binding: every major operation round-trips."""

import math

import pytest

import inkmetrics as ink


def raw_steps(session):
    return ink.session_steps(session, ink.SimplifyMethod.raw, 10.0)


def test_parse_and_serialize_session():
    csv = (
        "session_id,stroke_id,colour_id,t_ms,x_px,y_px\n"
        "s1,0,0,0,10,20\n"
        "s1,0,0,50,30,40\n"
    )
    sidecar = '{"session_id":"s1","screen_w":800,"screen_h":600,"labels":{"dataset":"py"}}'
    session = ink.parse_session(csv, ink.SessionFormat.csv, sidecar)
    assert session.session_id == "s1"
    assert session.total_points() == 2
    assert session.labels["dataset"] == "py"
    assert ink.serialize_session_csv(session) == csv

    with pytest.raises(ValueError):
        ink.parse_session(csv.replace(",0,0,50,", ",0,12,50,"), ink.SessionFormat.csv, sidecar)


def test_metrics_on_synthetic_walks():
    levy = ink.gen_levy(2.0, 5000, 7)
    fit = ink.fit_mu_mle(raw_steps(levy))
    assert fit.family == ink.StepFamily.power
    assert 1.9 < fit.mu < 2.1

    assert ink.drawing_distance(levy) > 0
    assert 0.0 <= ink.convex_hull_coverage(levy) <= 100.0

    bits = ink.gen_fgn_binary(0.8, 1024, 3)
    h = ink.hurst_estimators(bits)
    assert 0.0 <= h.h_dfa <= 2.0
    g = ink.gini_binary(bits)
    mean = sum(bits.bits) / len(bits.bits)
    assert abs(g + mean - 1.0) < 1e-12


def test_mann_whitney_exact():
    t = ink.mann_whitney([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    assert t.statistic == "W"
    assert t.value == 0.0
    assert abs(t.p_value - 0.1) < 1e-12


def test_varimax_pca_surface():
    rows = []
    import random

    rng = random.Random(5)
    for _ in range(40):
        x = rng.gauss(0, 1)
        y = rng.gauss(0, 1)
        rows.append([x, 2 * x, y, -3 * y])
    matrix = ink.MetricMatrix(
        row_ids=[f"r{i}" for i in range(40)],
        col_names=["x1", "x2", "y1", "y2"],
        values=rows,
    )
    opts = ink.PcaOptions()
    opts.k = 2
    model = ink.pca_varimax(matrix, opts)
    assignment = ink.assign_dimensions(model)
    assert assignment["x1"] == assignment["x2"]
    assert assignment["y1"] == assignment["y2"]
    assert assignment["x1"] != assignment["y1"]
    assert abs(sum(model.explained) - 2.0 / 4.0 * 2.0) < 0.05  # two unit blocks of two


def test_full_pipeline_and_bundle():
    sessions = ink.gen_corpus(12, 11)
    cfg = ink.PipelineConfig()
    cfg.group_by = "style"
    mc = ink.compute_metrics(sessions, cfg)
    assert len(mc.matrix.row_ids) == 12
    assert mc.matrix.col_names == ink.metric_columns()

    res = ink.run_analysis(mc.matrix, cfg)
    names = [name for name, _ in res.bundle.files]
    for expected in ("metrics.csv", "loadings_step5.csv", "assignments.json",
                     "fig_correlation.svg"):
        assert expected in names
    assert res.refit.k == 3
    assert math.isfinite(sum(res.refit.explained))

    again = ink.run_analysis(mc.matrix, cfg)
    assert res.bundle.files == again.bundle.files
