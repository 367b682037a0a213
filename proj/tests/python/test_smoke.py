import math

import pytest

import adclick


def make_session(query, n, clicks, sid="s"):
    s = adclick.Session()
    s.session_id = sid
    s.query = query
    s.ads = [f"a{j}" for j in range(1, n + 1)]
    s.clicks = list(clicks)
    return s


def test_perseverance_estimate_matches_hand_value():
    sessions = [
        make_session("q", 4, [1], "s1"),
        make_session("q", 4, [2], "s2"),
        make_session("q", 4, [3], "s3"),
        make_session("q", 4, [1, 2], "s4"),
    ]
    stats = adclick.accumulate_stats(sessions, n_max=4)
    assert stats.sessions == 4
    eta = adclick.estimate_perseverance(stats, adclick.PerseverancePrior.uniform(4, 2.0))
    assert eta.eta[1] == pytest.approx(4.0 / 6.0, abs=1e-12)


def single_position_params():
    p = adclick.ModelParams()
    p.n_max = 1
    eta = adclick.PerseveranceParams()
    eta.eta = [0.2, 0.5]
    p.perseverance = eta
    p.transition = adclick.TransitionMatrix.uniform_rows(1)
    theta = adclick.AttractivenessTable()
    theta.fallback = 1.0
    p.attractiveness = theta
    return p


def test_sequence_probability_fixture():
    p = single_position_params()
    s = make_session("q", 1, [1])
    assert adclick.sequence_probability(p, s) == pytest.approx(0.6, abs=1e-12)
    empty = make_session("q", 1, [])
    assert adclick.sequence_probability(p, empty) == pytest.approx(0.2, abs=1e-12)


def test_enumeration_sums_to_one():
    scenario = adclick.scenario_preset("mixed-traffic", 7)
    truth = scenario.ground_truth()
    q = scenario.queries[0]
    ads = [d.ad_id for d in q.slate]
    seqs = adclick.enumerate_sequences(truth, q.query, ads)
    assert len(seqs) == 65
    assert sum(sp.prob for sp in seqs) == pytest.approx(1.0, abs=1e-9)


def test_prediction_follows_dominant_transition():
    p = adclick.ModelParams()
    p.n_max = 2
    eta = adclick.PerseveranceParams()
    eta.eta = [0.2, 0.5, 0.9]
    p.perseverance = eta
    t = adclick.TransitionMatrix.zeros(2)
    t.set(0, 1, 0.9)
    t.set(0, 2, 0.1)
    t.set(1, 1, 0.5)
    t.set(1, 2, 0.5)
    t.set(2, 1, 0.5)
    t.set(2, 2, 0.5)
    p.transition = t
    theta = adclick.AttractivenessTable()
    theta.fallback = 0.5
    p.attractiveness = theta
    s = make_session("q", 2, [])
    assert adclick.predict_sequence(p, s, 1) == [1]


def test_perplexity_closed_form():
    assert adclick.session_perplexity([0.5, 0.5], [True, False]) == 2.0


def test_sampler_is_reproducible():
    scenario = adclick.scenario_preset("single-decile", 3)
    truth = scenario.ground_truth()
    q = scenario.queries[0]
    ads = [d.ad_id for d in q.slate]
    a = adclick.RngStream(11, "smoke")
    b = adclick.RngStream(11, "smoke")
    clicks_a = [adclick.sample_session(truth, q.query, ads, a).session.clicks for _ in range(50)]
    clicks_b = [adclick.sample_session(truth, q.query, ads, b).session.clicks for _ in range(50)]
    assert clicks_a == clicks_b


def test_params_round_trip(tmp_path):
    scenario = adclick.scenario_preset("reverse-heavy", 5)
    truth = scenario.ground_truth()
    path = str(tmp_path / "model.params")
    adclick.save_model_params(truth, path)
    loaded = adclick.load_model_params(path)
    assert loaded.n_max == truth.n_max
    assert loaded.perseverance.eta == truth.perseverance.eta
    assert adclick.peek_model_tag(path) == "ours"


def test_evaluation_report_shape():
    scenario = adclick.scenario_preset("single-decile", 9)
    sessions = adclick.sample_week(scenario, "test")[:500]
    table = adclick.QueryFrequencyTable.build(sessions)
    model = adclick.PmPredictor(adclick.PmParams.standard(4))
    report = adclick.evaluate_model(model, sessions, table)
    assert len(report.rows) == 80
    assert report.csv().splitlines()[0] == "model,decile,metric,k,value,stddev,count"
