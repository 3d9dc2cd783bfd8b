import json

import pytest

from mwtree.fuzz import MIXED_CYCLE, FuzzConfig, fuzz, replay, trial_instance
from mwtree.tree import degree_profile
from mwtree.verify import IDENTITIES


def test_reports_are_byte_identical():
    cfg = FuzzConfig(trials=8, n_range=(3, 7), s_range=(1, 2), seed=7)
    assert fuzz(cfg).to_json() == fuzz(cfg).to_json()


def test_different_seeds_differ():
    a = FuzzConfig(trials=4, seed=1)
    b = FuzzConfig(trials=4, seed=2)
    assert fuzz(a).to_json() != fuzz(b).to_json()


def test_trial_is_reproducible_alone():
    cfg = FuzzConfig(trials=20, seed=3)
    t_full, _ = trial_instance(cfg, 13)
    t_replayed, reports = replay(3, 13)
    assert t_full == t_replayed
    assert [r.identity for r in reports] == list(IDENTITIES)


def test_mixed_topology_cycles_degree_profiles():
    cfg = FuzzConfig(trials=12, n_range=(5, 10), seed=4)
    for i in range(12):
        t, topology = trial_instance(cfg, i)
        assert topology == MIXED_CYCLE[i % 4]
        k = len(degree_profile(t).deg2_vertices)
        if topology == "no-deg2":
            assert k == 0
        elif topology == "one-deg2":
            assert k == 1
        elif topology == "two-plus-deg2":
            assert k >= 2


def test_diagonal_campaign_passes():
    report = fuzz(FuzzConfig(trials=40, seed=11))
    assert report.ok
    assert sum(st.passed for st in report.identities.values()) > 0
    assert report.det_agreement["nonsingular_trials"] + report.det_agreement["singular_trials"] == 40


def test_general_campaign_reports_without_asserting():
    report = fuzz(FuzzConfig(trials=16, s_range=(2, 3), weight_mode="general", seed=5))
    assert report.ok
    assert report.failures and not report.asserted_failures
    doc = json.loads(report.to_json())
    assert set(doc["identities"]) == set(IDENTITIES)


def test_nonsingular_beta_option():
    cfg = FuzzConfig(trials=10, seed=6, topology="no-deg2", n_range=(4, 9), nonsingular_beta=True)
    report = fuzz(cfg)
    assert report.inverse_agreement["trials"] == 10


@pytest.mark.parametrize("kw", [
    {"trials": 0},
    {"trials": 1, "n_range": (5, 3)},
    {"trials": 1, "n_range": (1, 3)},
    {"trials": 1, "s_range": (0, 2)},
    {"trials": 1, "weight_mode": "sparse"},
    {"trials": 1, "topology": "caterpillar"},
    {"trials": 1, "topology": "no-deg2", "n_range": (3, 3)},
])
def test_bad_configs(kw):
    with pytest.raises(ValueError):
        FuzzConfig(**kw)


def test_report_is_json_safe():
    doc = json.loads(fuzz(FuzzConfig(trials=4, seed=0)).to_json())
    assert doc["config"]["n_range"] == [3, 12]
    assert len(doc["trials"]) == 4
