import json

import pytest

from finitecoh.harness import ANCHORS, SweepConfig, certify_propdata, infres_pairs, selftest, verify_structure


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k not in ("elapsed", "timings")}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(n_list=())
    with pytest.raises(ValueError):
        SweepConfig(n_list=(0,))
    with pytest.raises(ValueError):
        SweepConfig(degree_cap=-1)
    c = SweepConfig(max_group_order=4, n_list=(2, 4))
    assert len(c.cells()) == 5 * 2
    assert "jobs" not in c.to_json()


def test_default_sweep_covers_sixty_cells():
    assert len(SweepConfig().cells()) >= 60


def test_infres_pairs_are_proper_normal_and_spread():
    pairs = infres_pairs(10)
    assert len(pairs) == 10
    for G, N in pairs:
        assert 1 < N.order < G.size and N.is_normal
    assert len({G.name for G, _ in pairs}) >= 8


def test_parallel_matches_serial():
    base = dict(max_group_order=6, n_list=(2, 4))
    a = certify_propdata(SweepConfig(**base, jobs=1))
    b = certify_propdata(SweepConfig(**base, jobs=2))
    assert _strip(a.records) == _strip(b.records)


def test_structure_records_carry_known_anchors():
    report = verify_structure(SweepConfig(groups=("S3",), n_list=(3,)))
    assert report.ok
    ids = {r["check_id"] for r in report.records}
    assert {"duality", "les_diagonal", "les_augmentation", "shapiro_vanishing", "shapiro_map",
            "cup_connecting", "inflation_restriction", "shapiro_restriction"} <= ids
    assert all(r["anchor"] in ANCHORS for r in report.records)
    json.loads(report.dumps())


def test_selftest_defaults_and_seeds():
    assert selftest().ok
    assert selftest(seed=3).ok
    assert not selftest(mutate=True).ok
