from src.tools.check_determinism import check_determinism
from src.tools.regenerate_golden import regenerate


def test_golden_files_up_to_date():
    assert regenerate(check_only=True) == []


def test_every_fixture_gives_one_digest():
    results = check_determinism(runs=2)
    assert set(results) == {"corridor_cascade", "dnsc_anomaly"}
    assert all(len(seen) == 1 for seen in results.values())
