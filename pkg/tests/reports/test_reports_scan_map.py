import numpy as np
import pytest
from schema import And, Optional, Or, Schema

from ttspin.services.reports.scan_map import SpinScanMap
from ttspin.utils.errors import DomainError


def test_scan_map_rejects_unknown_kind():
    with pytest.raises(DomainError):
        SpinScanMap(kind="ww")


@pytest.mark.parametrize("n_beta,n_theta", [(1, 3), (3, 1)])
def test_scan_map_rejects_small_grids(n_beta, n_theta):
    with pytest.raises(DomainError):
        SpinScanMap(kind="gg", n_beta=n_beta, n_theta=n_theta)


@pytest.mark.parametrize("w_gg", [None, 1.5])
def test_scan_map_mixture_needs_weight(w_gg):
    with pytest.raises(DomainError):
        SpinScanMap(kind="mixture", w_gg=w_gg)


@pytest.mark.parametrize("kind", ["qqbar", "gg"])
def test_get_scan_map(kind):
    result = SpinScanMap(kind=kind, n_beta=3, n_theta=3).get_scan_map()

    number = Or(float, int)
    maybe_number = Or(None, float, int)
    expected_schema = Schema(
        {
            "kind": kind,
            "grid": [3, 3],
            "rows": [
                {
                    "beta": And(number, lambda x: 0.0 <= x <= 0.999),
                    "theta": And(number, lambda x: 0.0 <= x <= np.pi),
                    "concurrence": And(number, lambda x: 0.0 <= x <= 1.0 + 1e-9),
                    "delta": number,
                    "chsh": And(number, lambda x: x <= 2.0 * np.sqrt(2.0) + 1e-9),
                    "entangled": bool,
                    "chshViolated": bool,
                    "betaPh1": maybe_number,
                    "betaPh2": maybe_number,
                    "betaCh1": maybe_number,
                    "betaCh2": maybe_number,
                },
            ],
            Optional("wGg"): number,
        },
    )

    assert expected_schema.validate(result)
    assert len(result["rows"]) == 9


def test_gg_scan_map_threshold_is_singlet():
    rows = SpinScanMap(kind="gg", n_beta=3, n_theta=3).get_scan_map()["rows"]

    for row in rows[:3]:
        assert row["beta"] == 0.0
        assert row["concurrence"] == pytest.approx(1.0)
        assert row["chsh"] == pytest.approx(2.0 * np.sqrt(2.0))


def test_gg_scan_map_criticals():
    rows = SpinScanMap(kind="gg", n_beta=2, n_theta=3).get_scan_map()["rows"]
    edge, middle = rows[0], rows[1]

    assert middle["theta"] == pytest.approx(np.pi / 2)
    assert middle["betaPh1"] == pytest.approx(0.541, abs=1e-3)
    assert middle["betaPh2"] == pytest.approx(0.841, abs=1e-3)
    assert edge["betaPh1"] is None
    assert edge["betaCh1"] is None


def test_qqbar_scan_map_criticals():
    rows = SpinScanMap(kind="qqbar", n_beta=2, n_theta=3).get_scan_map()["rows"]

    assert rows[1]["betaPh1"] == 0.0
    assert rows[1]["betaPh2"] is None
    assert rows[1]["betaCh1"] == 0.0


def test_mixture_scan_map_is_entangled_at_threshold():
    result = SpinScanMap(kind="mixture", w_gg=0.8, n_beta=3, n_theta=5).get_scan_map()

    assert result["wGg"] == 0.8
    for row in result["rows"][:5]:
        assert row["entangled"]
        assert row["concurrence"] == pytest.approx(0.6)


def test_hadronic_scan_map(toy_collider):
    result = SpinScanMap(cfg=toy_collider, kind="hadronic", n_beta=3, n_theta=3).get_scan_map()

    assert result["collider"]["sqrtS"] == 13000.0
    assert len(result["rows"]) == 9
    assert set(result["rows"][0]) == {"beta", "theta", "concurrence"}


def test_hadronic_scan_map_stops_at_collider_energy(toy_tevatron):
    result = SpinScanMap(cfg=toy_tevatron, kind="hadronic", n_beta=3, n_theta=3).get_scan_map()

    assert [row["beta"] for row in result["rows"]] == pytest.approx([0.0] * 3 + [0.4995] * 3)


def test_scan_map_renders_csv():
    scan = SpinScanMap(kind="qqbar", n_beta=2, n_theta=2)
    scan.get_scan_map()
    lines = scan.render("csv").splitlines()

    assert lines[0].startswith("beta,theta,concurrence,delta,chsh")
    assert len(lines) == 5
