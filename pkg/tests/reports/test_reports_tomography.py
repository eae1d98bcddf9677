import json

import pytest
from pydantic import ValidationError

from ttspin.schemas import TOMOGRAPHY
from ttspin.services.reports.tomography import SpinTomography
from ttspin.services.tomography.decay import DecayConfig
from ttspin.utils.errors import BelowThreshold, InsufficientSample


def test_tomography_checks_inputs(gluon_only_collider):
    with pytest.raises(InsufficientSample):
        SpinTomography(cfg=gluon_only_collider, n=50)
    with pytest.raises(BelowThreshold):
        SpinTomography(cfg=gluon_only_collider, lo=300.0, hi=400.0)
    with pytest.raises(ValidationError):
        SpinTomography(cfg=gluon_only_collider, lo=400.0, hi=350.0)


def test_get_tomography(gluon_only_collider):
    tomography = SpinTomography(cfg=gluon_only_collider, lo=346.0, hi=350.0, n=5000, seed=4, streams=2)
    result = tomography.get_tomography()

    assert TOMOGRAPHY.validate(result)
    assert result["window"] == [346.0, 350.0]
    assert result["n"] == 5000
    assert result["witness"]["w"] < 0.0
    assert [row["tier"] for row in tomography.rows] == ["symmetryLO", "symmetry", "none"]
    assert "correlations" not in tomography.rows[0]


def test_tomography_with_reduced_analyzing_power(gluon_only_collider):
    decay = DecayConfig(kappa_plus=0.5, kappa_minus=-0.5)
    result = SpinTomography(cfg=gluon_only_collider, lo=346.0, hi=350.0, n=2000, decay=decay).get_tomography()

    assert result["kappaPlus"] == 0.5
    assert result["kappaMinus"] == -0.5


def test_tomography_renders_json(gluon_only_collider):
    tomography = SpinTomography(cfg=gluon_only_collider, lo=346.0, hi=350.0, n=1000, seed=2)
    result = tomography.get_tomography()

    assert json.loads(tomography.render("json")) == result
