import numpy as np
import pytest
from schema import And, Schema

from ttspin.services.collider import ColliderConfig, MassWindow
from ttspin.services.phase_space.averages import angular_avg, qqbar_delta_omega
from ttspin.services.phase_space.integrated import (
    CriticalKind,
    ThresholdProfile,
    critical_beta_vs_energy,
    delta_high_pt,
    integrate_window,
    mass_integrated_helicity,
    mass_integrated_state,
    window_markers,
    window_weights,
)
from ttspin.services.production.kinematics import PartonChannel, beta_of_mass
from ttspin.utils.constants import BASIS_BEAM, BASIS_FICTITIOUS
from ttspin.utils.errors import BelowThreshold, DomainError, EmptyWindow, NoRootInBracket, NoSignature


def test_window_markers_schema(toy_collider):
    markers = window_markers(toy_collider, MassWindow(lo=350.0, hi=500.0))

    expected_schema = Schema(
        {
            key: And(float, np.isfinite)
            for key in [
                "cPerp",
                "cZ",
                "cKk",
                "cRr",
                "cNn",
                "d",
                "w",
                "delta",
                "chshMu",
                "deltaHelicity",
                "concurrence",
                "wQq",
                "wGg",
            ]
        },
        ignore_extra_keys=False,
    )

    assert expected_schema.validate({key: float(value) for key, value in markers.items()})
    assert markers["wQq"] + markers["wGg"] == pytest.approx(1.0)


def test_quark_only_collapsed_window(quark_only_collider):
    window = MassWindow(lo=600.0, hi=600.01)
    beta = beta_of_mass(600.005, quark_only_collider.m_top)

    assert window_markers(quark_only_collider, window)["deltaHelicity"] == pytest.approx(
        qqbar_delta_omega(beta),
        abs=1e-5,
    )


def test_gluon_only_window_near_threshold_is_singlet_like(gluon_only_collider):
    state = mass_integrated_state(gluon_only_collider, MassWindow(lo=346.0, hi=346.5))

    assert state.basis_tag == BASIS_BEAM
    assert np.allclose(np.diag(state.c), [-1.0, -1.0, -1.0], atol=1e-2)


def test_integration_variable_does_not_matter(toy_collider):
    window = MassWindow(lo=350.0, hi=600.0)
    in_mass = mass_integrated_state(toy_collider, window)
    in_beta = mass_integrated_state(toy_collider, window, in_beta=True)

    assert np.allclose(in_mass.c, in_beta.c, atol=1e-5)


def test_window_state_matches_pointwise_average(quark_only_collider):
    window = MassWindow(lo=500.0, hi=500.001)
    beta = beta_of_mass(500.0005, quark_only_collider.m_top)
    expected = angular_avg(PartonChannel.QQBAR, beta).normalized()

    state = mass_integrated_state(quark_only_collider, window)

    assert state.c[0, 0] == pytest.approx(expected["cPerp"], abs=1e-5)
    assert state.c[2, 2] == pytest.approx(expected["cZ"], abs=1e-5)


def test_helicity_window_state_is_fictitious(toy_collider):
    state = mass_integrated_helicity(toy_collider, MassWindow(lo=350.0, hi=500.0))

    assert state.basis_tag == BASIS_FICTITIOUS


def test_window_weights(toy_collider, gluon_only_collider):
    window = MassWindow(lo=350.0, hi=500.0)
    w_qq, w_gg = window_weights(toy_collider, window)

    assert w_qq + w_gg == pytest.approx(1.0)
    assert w_gg > w_qq > 0.0
    assert window_weights(gluon_only_collider, window) == pytest.approx((0.0, 1.0))


def test_integrated_components_are_read_only(toy_collider):
    totals = integrate_window(toy_collider, MassWindow(lo=350.0, hi=500.0))

    with pytest.raises(ValueError):
        totals[0] = 0.0


def test_empty_window(toy_collider):
    with pytest.raises(EmptyWindow):
        integrate_window(toy_collider, MassWindow(lo=12999.99, hi=13000.0))


def test_window_below_threshold(toy_collider):
    with pytest.raises(BelowThreshold):
        mass_integrated_state(toy_collider, MassWindow(lo=300.0, hi=400.0))


def test_delta_high_pt_cut_range(toy_collider):
    with pytest.raises(DomainError):
        delta_high_pt(toy_collider, toy_collider.sqrt_s)
    with pytest.raises(BelowThreshold):
        delta_high_pt(toy_collider, 300.0)


def test_delta_high_pt_quark_only(quark_only_collider):
    cfg = ColliderConfig(**{**quark_only_collider.model_dump(), "sqrt_s": 2000.0})
    delta, chsh = delta_high_pt(cfg, 800.0)

    assert delta > 0.0
    assert chsh > 2.0


def test_tevatron_high_pt_is_entangled(grid_path):
    cfg = ColliderConfig(beam="ppbar", sqrt_s=1960.0, pdf=grid_path, freeze_below_floor=True)

    for m_cut in [400.0, 600.0, 800.0]:
        assert delta_high_pt(cfg, m_cut)[0] > 0.0


def test_threshold_profile_matches_window_integral(toy_collider):
    profile = ThresholdProfile(toy_collider, panels=16)
    beta = 0.6
    expected = integrate_window(toy_collider, MassWindow(lo=toy_collider.threshold, hi=346.0 / np.sqrt(1 - beta**2)))
    totals = profile.totals(beta)

    assert totals[0] == pytest.approx(expected[0], rel=1e-5)
    assert totals[1] / totals[0] == pytest.approx(expected[1] / expected[0], abs=1e-5)


def test_threshold_profile_marker_signs(toy_collider, gluon_only_collider):
    assert ThresholdProfile(toy_collider, panels=4).marker(CriticalKind.PH, 0.01) > 0.0
    assert ThresholdProfile(gluon_only_collider, panels=4).marker(CriticalKind.CH, 0.01) > 0.0


@pytest.mark.slow
def test_gluon_only_threshold_window_stays_entangled_past_pointwise_critical(gluon_only_collider):
    profile = ThresholdProfile(gluon_only_collider)

    assert profile.marker(CriticalKind.PH, 0.632) > 0.0
    try:
        assert critical_beta_vs_energy(gluon_only_collider, CriticalKind.PH, profile) > 0.632
    except NoRootInBracket:
        pass


def test_quark_only_threshold_has_no_entanglement(quark_only_collider):
    with pytest.raises(NoSignature):
        critical_beta_vs_energy(quark_only_collider, CriticalKind.PH, ThresholdProfile(quark_only_collider, panels=4))
