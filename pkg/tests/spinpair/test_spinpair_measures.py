import numpy as np
import pytest
from schema import And, Schema
from scipy.stats import special_ortho_group

from ttspin.services.spinpair.fano import FanoState, assemble_density, extract_fano, rotate, singlet
from ttspin.services.spinpair.measures import (
    axial_chsh_mu,
    axial_delta,
    axial_polarized_entangled,
    chsh_brute_force,
    chsh_mu,
    chsh_value,
    concurrence,
    concurrence_by_root,
    concurrence_from_d,
    concurrence_tstate,
    delta_marker,
    fidelity,
    is_physical,
    peres_horodecki,
    project_physical,
    random_physical_state,
    state_markers,
    witness_d,
)
from ttspin.utils.errors import NonPhysicalState, PhysicalityViolation


def werner(p):
    return FanoState.from_correlations(-p * np.eye(3))


@pytest.mark.parametrize("p", [0.0, 0.2, 1 / 3, 0.5, 0.8, 1.0])
def test_werner_concurrence(p):
    rho = assemble_density(werner(p))

    assert concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-7)
    assert concurrence_by_root(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-7)


@pytest.mark.parametrize("p,entangled", [(0.2, False), (0.5, True), (0.9, True)])
def test_werner_peres_horodecki(p, entangled):
    lowest, verdict = peres_horodecki(assemble_density(werner(p)))

    assert verdict is entangled
    assert lowest == pytest.approx((1 - 3 * p) / 4, abs=1e-12)


@pytest.mark.parametrize("p", [0.5, 0.7, 0.75, 1.0])
def test_werner_chsh(p):
    assert chsh_value(werner(p).c) == pytest.approx(2 * np.sqrt(2) * p, abs=1e-12)
    assert (chsh_mu(werner(p).c) > 0) == bool(p > 1 / np.sqrt(2))


@pytest.mark.parametrize(
    "c_diag,expected",
    [
        ((-0.5, -0.3, -0.2), 0.0),
        ((-0.8, -0.6, -0.5), 0.45),
        ((0.8, -0.6, 0.5), 0.45),
        ((1.0, 1.0, -1.0), 1.0),
    ],
)
def test_concurrence_tstate(c_diag, expected):
    closed = concurrence_tstate(c_diag)
    wootters = concurrence(assemble_density(FanoState.from_correlations(np.diag(c_diag))))

    assert closed == pytest.approx(expected, abs=1e-12)
    assert wootters == pytest.approx(expected, abs=1e-7)


def test_concurrence_tstate_rejects_unphysical():
    with pytest.raises(PhysicalityViolation):
        concurrence_tstate((1.0, 1.0, 1.0))


def test_concurrence_rejects_unphysical():
    rho = assemble_density(FanoState.from_correlations(np.eye(3)))

    assert not is_physical(rho)
    with pytest.raises(NonPhysicalState):
        concurrence(rho)


def test_delta_marker_singlet():
    assert delta_marker(singlet().c) == pytest.approx(1.0)


@pytest.mark.parametrize(
    "c",
    [
        np.diag([0.9, -0.6, 0.3]),
        np.array([[0.5, 0.2, 0.0], [0.2, -0.4, 0.1], [0.0, 0.1, -0.7]]),
        -0.6 * np.eye(3),
    ],
)
def test_chsh_brute_force_matches_closed_form(c):
    assert chsh_brute_force(c) == pytest.approx(chsh_value(c), abs=1e-5)


def test_witness_d_singlet():
    d, w = witness_d(singlet().c)

    assert d == pytest.approx(-1.0)
    assert w == pytest.approx(-2 / 3)
    assert concurrence_from_d(d) == pytest.approx(1.0)


@pytest.mark.parametrize("c_perp,c_z", [(-0.4, -0.3), (0.2, -0.9), (-0.1, 0.1), (0.6, 0.2)])
def test_axial_markers_match_general_ones(c_perp, c_z):
    c = np.diag([c_perp, c_perp, c_z])

    assert axial_delta(c_perp, c_z) == pytest.approx(delta_marker(c), abs=1e-12)
    assert axial_chsh_mu(c_perp, c_z) == pytest.approx(chsh_mu(c), abs=1e-12)


def test_axial_polarized_entangled_agrees_with_partial_transpose():
    state = FanoState.from_correlations(np.diag([-0.4, -0.4, -0.3]), bplus=[0, 0, 0.1], bminus=[0, 0, 0.1])
    _, entangled = peres_horodecki(assemble_density(state))

    assert axial_polarized_entangled(-0.4, -0.3, 0.1, 0.1) is True
    assert entangled is True


def test_fidelity_and_projection_of_random_states():
    rng = np.random.default_rng(7)
    for _ in range(20):
        rho = random_physical_state(rng)

        assert is_physical(rho)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-6)
        assert np.allclose(project_physical(rho).entries, rho.entries, atol=1e-10)


def test_project_physical_clips_negative_eigenvalues():
    projected = project_physical(assemble_density(FanoState.from_correlations(np.eye(3))))

    assert is_physical(projected)
    assert projected.trace == pytest.approx(1.0)


def test_state_markers_singlet():
    result = state_markers(singlet())

    expected_schema = Schema(
        {
            "concurrence": And(float, lambda x: abs(x - 1.0) < 1e-7),
            "ptMinEigenvalue": And(float, lambda x: abs(x + 0.5) < 1e-9),
            "entangled": True,
            "delta": And(float, lambda x: abs(x - 1.0) < 1e-12),
            "chsh": And(float, lambda x: abs(x - 2 * np.sqrt(2)) < 1e-9),
            "chshViolated": True,
            "d": And(float, lambda x: abs(x + 1.0) < 1e-12),
            "w": float,
        },
    )

    assert expected_schema.validate(state_markers(singlet()))
    assert result["entangled"] is True


def test_random_states_satisfy_entanglement_relations():
    rng = np.random.default_rng(2024)
    rotations = special_ortho_group.rvs(3, size=20000, random_state=rng)
    entangled_count, separable_count, violating_count = 0, 0, 0
    for i in range(10000):
        rho = random_physical_state(rng)
        fano = extract_fano(rho).normalized()
        c = concurrence(rho)
        lowest, entangled = peres_horodecki(rho)
        chsh = chsh_value(fano.c)

        assert 0.0 <= c <= 1.0
        if lowest < -1e-6:
            assert c > 0.0
        if c > 1e-4:
            assert entangled
        if lowest >= 0.0:
            assert c < 1e-6
        assert chsh <= 2.0 * np.sqrt(2.0) + 1e-9
        if chsh > 2.0 + 1e-6:
            assert entangled
            violating_count += 1

        rotated = assemble_density(rotate(fano, rotations[2 * i], rotations[2 * i + 1]))
        assert concurrence(rotated) == pytest.approx(c, abs=1e-6)
        assert peres_horodecki(rotated)[0] == pytest.approx(lowest, abs=1e-9)

        entangled_count += entangled
        separable_count += not entangled

    assert entangled_count > 3000
    assert separable_count > 50
    assert violating_count > 1000
