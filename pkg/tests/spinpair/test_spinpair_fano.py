import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from ttspin.services.spinpair.fano import (
    DensityMatrix4,
    FanoState,
    assemble_density,
    extract_fano,
    maximally_mixed,
    mix,
    rotate,
    singlet,
)
from ttspin.utils.errors import DegenerateNormalization, DomainError


def test_assemble_singlet_is_pure():
    rho = assemble_density(singlet())

    assert rho.trace == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rho.eigenvalues(), [0.0, 0.0, 0.0, 1.0], atol=1e-12)


def test_assemble_maximally_mixed():
    rho = assemble_density(maximally_mixed())

    assert np.allclose(rho.entries, np.eye(4) / 4)


def test_assemble_normalizes_unnormalized_coefficients():
    rho = assemble_density(FanoState(a=7.0 / 192.0, c=-7.0 / 192.0 * np.eye(3)))

    assert np.allclose(rho.entries, assemble_density(singlet()).entries)


def test_extract_fano_recovers_coefficients():
    state = FanoState.from_correlations(
        c=[[0.3, 0.1, 0.0], [0.1, -0.2, 0.05], [0.0, 0.05, -0.4]],
        bplus=[0.1, 0.0, 0.2],
        bminus=[0.0, -0.1, 0.1],
    )
    recovered = extract_fano(assemble_density(state))

    assert recovered.a == pytest.approx(1.0)
    assert np.allclose(recovered.c, state.c, atol=1e-12)
    assert np.allclose(recovered.bplus, state.bplus, atol=1e-12)
    assert np.allclose(recovered.bminus, state.bminus, atol=1e-12)


def test_fano_state_is_immutable():
    state = singlet()

    with pytest.raises(ValueError):
        state.c[0, 0] = 1.0


@pytest.mark.parametrize("value", [np.nan, np.inf])
def test_fano_state_rejects_non_finite(value):
    with pytest.raises(DomainError):
        FanoState.from_correlations(np.full((3, 3), value))


def test_normalized_rejects_non_positive_a():
    with pytest.raises(DegenerateNormalization):
        FanoState(a=0.0).normalized()


def test_density_matrix_rejects_non_hermitian():
    entries = np.eye(4, dtype=complex) / 4
    entries[0, 1] = 0.1

    with pytest.raises(DomainError):
        DensityMatrix4(entries=entries)


def test_density_matrix_rejects_wrong_shape():
    with pytest.raises(DomainError):
        DensityMatrix4(entries=np.eye(3))


def test_rotate_preserves_trace_and_spectrum():
    state = FanoState.from_correlations(np.diag([0.5, -0.3, -0.6]))
    o = Rotation.from_euler("zyx", [0.3, 1.1, -0.7]).as_matrix()
    rotated = rotate(state, o, o)

    assert np.trace(rotated.c) == pytest.approx(np.trace(state.c), abs=1e-12)
    assert np.allclose(assemble_density(rotated).eigenvalues(), assemble_density(state).eigenvalues(), atol=1e-12)


def test_mix_is_convex():
    state = mix([singlet(), maximally_mixed()], [3.0, 1.0])

    assert np.allclose(state.c, -0.75 * np.eye(3))
    assert state.a == 1.0


@pytest.mark.parametrize("weights", [[-1.0, 2.0], [0.0, 0.0]])
def test_mix_rejects_bad_weights(weights):
    with pytest.raises(DegenerateNormalization):
        mix([singlet(), maximally_mixed()], weights)
