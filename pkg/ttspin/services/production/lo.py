import logging
from typing import Optional, Tuple

import numpy as np

from ttspin.services.production.kinematics import Kinematics, PartonChannel, helicity_to_beam
from ttspin.services.spinpair.fano import FanoState, mix
from ttspin.services.spinpair.measures import axial_chsh_mu, axial_delta, chsh_mu, delta_marker
from ttspin.settings import settings
from ttspin.utils.constants import BASIS_BEAM, BASIS_DIAGONAL, BASIS_HELICITY, F_QQBAR, K, N, R
from ttspin.utils.errors import BelowThreshold, DegenerateNormalization, DomainError, KinematicSingularity

logger = logging.getLogger(__name__)


def helicity_coefficients(ch: PartonChannel, beta, cos_theta, with_flux: bool = True) -> Tuple[np.ndarray, ...]:
    """
    Leading-order R-matrix coefficients in the helicity basis, vectorized over beta and cos(theta).

    Args:
        ch (PartonChannel): Initial state.
        beta: Top velocity, scalar or array.
        cos_theta: Cosine of the production angle, scalar or array broadcastable with beta.
        with_flux (bool): Multiply by F_q or F_g. Ratios such as C = C~/A~ do not need it.

    Returns:
        Tuple[np.ndarray, ...]: (A~, C~kk, C~rr, C~nn, C~kr).
    """
    beta = np.asarray(beta, dtype=float)
    c = np.asarray(cos_theta, dtype=float)
    b2 = beta**2
    s2 = np.clip(1.0 - c**2, 0.0, None)
    s = np.sqrt(s2)
    sin2 = 2.0 * s * c
    root = np.sqrt(np.clip(1.0 - b2, 0.0, None))
    if ch == PartonChannel.QQBAR:
        flux = F_QQBAR if with_flux else 1.0
        a = flux * (2.0 - b2 * s2)
        c_rr = flux * (2.0 - b2) * s2
        c_nn = -flux * b2 * s2
        c_kk = flux * (2.0 - (2.0 - b2) * s2)
        c_kr = flux * root * sin2
        return a, c_kk, c_rr, c_nn, c_kr
    bc2 = b2 * c**2
    flux = (7.0 + 9.0 * bc2) / (192.0 * (1.0 - bc2) ** 2) if with_flux else 1.0
    s4 = s2**2
    a = flux * (1.0 + 2.0 * b2 * s2 - b2**2 * (1.0 + s4))
    c_rr = -flux * (1.0 - b2 * (2.0 - b2) * (1.0 + s4))
    c_nn = -flux * (1.0 - 2.0 * b2 + b2**2 * (1.0 + s4))
    c_kk = -flux * (1.0 - b2 * sin2**2 / 2.0 - b2**2 * (1.0 + s4))
    c_kr = flux * root * b2 * sin2 * s2
    return a, c_kk, c_rr, c_nn, c_kr


def _check_forward(ch: PartonChannel, kin: Kinematics) -> None:
    """Reject gluon-fusion points where 1 - beta^2 cos^2(theta) vanishes."""
    if ch == PartonChannel.GG and kin.beta**2 * kin.cos_theta**2 > 1.0 - settings.FORWARD_SINGULARITY_EPS:
        raise KinematicSingularity(
            f"gg cross-section diverges at beta = {kin.beta:.9g}, cos(theta) = {kin.cos_theta:.9g}",
        )


def _correlation_matrix(c_kk: float, c_rr: float, c_nn: float, c_kr: float) -> np.ndarray:
    """Assemble the symmetric (k, r, n) correlation matrix."""
    c = np.zeros((3, 3))
    c[K, K], c[R, R], c[N, N] = c_kk, c_rr, c_nn
    c[K, R] = c[R, K] = c_kr
    return c


def r_coeffs(ch: PartonChannel, kin: Kinematics) -> FanoState:
    """
    Unnormalized production spin density matrix in the helicity basis.

    Args:
        ch (PartonChannel): Initial state.
        kin (Kinematics): Velocity and production angle.

    Returns:
        FanoState: a = A~, C = C~ in (k, r, n) order, no polarizations.

    Raises:
        KinematicSingularity: For gluon fusion at beta^2 cos^2(theta) > 1 - settings.FORWARD_SINGULARITY_EPS.
    """
    _check_forward(ch, kin)
    a, c_kk, c_rr, c_nn, c_kr = (float(v) for v in helicity_coefficients(ch, kin.beta, kin.cos_theta))
    return FanoState(a=a, c=_correlation_matrix(c_kk, c_rr, c_nn, c_kr), basis_tag=BASIS_HELICITY)


def pair_state(ch: PartonChannel, kin: Kinematics) -> FanoState:
    """
    Normalized spin state rho = R / tr R of the pair.

    Args:
        ch (PartonChannel): Initial state.
        kin (Kinematics): Velocity and production angle.

    Returns:
        FanoState: C = C~ / A~ in the helicity basis.

    Raises:
        DegenerateNormalization: If A~ is not positive.
        KinematicSingularity: As in r_coeffs.
    """
    _check_forward(ch, kin)
    a, c_kk, c_rr, c_nn, c_kr = (
        float(v) for v in helicity_coefficients(ch, kin.beta, kin.cos_theta, with_flux=False)
    )
    if a <= 0.0:
        raise DegenerateNormalization(f"A~ = {a:.3e} at beta = {kin.beta:.6g}, cos(theta) = {kin.cos_theta:.6g}")
    return FanoState.from_correlations(_correlation_matrix(c_kk / a, c_rr / a, c_nn / a, c_kr / a))


def diag_eigs(ch: PartonChannel, kin: Kinematics) -> Tuple[float, float, float]:
    """
    Eigenvalues of the normalized correlation matrix.

    Args:
        ch (PartonChannel): Initial state.
        kin (Kinematics): Velocity and production angle.

    Returns:
        Tuple[float, float, float]: (C+, Cnn, C-) with C+- the eigenvalues of the (k, r) block.
    """
    c = pair_state(ch, kin).c
    mean = (c[K, K] + c[R, R]) / 2.0
    radius = float(np.hypot((c[K, K] - c[R, R]) / 2.0, c[K, R]))
    return mean + radius, float(c[N, N]), mean - radius


def diagonal_state(ch: PartonChannel, kin: Kinematics) -> FanoState:
    """The pair state rotated into its diagonal basis, ordered (+, -, n)."""
    c_plus, c_nn, c_minus = diag_eigs(ch, kin)
    return FanoState.from_correlations(np.diag([c_plus, c_minus, c_nn]), basis_tag=BASIS_DIAGONAL)


def delta_pair(ch: PartonChannel, kin: Kinematics) -> float:
    """(-Cnn + |Ckk + Crr| - 1) / 2 of the pair state; equals the concurrence when positive."""
    return delta_marker(pair_state(ch, kin).c)


def chsh_mu_pair(ch: PartonChannel, kin: Kinematics) -> float:
    """tr(C^T C) - C_min^2 - 1 of the pair state; positive iff CHSH is violated."""
    return chsh_mu(pair_state(ch, kin).c)


def delta_qqbar_closed_form(beta: float, theta: float) -> float:
    """beta^2 sin^2(theta) / (2 - beta^2 sin^2(theta))."""
    x = beta**2 * np.sin(theta) ** 2
    return float(x / (2.0 - x))


def diff_xsec(ch: PartonChannel, kin: Kinematics, alpha_s: Optional[float] = None) -> float:
    """
    Partonic differential cross-section alpha_s^2 beta A~ / m_tt^2.

    Args:
        ch (PartonChannel): Initial state.
        kin (Kinematics): Velocity and production angle.
        alpha_s (float, optional): Strong coupling, defaults to settings.ALPHA_S.

    Returns:
        float: dsigma/dOmega in GeV^-2 per steradian.

    Raises:
        BelowThreshold: If the invariant mass is below 2 m_top.
        DomainError: If alpha_s is not positive.
    """
    alpha_s = settings.ALPHA_S if alpha_s is None else alpha_s
    if alpha_s <= 0.0:
        raise DomainError(f"alpha_s must be positive, got {alpha_s:.6g}")
    if kin.m_tt < 2.0 * kin.m_top:
        raise BelowThreshold(f"m_tt = {kin.m_tt:.6g} GeV is below threshold")
    if np.isinf(kin.m_tt):
        return 0.0
    return float(alpha_s**2 * kin.beta * r_coeffs(ch, kin).a / kin.m_tt**2)


def to_beam_basis(c_helicity: np.ndarray, cos_theta: float, phi: float = 0.0) -> np.ndarray:
    """
    Express a (k, r, n) correlation matrix in the fixed beam basis (x, y, z), z along the beam.

    Args:
        c_helicity (np.ndarray): Correlation matrix in the helicity basis.
        cos_theta (float): Cosine of the production angle.
        phi (float): Azimuth of the top direction.

    Returns:
        np.ndarray: E C E^T with E the helicity triad written in beam coordinates.
    """
    frame = helicity_to_beam(cos_theta, phi)
    return frame @ np.asarray(c_helicity, dtype=float) @ frame.T


def mixture_state(w_gg: float, kin: Kinematics) -> FanoState:
    """
    Mixture of both channels with a weight constant over phase space.

    Args:
        w_gg (float): Gluon-fusion probability in [0, 1].
        kin (Kinematics): Velocity and production angle.

    Returns:
        FanoState: (1 - w_gg) rho^qqbar + w_gg rho^gg in the helicity basis.
    """
    if not 0.0 <= w_gg <= 1.0:
        raise DomainError(f"w_gg must lie in [0, 1], got {w_gg:.6g}")
    return mix([pair_state(PartonChannel.QQBAR, kin), pair_state(PartonChannel.GG, kin)], [1.0 - w_gg, w_gg])


def threshold_mixture_markers(w_gg: float) -> dict:
    """
    Entanglement and CHSH markers of the threshold mixture of a beam-aligned separable state and a singlet.

    The mixture is axial with C_perp = -w and C_z = 1 - 2w.

    Args:
        w_gg (float): Gluon-fusion probability in [0, 1].

    Returns:
        dict: delta = 2w - 1, the helicity-basis marker (w + |3w - 1| - 1) / 2, the CHSH marker mu (2w^2 - 1 above
            w = 1/3) and the verdicts they imply.
    """
    if not 0.0 <= w_gg <= 1.0:
        raise DomainError(f"w_gg must lie in [0, 1], got {w_gg:.6g}")
    delta = axial_delta(-w_gg, 1.0 - 2.0 * w_gg)
    mu = axial_chsh_mu(-w_gg, 1.0 - 2.0 * w_gg)
    return {
        "wGG": w_gg,
        "delta": delta,
        "deltaHelicity": 0.5 * (w_gg + abs(3.0 * w_gg - 1.0) - 1.0),
        "mu": mu,
        "entangled": delta > 0.0,
        "chshViolated": mu > 0.0,
    }


def beam_state(ch: PartonChannel, kin: Kinematics, phi: float = 0.0) -> FanoState:
    """The pair state with its correlations rotated into the beam basis."""
    return FanoState.from_correlations(
        to_beam_basis(pair_state(ch, kin).c, kin.cos_theta, phi),
        basis_tag=BASIS_BEAM,
    )
