import logging
from typing import Optional, Tuple

import numpy as np

from ttspin.services.production.kinematics import Kinematics, PartonChannel
from ttspin.services.production.lo import chsh_mu_pair
from ttspin.settings import settings
from ttspin.utils.errors import DomainError, NoRootInBracket
from ttspin.utils.numerics import scan_roots

logger = logging.getLogger(__name__)


def _check_theta(theta: float) -> None:
    """Reject production angles outside the open interval (0, pi)."""
    if not 0.0 < theta < np.pi:
        raise DomainError(f"theta must lie in (0, pi), got {theta:.6g}")


def critical_beta_ph_gg(theta: float) -> Tuple[float, float]:
    """
    Velocities bounding the gluon-fusion entanglement window at fixed angle.

    Args:
        theta (float): Production angle in radians.

    Returns:
        Tuple[float, float]: (beta_c1, beta_c2); the pair is separable for beta_c1 <= beta <= beta_c2.
    """
    _check_theta(theta)
    s = np.sin(theta)
    s4 = s**4
    beta_c1 = np.sqrt((1.0 + s**2 - np.sqrt(2.0) * s) / (1.0 + s4))
    beta_c2 = (1.0 + s4) ** -0.25
    return float(beta_c1), float(beta_c2)


def _beta_ceiling(theta: float) -> float:
    """Largest velocity at which gluon fusion stays clear of the forward singularity."""
    c = abs(np.cos(theta))
    limit = np.sqrt(1.0 - 2.0 * settings.FORWARD_SINGULARITY_EPS)
    return 1.0 if c <= limit else float(limit / c)


def critical_beta_ch(ch: PartonChannel, theta: float) -> Tuple[float, Optional[float]]:
    """
    Velocities where the CHSH marker mu = tr(C^T C) - C_min^2 - 1 changes sign.

    Args:
        ch (PartonChannel): Initial state.
        theta (float): Production angle in radians.

    Returns:
        Tuple[float, Optional[float]]: (beta_c1, beta_c2). For q qbar mu equals delta^2, positive for every beta > 0,
        so the only boundary is (0.0, None).

    Raises:
        NoRootInBracket: If mu keeps one sign over the whole velocity range.
    """
    _check_theta(theta)
    if ch == PartonChannel.QQBAR:
        return 0.0, None

    def mu(beta: float) -> float:
        """CHSH marker of the gluon-fusion state at this angle."""
        return chsh_mu_pair(ch, Kinematics.from_beta(beta, theta))

    roots = scan_roots(mu, 0.0, _beta_ceiling(theta))
    logger.debug("CHSH boundaries of %s at theta = %.6g: %s", ch.value, theta, roots)
    if not roots:
        raise NoRootInBracket(f"no CHSH boundary for {ch.value} at theta = {theta:.6g}")
    return roots[0], roots[1] if len(roots) > 1 else None
