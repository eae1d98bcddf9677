from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ttspin.settings import settings
from ttspin.utils.errors import BelowThreshold, CollinearDegeneracy, DomainError


class PartonChannel(str, Enum):
    """Initial states that produce a top pair at leading order."""

    QQBAR = "qqbar"
    GG = "gg"


def beta_of_mass(m_tt: float, m_top: Optional[float] = None) -> float:
    """
    Top velocity in the pair rest frame.

    Args:
        m_tt (float): Invariant mass in GeV.
        m_top (float, optional): Top mass in GeV, defaults to settings.M_TOP.

    Returns:
        float: sqrt(1 - 4 m_top^2 / m_tt^2).

    Raises:
        BelowThreshold: If m_tt < 2 m_top.
    """
    m_top = settings.M_TOP if m_top is None else m_top
    if m_tt < 2.0 * m_top:
        raise BelowThreshold(f"m_tt = {m_tt:.6g} GeV is below threshold 2 m_top = {2.0 * m_top:.6g} GeV")
    return float(np.sqrt(max(0.0, 1.0 - (2.0 * m_top / m_tt) ** 2)))


def mass_of_beta(beta: float, m_top: Optional[float] = None) -> float:
    """Invariant mass 2 m_top / sqrt(1 - beta^2); infinite at beta = 1."""
    m_top = settings.M_TOP if m_top is None else m_top
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta:.6g}")
    if beta == 1.0:
        return float("inf")
    return 2.0 * m_top / float(np.sqrt(1.0 - beta**2))


@dataclass(frozen=True)
class Kinematics:
    """
    Pair kinematics in the center-of-mass frame.

    Args:
        m_top (float): Top mass in GeV.
        m_tt (float): Invariant mass in GeV (infinite in the ultrarelativistic limit).
        beta (float): Top velocity.
        cos_theta (float): Cosine of the angle between the top and the beam.
    """

    m_top: float
    m_tt: float
    beta: float
    cos_theta: float

    def __post_init__(self) -> None:
        """Validate the velocity and the production angle."""
        if not 0.0 <= self.beta <= 1.0:
            raise DomainError(f"beta must lie in [0, 1], got {self.beta:.6g}")
        if not -1.0 <= self.cos_theta <= 1.0:
            raise DomainError(f"cos(theta) must lie in [-1, 1], got {self.cos_theta:.6g}")

    @classmethod
    def from_beta(cls, beta: float, theta: float, m_top: Optional[float] = None) -> "Kinematics":
        """Build kinematics from the velocity and the production angle in radians."""
        m_top = settings.M_TOP if m_top is None else m_top
        return cls(m_top=m_top, m_tt=mass_of_beta(beta, m_top), beta=beta, cos_theta=float(np.cos(theta)))

    @classmethod
    def from_mass(cls, m_tt: float, theta: float, m_top: Optional[float] = None) -> "Kinematics":
        """Build kinematics from the invariant mass in GeV and the production angle in radians."""
        m_top = settings.M_TOP if m_top is None else m_top
        return cls(m_top=m_top, m_tt=m_tt, beta=beta_of_mass(m_tt, m_top), cos_theta=float(np.cos(theta)))

    @property
    def sin_theta(self) -> float:
        """Non-negative sine of the production angle."""
        return float(np.sqrt(max(0.0, 1.0 - self.cos_theta**2)))


@dataclass(frozen=True)
class HelicityFrame:
    """
    Per-event orthonormal triad: k along the top, r in the production plane, n = r x k.

    Args:
        k_hat (np.ndarray): Top direction.
        r_hat (np.ndarray): Transverse direction in the production plane.
        n_hat (np.ndarray): Normal to the production plane.
    """

    k_hat: np.ndarray
    r_hat: np.ndarray
    n_hat: np.ndarray

    def matrix(self) -> np.ndarray:
        """Columns k, r, n, mapping helicity components to the frame the vectors are given in."""
        return np.column_stack([self.k_hat, self.r_hat, self.n_hat])


def helicity_frame(k_hat: np.ndarray, p_hat: np.ndarray) -> HelicityFrame:
    """
    Build the helicity triad from the top and beam directions.

    Args:
        k_hat (np.ndarray): Unit vector along the top momentum.
        p_hat (np.ndarray): Unit vector along the beam.

    Returns:
        HelicityFrame: r = (p - cos(theta) k) / sin(theta) and n = r x k.

    Raises:
        CollinearDegeneracy: If sin(theta) < settings.COLLINEAR_EPS.
    """
    k_hat = np.asarray(k_hat, dtype=float)
    p_hat = np.asarray(p_hat, dtype=float)
    cos_theta = float(np.dot(k_hat, p_hat))
    sin_theta = float(np.sqrt(max(0.0, 1.0 - cos_theta**2)))
    if sin_theta < settings.COLLINEAR_EPS:
        raise CollinearDegeneracy(f"top and beam are collinear (sin(theta) = {sin_theta:.3e})")
    r_hat = (p_hat - cos_theta * k_hat) / sin_theta
    n_hat = np.cross(r_hat, k_hat)
    return HelicityFrame(k_hat=k_hat, r_hat=r_hat, n_hat=n_hat)


def helicity_to_beam(cos_theta: float, phi: float = 0.0) -> np.ndarray:
    """
    Columns k, r, n of the helicity triad in the beam frame (z along the beam).

    The expression stays finite at sin(theta) = 0, where k and r are taken as the limit of the polar approach at
    azimuth phi.

    Args:
        cos_theta (float): Cosine of the production angle.
        phi (float): Azimuth of the top direction.

    Returns:
        np.ndarray: 3x3 orthogonal matrix.
    """
    c = cos_theta
    s = float(np.sqrt(max(0.0, 1.0 - c**2)))
    k_hat = np.array([s * np.cos(phi), s * np.sin(phi), c])
    r_hat = np.array([-c * np.cos(phi), -c * np.sin(phi), s])
    return np.column_stack([k_hat, r_hat, np.cross(r_hat, k_hat)])
