import logging
from functools import lru_cache
from typing import Tuple

import numpy as np

from ttspin.services.collider import Beam, ColliderConfig
from ttspin.services.pdf.grid import PdfSet
from ttspin.services.phase_space.averages import angular_avg
from ttspin.services.production.kinematics import Kinematics, PartonChannel, beta_of_mass
from ttspin.services.production.lo import helicity_coefficients, pair_state
from ttspin.services.spinpair.fano import FanoState, mix
from ttspin.utils.constants import PDG_GLUON, QUARK_FLAVORS
from ttspin.utils.errors import DegenerateNormalization
from ttspin.utils.numerics import adaptive_quad_vec

logger = logging.getLogger(__name__)


def _partons(pdf: PdfSet, x: np.ndarray, q: float, antihadron: bool = False) -> Tuple[np.ndarray, ...]:
    """
    Gluon, quark and antiquark momentum densities of one hadron.

    Flavors absent from the set count as zero. For an antiproton quarks and antiquarks trade places.

    Returns:
        Tuple[np.ndarray, ...]: x g with shape (len(x),), x q and x qbar with shape (len(x), 5).
    """
    table = pdf.xfx_all(x, q)
    zero = np.zeros(len(table))

    def take(flavor: int) -> np.ndarray:
        """One column, or zeros for an untabulated flavor."""
        return table[:, pdf.column(flavor)] if pdf.has_flavor(flavor) else zero

    gluon = take(PDG_GLUON)
    quarks = np.column_stack([take(q_id) for q_id in QUARK_FLAVORS])
    antiquarks = np.column_stack([take(-q_id) for q_id in QUARK_FLAVORS])
    if antihadron:
        quarks, antiquarks = antiquarks, quarks
    return gluon, quarks, antiquarks


def parton_products(cfg: ColliderConfig, x1: float, x2: float, q: float) -> np.ndarray:
    """
    Products of momentum densities summed per channel.

    Args:
        cfg (ColliderConfig): Collider; the second hadron is an antiproton for ppbar.
        x1 (float): Momentum fraction taken from the first hadron.
        x2 (float): Momentum fraction taken from the second hadron.
        q (float): Factorization scale in GeV.

    Returns:
        np.ndarray: [sum_q (x q1 x qbar2 + x qbar1 x q2), x g1 x g2].
    """
    pdf = cfg.pdf_set()
    g1, q1, qb1 = _partons(pdf, np.array([x1]), q)
    g2, q2, qb2 = _partons(pdf, np.array([x2]), q, antihadron=cfg.beam == Beam.PPBAR)
    qqbar = float(np.sum(q1[0] * qb2[0] + qb1[0] * q2[0]))
    return np.array([qqbar, float(g1[0] * g2[0])])


@lru_cache(maxsize=4096)
def _luminosities(cfg: ColliderConfig, m_tt: float) -> Tuple[float, float]:
    """(L_qqbar, L_gg) at one invariant mass."""
    cfg.check_mass(m_tt)
    x = m_tt / cfg.sqrt_s
    if x >= 1.0:
        return 0.0, 0.0
    q = cfg.q_scale(m_tt)
    y_max = -np.log(x)

    def integrand(y: float) -> np.ndarray:
        """Channel products at rapidity y of the pair."""
        x1 = min(x * np.exp(y), 1.0)
        x2 = min(x * np.exp(-y), 1.0)
        return parton_products(cfg, x1, x2, q)

    integral = adaptive_quad_vec(integrand, -y_max, y_max)
    l_qq, l_gg = 2.0 / m_tt * integral
    logger.debug("luminosity at m_tt = %.6g GeV: L_qq = %.6g, L_gg = %.6g", m_tt, l_qq, l_gg)
    return float(l_qq), float(l_gg)


def luminosity(cfg: ColliderConfig, ch: PartonChannel, m_tt: float) -> float:
    """
    Parton luminosity dL/dM at invariant mass m_tt.

    L = (2 / M) int dy sum x f_a(x e^y) x f_b(x e^-y) with x = M / sqrt(s), the rapidity y of the pair running over
    [ln x, -ln x].

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        ch (PartonChannel): QQBAR sums u, d, s, c, b with their antiquarks in both orderings; GG is the gluon product.
        m_tt (float): Invariant mass in GeV, 2 m_top <= m_tt <= sqrt_s.

    Returns:
        float: Luminosity in GeV^-1; zero at m_tt = sqrt_s.

    Raises:
        BelowThreshold: Below 2 m_top.
        AboveEnergy: Above sqrt_s.
        QuadratureFailure: If the rapidity integral does not converge.
    """
    l_qq, l_gg = _luminosities(cfg, float(m_tt))
    return l_qq if ch == PartonChannel.QQBAR else l_gg


def _normalized_pair(weights: np.ndarray, what: str) -> Tuple[float, float]:
    """Divide two non-negative weights by their sum."""
    total = float(np.sum(weights))
    if total <= 0.0:
        raise DegenerateNormalization(f"{what}: both channels vanish")
    w_qq, w_gg = weights / total
    return float(w_qq), float(w_gg)


def channel_weights(cfg: ColliderConfig, m_tt: float) -> Tuple[float, float]:
    """
    Probabilities that a pair at invariant mass m_tt comes from each initial state, after the angular average.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        m_tt (float): Invariant mass in GeV.

    Returns:
        Tuple[float, float]: (w_qq, w_gg), summing to one.

    Raises:
        DegenerateNormalization: If both luminosities vanish, e.g. at m_tt = sqrt_s.
    """
    beta = beta_of_mass(m_tt, cfg.m_top)
    weights = np.array(
        [
            luminosity(cfg, PartonChannel.QQBAR, m_tt) * angular_avg(PartonChannel.QQBAR, beta).a_tilde,
            luminosity(cfg, PartonChannel.GG, m_tt) * angular_avg(PartonChannel.GG, beta).a_tilde,
        ]
    )
    return _normalized_pair(weights, f"channel weights at m_tt = {m_tt:.6g} GeV")


def point_weights(cfg: ColliderConfig, m_tt: float, theta: float) -> Tuple[float, float]:
    """(w_qq, w_gg) at one production angle, proportional to L_I A~_I(beta, theta)."""
    beta = beta_of_mass(m_tt, cfg.m_top)
    c = np.cos(theta)
    weights = np.array(
        [
            luminosity(cfg, PartonChannel.QQBAR, m_tt) * float(helicity_coefficients(PartonChannel.QQBAR, beta, c)[0]),
            luminosity(cfg, PartonChannel.GG, m_tt) * float(helicity_coefficients(PartonChannel.GG, beta, c)[0]),
        ]
    )
    return _normalized_pair(weights, f"point weights at m_tt = {m_tt:.6g} GeV, theta = {theta:.6g}")


def hadronic_pair_state(cfg: ColliderConfig, m_tt: float, theta: float) -> FanoState:
    """
    Helicity-basis state of pairs produced in hadron collisions at fixed invariant mass and angle.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        m_tt (float): Invariant mass in GeV.
        theta (float): Production angle in radians.

    Returns:
        FanoState: Luminosity-weighted mixture of both channel states.
    """
    kin = Kinematics.from_mass(m_tt, theta, cfg.m_top)
    w_qq, w_gg = point_weights(cfg, m_tt, theta)
    return mix([pair_state(PartonChannel.QQBAR, kin), pair_state(PartonChannel.GG, kin)], [w_qq, w_gg])


def _mass_breaks(cfg: ColliderConfig) -> list:
    """Interior break points crowding the threshold, where the rate peaks."""
    span = cfg.sqrt_s - cfg.threshold
    return [cfg.threshold + span * f for f in (1e-3, 1e-2, 3e-2, 0.1, 0.3) if cfg.threshold + span * f < cfg.sqrt_s]


def rate_density(cfg: ColliderConfig, m_tt: float) -> np.ndarray:
    """
    Angle-integrated production rate per unit mass for each channel.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        m_tt (float): Invariant mass in GeV.

    Returns:
        np.ndarray: [qqbar, gg] values of alpha_s^2 beta / M^2 L_I A~_I.
    """
    beta = beta_of_mass(m_tt, cfg.m_top)
    if m_tt >= cfg.sqrt_s:
        return np.zeros(2)
    scale = cfg.alpha_s**2 * beta / m_tt**2
    return scale * np.array(
        [
            luminosity(cfg, PartonChannel.QQBAR, m_tt) * angular_avg(PartonChannel.QQBAR, beta).a_tilde,
            luminosity(cfg, PartonChannel.GG, m_tt) * angular_avg(PartonChannel.GG, beta).a_tilde,
        ]
    )


def gluon_fraction(cfg: ColliderConfig) -> float:
    """
    Share of all produced pairs that come from gluon fusion.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.

    Returns:
        float: f_gg in [0, 1]; f_qq = 1 - f_gg.

    Raises:
        DegenerateNormalization: If the total rate vanishes.
    """
    totals = adaptive_quad_vec(
        lambda m: rate_density(cfg, m),
        cfg.threshold,
        cfg.sqrt_s,
        points=_mass_breaks(cfg),
    )
    _, f_gg = _normalized_pair(totals, f"gluon fraction at sqrt_s = {cfg.sqrt_s:.6g} GeV")
    logger.info("gluon fraction at sqrt_s = %.6g GeV (%s): %.6g", cfg.sqrt_s, cfg.beam.value, f_gg)
    return f_gg
