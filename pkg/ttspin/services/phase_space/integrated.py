import logging
from enum import Enum
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np

from ttspin.services.collider import ColliderConfig, MassWindow
from ttspin.services.pdf.luminosity import luminosity
from ttspin.services.phase_space.averages import angular_avg, chsh_mixture_means
from ttspin.services.production.kinematics import PartonChannel, beta_of_mass, mass_of_beta
from ttspin.services.spinpair.fano import FanoState, assemble_density
from ttspin.services.spinpair.measures import axial_chsh_mu, axial_delta, concurrence, delta_marker, witness_d
from ttspin.utils.constants import BASIS_BEAM, BASIS_FICTITIOUS
from ttspin.utils.errors import DomainError, EmptyWindow, NoRootInBracket, NoSignature
from ttspin.utils.numerics import adaptive_quad_vec, bisect_root, gauss_legendre

logger = logging.getLogger(__name__)

# Components of the mass integrand.
A, C_PERP, C_Z, C_RR, C_NN, C_KK, A_QQ, A_GG, DELTA_NUM, CHSH_NUM = range(10)

_EMPTY_RATE = 1e-30
_SMALLEST_BETA = 1e-3


class CriticalKind(str, Enum):
    """Signature whose threshold-side critical velocity is wanted."""

    PH = "ph"
    CH = "ch"


def _mass_integrand(cfg: ColliderConfig, m_tt: float, markers: bool = False) -> np.ndarray:
    """
    Rate-weighted angular averages at one invariant mass, summed over channels.

    Returns:
        np.ndarray: alpha_s^2 beta / M^2 sum_I L_I (A~, C_perp, C_z, C~rr, C~nn, C~kk), then the per-channel A~ rates
            and, with markers, the rate times Delta_Omega and the rate times the angular CHSH mean.
    """
    size = CHSH_NUM + 1 if markers else A_GG + 1
    if m_tt >= cfg.sqrt_s:
        return np.zeros(size)
    beta = beta_of_mass(m_tt, cfg.m_top)
    scale = cfg.alpha_s**2 * beta / m_tt**2
    l_qq = scale * luminosity(cfg, PartonChannel.QQBAR, m_tt)
    l_gg = scale * luminosity(cfg, PartonChannel.GG, m_tt)
    avg_qq = angular_avg(PartonChannel.QQBAR, beta).as_vector()
    avg_gg = angular_avg(PartonChannel.GG, beta).as_vector()
    mixed = l_qq * avg_qq + l_gg * avg_gg
    row = np.concatenate([mixed, [l_qq * avg_qq[0], l_gg * avg_gg[0]]])
    if not markers:
        return row
    delta_num = 0.5 * (-mixed[C_NN] + abs(mixed[C_KK] + mixed[C_RR]) - mixed[A])
    _, chsh_num = chsh_mixture_means(l_qq, l_gg, beta)
    return np.concatenate([row, [delta_num, chsh_num]])


def _in_beta(cfg: ColliderConfig, func: Callable[[float], np.ndarray]) -> Callable[[float], np.ndarray]:
    """The same integrand after the substitution M = 2 m_top / sqrt(1 - beta^2)."""

    def integrand(beta: float) -> np.ndarray:
        """Integrand times dM/dbeta."""
        m_tt = min(max(mass_of_beta(beta, cfg.m_top), cfg.threshold), cfg.sqrt_s)
        return func(m_tt) * 2.0 * cfg.m_top * beta / (1.0 - beta**2) ** 1.5

    return integrand


@lru_cache(maxsize=256)
def integrate_window(cfg: ColliderConfig, window: MassWindow, markers: bool = False, in_beta: bool = False):
    """
    Integrate the mass integrand over a window.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        window (MassWindow): Invariant-mass window in GeV.
        markers (bool): Also integrate the Delta_Omega and CHSH components.
        in_beta (bool): Integrate in beta instead of M.

    Returns:
        np.ndarray: Integrated components, indexed by A, C_PERP, ... CHSH_NUM.

    Raises:
        EmptyWindow: If the integrated rate is below 1e-30.
        QuadratureFailure: If the mass integral does not converge.
    """
    window.check(cfg)

    def func(m_tt: float) -> np.ndarray:
        """Mass integrand of this collider."""
        return _mass_integrand(cfg, m_tt, markers)

    if in_beta:
        totals = adaptive_quad_vec(
            _in_beta(cfg, func),
            beta_of_mass(window.lo, cfg.m_top),
            beta_of_mass(window.hi, cfg.m_top),
        )
    else:
        span = window.hi - window.lo
        totals = adaptive_quad_vec(func, window.lo, window.hi, points=[window.lo + span * f for f in (1e-2, 0.1, 0.3)])
    if totals[A] < _EMPTY_RATE:
        raise EmptyWindow(f"integrated rate {totals[A]:.3g} in [{window.lo:.6g}, {window.hi:.6g}] GeV is empty")
    totals.setflags(write=False)
    logger.debug("window [%.6g, %.6g] GeV integrated: rate %.6g", window.lo, window.hi, totals[A])
    return totals


def _beam_state(totals: np.ndarray) -> FanoState:
    """Physical beam-basis state from integrated components."""
    c = np.diag([totals[C_PERP], totals[C_PERP], totals[C_Z]])
    return FanoState(a=totals[A], c=c, basis_tag=BASIS_BEAM).normalized()


def _helicity_state(totals: np.ndarray) -> FanoState:
    """Fictitious helicity-basis state from integrated components."""
    c = np.diag([totals[C_KK], totals[C_RR], totals[C_NN]])
    return FanoState(a=totals[A], c=c, basis_tag=BASIS_FICTITIOUS).normalized()


def mass_integrated_state(cfg: ColliderConfig, window: MassWindow, in_beta: bool = False) -> FanoState:
    """
    Spin state of every pair produced inside an invariant-mass window, averaged over all directions.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        window (MassWindow): Invariant-mass window in GeV.
        in_beta (bool): Integrate in beta instead of M.

    Returns:
        FanoState: Normalized beam-basis state with C = diag(C_perp, C_perp, C_z).
    """
    return _beam_state(integrate_window(cfg, window, in_beta=in_beta))


def mass_integrated_helicity(cfg: ColliderConfig, window: MassWindow) -> FanoState:
    """Window average of the helicity-basis correlations; a bookkeeping object, not a physical state."""
    return _helicity_state(integrate_window(cfg, window))


def window_weights(cfg: ColliderConfig, window: MassWindow) -> Tuple[float, float]:
    """Fractions (w_qq, w_gg) of the pairs inside the window coming from each initial state."""
    totals = integrate_window(cfg, window)
    return float(totals[A_QQ] / totals[A]), float(totals[A_GG] / totals[A])


def window_markers(cfg: ColliderConfig, window: MassWindow) -> dict:
    """
    Correlations and entanglement markers of the pairs produced inside a window.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        window (MassWindow): Invariant-mass window in GeV.

    Returns:
        dict: Beam and helicity correlations, D and W, the axial delta and CHSH mu, Delta of the helicity averages,
            the concurrence and the channel fractions.
    """
    totals = integrate_window(cfg, window)
    beam = _beam_state(totals)
    helicity = _helicity_state(totals)
    c_perp, c_z = beam.c[0, 0], beam.c[2, 2]
    d, w = witness_d(beam.c)
    return {
        "cPerp": c_perp,
        "cZ": c_z,
        "cKk": helicity.c[0, 0],
        "cRr": helicity.c[1, 1],
        "cNn": helicity.c[2, 2],
        "d": d,
        "w": w,
        "delta": axial_delta(c_perp, c_z),
        "chshMu": axial_chsh_mu(c_perp, c_z),
        "deltaHelicity": delta_marker(helicity.c),
        "concurrence": concurrence(assemble_density(beam)),
        "wQq": totals[A_QQ] / totals[A],
        "wGg": totals[A_GG] / totals[A],
    }


def delta_high_pt(cfg: ColliderConfig, m_cut: float) -> Tuple[float, float]:
    """
    Rate-weighted means of Delta_Omega(M) and of the angular CHSH value over [m_cut, sqrt_s].

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        m_cut (float): Lower edge in GeV, 2 m_top <= m_cut < sqrt_s.

    Returns:
        Tuple[float, float]: (Delta, B); Delta > 0 signals entanglement and B > 2 CHSH violation.
    """
    cfg.check_mass(m_cut)
    if m_cut >= cfg.sqrt_s:
        raise DomainError(f"m_cut = {m_cut:.6g} GeV must lie below sqrt_s = {cfg.sqrt_s:.6g} GeV")
    totals = integrate_window(cfg, MassWindow(lo=m_cut, hi=cfg.sqrt_s), markers=True)
    return float(totals[DELTA_NUM] / totals[A]), float(totals[CHSH_NUM] / totals[A])


class ThresholdProfile:
    """
    Cumulative mass integrals over threshold windows [2 m_top, M(beta)] for every upper velocity.

    The integrand is tabulated in beta on Gauss-Legendre panels once; a window ending inside a panel adds one more
    partial panel.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        panels (int): Number of equal beta panels up to the largest reachable velocity.
        order (int): Gauss-Legendre nodes per panel.
    """

    def __init__(self, cfg: ColliderConfig, panels: int = 48, order: int = 8) -> None:
        """Tabulate the panels up to the largest reachable velocity."""
        self.cfg = cfg
        self.order = order
        self.beta_max = min(beta_of_mass(cfg.sqrt_s, cfg.m_top), 0.995)
        self.edges = np.linspace(0.0, self.beta_max, panels + 1)
        self._integrand = _in_beta(cfg, lambda m: _mass_integrand(cfg, m))
        pieces = [self._panel(lo, hi) for lo, hi in zip(self.edges[:-1], self.edges[1:])]
        self.cumulative = np.vstack([np.zeros(A_GG + 1), np.cumsum(pieces, axis=0)])

    def _panel(self, lo: float, hi: float) -> np.ndarray:
        """Gauss-Legendre integral of the beta integrand over [lo, hi]."""
        t, w = gauss_legendre(self.order)
        half = (hi - lo) / 2.0
        return half * sum(wi * self._integrand(lo + half * (ti + 1.0)) for ti, wi in zip(t, w))

    def totals(self, beta: float) -> np.ndarray:
        """Integrated components over the window whose upper edge has velocity beta."""
        i = min(int(np.searchsorted(self.edges, beta, side="right")) - 1, len(self.edges) - 2)
        return self.cumulative[i] + self._panel(self.edges[i], beta)

    def marker(self, kind: CriticalKind, beta: float) -> float:
        """Axial delta (PH) or CHSH mu (CH) of the window state; positive while the signature holds."""
        totals = self.totals(beta)
        c_perp, c_z = totals[C_PERP] / totals[A], totals[C_Z] / totals[A]
        return axial_delta(c_perp, c_z) if kind == CriticalKind.PH else axial_chsh_mu(c_perp, c_z)


def critical_beta_vs_energy(cfg: ColliderConfig, kind: CriticalKind, profile: ThresholdProfile = None) -> float:
    """
    Largest upper-edge velocity for which the threshold window [2 m_top, M(beta)] still shows a signature.

    Args:
        cfg (ColliderConfig): Collider and PDF choice.
        kind (CriticalKind): PH for entanglement, CH for CHSH violation.
        profile (ThresholdProfile, optional): Precomputed profile to share between both kinds.

    Returns:
        float: The critical velocity.

    Raises:
        NoSignature: If even the smallest threshold window lacks the signature.
        NoRootInBracket: If the signature survives up to the highest reachable velocity.
    """
    profile = profile or ThresholdProfile(cfg)

    def marker(beta: float) -> float:
        """Signature marker of the window ending at beta."""
        return profile.marker(kind, beta)

    if marker(_SMALLEST_BETA) <= 0.0:
        raise NoSignature(f"no {kind.value} signature at threshold for sqrt_s = {cfg.sqrt_s:.6g} GeV")
    previous = _SMALLEST_BETA
    for edge in profile.edges[1:]:
        if edge <= previous:
            continue
        if marker(edge) <= 0.0:
            beta_c = bisect_root(marker, previous, edge)
            logger.info("%s critical beta at sqrt_s = %.6g GeV: %.6g", kind.value, cfg.sqrt_s, beta_c)
            return beta_c
        previous = edge
    raise NoRootInBracket(f"{kind.value} signature persists up to beta = {profile.beta_max:.6g}")
