import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.special import comb

from ttspin.services.production.kinematics import PartonChannel, mass_of_beta
from ttspin.services.production.lo import helicity_coefficients
from ttspin.services.spinpair.fano import FanoState
from ttspin.services.spinpair.measures import axial_chsh_mu, axial_delta, chsh_value, delta_marker
from ttspin.settings import settings
from ttspin.utils.constants import BASIS_BEAM, BASIS_FICTITIOUS
from ttspin.utils.errors import DomainError, KinematicSingularity, NoRootInBracket
from ttspin.utils.numerics import adaptive_quad, gauss_legendre, scan_roots

logger = logging.getLogger(__name__)

# Below this velocity gluon-fusion averages are integrated in cos(theta) directly.
_RAPIDITY_SWITCH = 0.5


@dataclass(frozen=True)
class AngularAveraged:
    """
    Angular means of the unnormalized production coefficients at fixed velocity.

    Args:
        channel (PartonChannel): Initial state.
        beta (float): Top velocity.
        a_tilde (float): Mean of A~.
        c_perp (float): Mean transverse correlation in the beam basis.
        c_z (float): Mean longitudinal correlation in the beam basis.
        c_rr (float): Mean of C~rr.
        c_nn (float): Mean of C~nn.
        c_kk (float): Mean of C~kk.
    """

    channel: PartonChannel
    beta: float
    a_tilde: float
    c_perp: float
    c_z: float
    c_rr: float
    c_nn: float
    c_kk: float

    @property
    def trace_residual(self) -> float:
        """2 C_perp + C_z - (C_rr + C_nn + C_kk), zero up to rounding."""
        return 2.0 * self.c_perp + self.c_z - (self.c_rr + self.c_nn + self.c_kk)

    def normalized(self) -> dict:
        """Every correlation divided by the mean of A~."""
        return {
            "cPerp": self.c_perp / self.a_tilde,
            "cZ": self.c_z / self.a_tilde,
            "cRr": self.c_rr / self.a_tilde,
            "cNn": self.c_nn / self.a_tilde,
            "cKk": self.c_kk / self.a_tilde,
        }

    def as_vector(self) -> np.ndarray:
        """(A~, C_perp, C_z, C_rr, C_nn, C_kk)."""
        return np.array([self.a_tilde, self.c_perp, self.c_z, self.c_rr, self.c_nn, self.c_kk])

    @classmethod
    def from_vector(cls, channel: PartonChannel, beta: float, v: np.ndarray) -> "AngularAveraged":
        """Inverse of as_vector."""
        return cls(channel, beta, *(float(x) for x in v))


def f_beta(beta: float) -> float:
    """(1 - sqrt(1 - beta^2))^2 / 2, written without cancellation."""
    return 0.5 * (beta**2 / (1.0 + np.sqrt(1.0 - beta**2))) ** 2


def _atanh_ratio(beta: float) -> Tuple[float, float]:
    """atanh(beta)/beta and (atanh(beta)/beta - 1)/beta^2, from their series at small beta."""
    b2 = beta**2
    if beta < settings.SMALL_BETA:
        ratio = 1.0 + b2 / 3.0 + b2**2 / 5.0 + b2**3 / 7.0
        return ratio, 1.0 / 3.0 + b2 / 5.0 + b2**2 / 7.0 + b2**3 / 9.0
    ratio = float(np.arctanh(beta) / beta)
    return ratio, (ratio - 1.0) / b2


def g_beta(beta: float) -> float:
    """Correction to the gluon-fusion beam-basis averages."""
    b2 = beta**2
    f = f_beta(beta)
    if beta < settings.SMALL_BETA:
        return f / 96.0 * (8.0 / 15.0 * b2 + 184.0 / 315.0 * b2**2 + 104.0 / 231.0 * b2**3)
    ratio, _ = _atanh_ratio(beta)
    bracket = 49.0 - 149.0 / 3.0 * b2 + 24.0 / 5.0 * b2**2 - (49.0 - 66.0 * b2 + 17.0 * b2**2) * ratio
    return f / (96.0 * b2**2) * bracket


def _check_beta(ch: PartonChannel, beta: float) -> None:
    """Velocities in [0, 1], excluding beta = 1 for gluon fusion."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta:.6g}")
    if ch == PartonChannel.GG and beta >= 1.0:
        raise KinematicSingularity("gluon-fusion angular averages diverge at beta = 1")


def angular_avg(ch: PartonChannel, beta: float) -> AngularAveraged:
    """
    Closed-form angular averages of the production coefficients.

    Args:
        ch (PartonChannel): Initial state.
        beta (float): Top velocity in [0, 1) (q qbar also accepts 1).

    Returns:
        AngularAveraged: Means over cos(theta) in [-1, 1].
    """
    _check_beta(ch, beta)
    b2 = beta**2
    f = f_beta(beta)
    if ch == PartonChannel.QQBAR:
        a = (1.0 - b2 / 3.0) / 9.0
        return AngularAveraged(
            channel=ch,
            beta=beta,
            a_tilde=a,
            c_perp=2.0 * f / 135.0,
            c_z=a - 4.0 * f / 135.0,
            c_rr=(2.0 - b2) / 27.0,
            c_nn=-b2 / 27.0,
            c_kk=(1.0 + b2) / 27.0,
        )
    ratio, ratio_m1 = _atanh_ratio(beta)
    g = g_beta(beta)
    b4 = b2**2
    return AngularAveraged(
        channel=ch,
        beta=beta,
        a_tilde=(-59.0 + 31.0 * b2 + (66.0 - 36.0 * b2 + 2.0 * b4) * ratio) / 192.0,
        c_perp=(1.0 - b2) / 192.0 * (9.0 - 16.0 * ratio) + g,
        c_z=(-109.0 + 49.0 * b2 + (102.0 - 72.0 * b2 + 2.0 * b4) * ratio) / 192.0 - 2.0 * g,
        c_rr=-(87.0 - 31.0 * b2 + 66.0 * ratio_m1 - (102.0 - 38.0 * b2 + 2.0 * b4) * ratio) / 192.0,
        c_nn=-(41.0 - 31.0 * b2 - (34.0 - 36.0 * b2 + 2.0 * b4) * ratio) / 192.0,
        c_kk=-(-37.0 + 31.0 * b2 - 66.0 * ratio_m1 + (66.0 - 34.0 * b2 + 2.0 * b4) * ratio) / 192.0,
    )


def _angular_nodes(ch: PartonChannel, beta: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature nodes in cos(theta) and weights for the mean over [-1, 1].

    Gluon fusion at larger beta is integrated in u = atanh(beta cos(theta)), which absorbs one power of the
    forward peak 1 / (1 - beta^2 cos^2(theta)).
    """
    t, w = gauss_legendre(nodes)
    if ch == PartonChannel.QQBAR or beta < _RAPIDITY_SWITCH:
        return t, w / 2.0
    u_max = float(np.arctanh(beta))
    u = u_max * t
    jacobian = u_max / (beta * np.cosh(u) ** 2)
    return np.clip(np.tanh(u) / beta, -1.0, 1.0), w * jacobian / 2.0


def _pointwise(ch: PartonChannel, beta: float, cos_theta: np.ndarray) -> np.ndarray:
    """Rows (A~, C_perp, C_z, C~rr, C~nn, C~kk) at each angle."""
    a, c_kk, c_rr, c_nn, c_kr = helicity_coefficients(ch, beta, cos_theta)
    c = np.asarray(cos_theta, dtype=float)
    s = np.sqrt(np.clip(1.0 - c**2, 0.0, None))
    c_z = c_kk * c**2 + c_rr * s**2 + 2.0 * c_kr * s * c
    c_perp = (c_kk + c_rr + c_nn - c_z) / 2.0
    return np.vstack(np.broadcast_arrays(a, c_perp, c_z, c_rr, c_nn, c_kk))


def angular_avg_numeric(ch: PartonChannel, beta: float, nodes: Optional[int] = None) -> AngularAveraged:
    """
    Gauss-Legendre angular averages of the pointwise coefficients.

    Args:
        ch (PartonChannel): Initial state.
        beta (float): Top velocity.
        nodes (int, optional): Number of nodes, defaults to settings.GAUSS_NODES.

    Returns:
        AngularAveraged: Same content as angular_avg, from quadrature.
    """
    _check_beta(ch, beta)
    c, w = _angular_nodes(ch, beta, nodes or settings.GAUSS_NODES)
    return AngularAveraged.from_vector(ch, beta, _pointwise(ch, beta, c) @ w)


def knm(n: int, m: int, x: float) -> float:
    """
    K_{n,m}(x), the integral of z^{2n} / (1 - z^2)^m over [-x, x].

    For x >= 1/2 the values follow from K_{n,0} = 2 x^{2n+1} / (2n+1), K_{0,1} = 2 atanh(x), the reduction
    K_{0,m} = [x / (1 - x^2)^{m-1} + (2m - 3)/2 K_{0,m-1}] / (m - 1) and K_{n,m} = K_{n-1,m} - K_{n-1,m-1}. Below
    1/2 that recursion loses digits, and the positive power series in x^2 is summed instead.

    Args:
        n (int): Power of z^2 in the numerator, >= 0.
        m (int): Power of (1 - z^2) in the denominator, >= 0.
        x (float): Half-width in [0, 1).

    Returns:
        float: The integral.

    Raises:
        DomainError: For negative orders or x outside [0, 1).
    """
    if n < 0 or m < 0:
        raise DomainError(f"orders must be non-negative, got n = {n}, m = {m}")
    if not 0.0 <= x < 1.0:
        raise DomainError(f"x must lie in [0, 1), got {x:.6g}")
    if m == 0:
        return 2.0 * x ** (2 * n + 1) / (2 * n + 1)
    if x < 0.5:
        k = np.arange(120)
        powers = 2 * n + 2 * k + 1
        return float(np.sum(comb(m - 1 + k, k) * 2.0 * x**powers / powers))

    table = np.zeros((n + 1, m + 1))
    table[:, 0] = [2.0 * x ** (2 * i + 1) / (2 * i + 1) for i in range(n + 1)]
    table[0, 1] = 2.0 * np.arctanh(x)
    for j in range(2, m + 1):
        table[0, j] = (x / (1.0 - x**2) ** (j - 1) + (2 * j - 3) / 2.0 * table[0, j - 1]) / (j - 1)
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            table[i, j] = table[i - 1, j] - table[i - 1, j - 1]
    return float(table[n, m])


def _pointwise_chsh(
    weights: Dict[PartonChannel, float], beta: float, cos_theta: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """A~ of a channel mixture and the CHSH value of its normalized state at each angle."""
    cos_theta = np.atleast_1d(cos_theta)
    total = np.zeros((5, len(cos_theta)))
    for ch, weight in weights.items():
        if weight:
            total += weight * np.vstack(np.broadcast_arrays(*helicity_coefficients(ch, beta, cos_theta)))
    a, c_kk, c_rr, c_nn, c_kr = total
    values = np.empty_like(a)
    for i in range(len(a)):
        c = np.array([[c_kk[i], c_kr[i], 0.0], [c_kr[i], c_rr[i], 0.0], [0.0, 0.0, c_nn[i]]]) / a[i]
        values[i] = chsh_value(c)
    return a, values


def chsh_mixture_means(l_qq: float, l_gg: float, beta: float) -> Tuple[float, float]:
    """
    Angular means of A~ and A~ B for the mixture l_qq R^qqbar + l_gg R^gg.

    Args:
        l_qq (float): Non-negative weight of q qbar annihilation, e.g. its luminosity.
        l_gg (float): Non-negative weight of gluon fusion.
        beta (float): Top velocity in [0, 1).

    Returns:
        Tuple[float, float]: (<A~>, <A~ B>).
    """
    weights = {PartonChannel.QQBAR: l_qq, PartonChannel.GG: l_gg}
    nodes_from = PartonChannel.GG if l_gg else PartonChannel.QQBAR
    _check_beta(nodes_from, beta)
    if l_qq + l_gg <= 0.0:
        return 0.0, 0.0
    c, w = _angular_nodes(nodes_from, beta, settings.GAUSS_NODES)
    a, values = _pointwise_chsh(weights, beta, c)
    return float(np.dot(w, a)), float(np.dot(w, a * values))


def chsh_angular_avg(ch: PartonChannel, beta: float, adaptive: bool = False) -> float:
    """
    Cross-section weighted angular mean of the pointwise CHSH value, <A~ B> / <A~>.

    Args:
        ch (PartonChannel): Initial state.
        beta (float): Top velocity.
        adaptive (bool): Use adaptive quadrature in cos(theta) instead of the fixed Gauss-Legendre rule.

    Returns:
        float: The averaged CHSH value; above 2 signals violation.
    """
    _check_beta(ch, beta)
    if adaptive:

        def weighted(c: float) -> float:
            """A~ times the CHSH value at one angle."""
            a, value = _pointwise_chsh({ch: 1.0}, beta, np.array([c]))
            return float(a[0] * value[0])

        numerator = adaptive_quad(weighted, -1.0, 1.0, epsrel=1e-10, epsabs=0.0)
        return numerator / (2.0 * angular_avg(ch, beta).a_tilde)
    c, w = _angular_nodes(ch, beta, settings.GAUSS_NODES)
    a, values = _pointwise_chsh({ch: 1.0}, beta, c)
    return float(np.dot(w, a * values) / np.dot(w, a))


def delta_omega(avg: AngularAveraged) -> float:
    """Delta marker of the helicity-basis averages, (-C_nn + |C_kk + C_rr| - A) / (2A)."""
    return delta_marker(np.diag([avg.c_kk, avg.c_rr, avg.c_nn]) / avg.a_tilde)


def delta_axial_omega(avg: AngularAveraged) -> float:
    """(-C_z + 2|C_perp| - 1) / 2 of the normalized beam-basis averages; positive iff entangled."""
    return axial_delta(avg.c_perp / avg.a_tilde, avg.c_z / avg.a_tilde)


def chsh_mu_omega(avg: AngularAveraged) -> float:
    """max(2 C_perp^2, C_perp^2 + C_z^2) - 1 of the normalized beam-basis averages."""
    return axial_chsh_mu(avg.c_perp / avg.a_tilde, avg.c_z / avg.a_tilde)


def averaged_state(avg: AngularAveraged) -> FanoState:
    """Physical angular-averaged state, diagonal in the beam basis."""
    return FanoState(a=avg.a_tilde, c=np.diag([avg.c_perp, avg.c_perp, avg.c_z]), basis_tag=BASIS_BEAM).normalized()


def helicity_averaged_state(avg: AngularAveraged) -> FanoState:
    """Fictitious state built from the helicity-basis averages; not a physical spin state."""
    return FanoState(
        a=avg.a_tilde,
        c=np.diag([avg.c_kk, avg.c_rr, avg.c_nn]),
        basis_tag=BASIS_FICTITIOUS,
    ).normalized()


def _first_gg_root(func: Callable[[float], float], lo: float, hi: float, label: str) -> float:
    """First sign change of a function of the gluon-fusion velocity."""
    roots = scan_roots(func, lo, hi, points=512)
    if not roots:
        raise NoRootInBracket(f"no {label} in beta = [{lo:.6g}, {hi:.6g}]")
    return roots[0]


def axial_criticals_gg(m_top: Optional[float] = None) -> Tuple[float, float, float, float]:
    """
    Velocities and masses below which averaged gluon fusion is entangled and violates CHSH.

    Args:
        m_top (float, optional): Top mass in GeV, defaults to settings.M_TOP.

    Returns:
        Tuple[float, float, float, float]: (beta_ph, m_ph, beta_ch, m_ch).
    """
    gg = PartonChannel.GG
    beta_ph = _first_gg_root(lambda b: delta_axial_omega(angular_avg(gg, b)), 0.0, 0.999, "entanglement boundary")
    beta_ch = _first_gg_root(lambda b: chsh_mu_omega(angular_avg(gg, b)), 0.0, 0.999, "CHSH boundary")
    return beta_ph, mass_of_beta(beta_ph, m_top), beta_ch, mass_of_beta(beta_ch, m_top)


def c_perp_crossover_gg() -> float:
    """Velocity where the averaged gluon-fusion C_perp changes sign."""
    return _first_gg_root(lambda b: angular_avg(PartonChannel.GG, b).c_perp, 0.5, 0.9999, "C_perp sign change")


def beta_delta_gg() -> float:
    """Velocity where C_kk + C_rr of the averaged gluon fusion changes sign."""
    def trace_kr(beta: float) -> float:
        """C_kk + C_rr of the averages."""
        avg = angular_avg(PartonChannel.GG, beta)
        return avg.c_kk + avg.c_rr

    return _first_gg_root(trace_kr, 0.0, 0.9999, "C_kk + C_rr sign change")


def qqbar_delta_omega(beta: float) -> float:
    """beta^2 / (3 - beta^2)."""
    return beta**2 / (3.0 - beta**2)


def qqbar_chsh_angular_closed(beta: float) -> float:
    """q qbar CHSH mean 2 I / (2 - 2 beta^2 / 3), I the angular mean of sqrt((2 - b s^2)^2 + b^2 s^4), b = beta^2."""
    def integrand(c: float) -> float:
        """Integrand over cos(theta)."""
        x = beta**2 * (1.0 - c**2)
        return float(np.sqrt((2.0 - x) ** 2 + x**2))

    mean = adaptive_quad(integrand, -1.0, 1.0, epsrel=1e-12, epsabs=0.0) / 2.0
    return 2.0 * mean / (2.0 - 2.0 * beta**2 / 3.0)
