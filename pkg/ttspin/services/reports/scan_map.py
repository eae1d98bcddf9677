import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ttspin.schemas import SCAN_MAP
from ttspin.services.base import SpinReportBase
from ttspin.services.pdf.luminosity import hadronic_pair_state
from ttspin.services.production.criticals import critical_beta_ch, critical_beta_ph_gg
from ttspin.services.production.kinematics import Kinematics, PartonChannel, mass_of_beta
from ttspin.services.production.lo import mixture_state, pair_state
from ttspin.services.spinpair.fano import FanoState, assemble_density
from ttspin.services.spinpair.measures import chsh_value, concurrence, delta_marker
from ttspin.utils.errors import DomainError, NoRootInBracket

logger = logging.getLogger(__name__)

SCAN_KINDS = ("qqbar", "gg", "mixture", "hadronic")
BETA_MAX = 0.999


@dataclass
class SpinScanMap(SpinReportBase):
    """
    Concurrence and entanglement markers on a (beta, theta) grid.

    Args:
        kind (str): "qqbar" or "gg" for a single initial state, "mixture" for a constant-weight mixture of both, or
            "hadronic" for the luminosity-weighted state of the configured collider.
        n_beta (int): Number of velocities in [0, 0.999].
        n_theta (int): Number of production angles in [0, pi].
        w_gg (float, optional): Gluon-fusion weight of the mixture.
    """

    kind: str = "gg"
    n_beta: int = 50
    n_theta: int = 50
    w_gg: Optional[float] = None
    _criticals: Dict[float, dict] = field(default_factory=lambda: {}, init=False, repr=False)

    def __post_init__(self) -> None:
        """Validate the map kind and the grid."""
        if self.kind not in SCAN_KINDS:
            raise DomainError(f"scan kind must be one of {', '.join(SCAN_KINDS)}, got {self.kind!r}")
        if self.n_beta < 2 or self.n_theta < 2:
            raise DomainError(f"grid resolutions must be >= 2, got {self.n_beta}x{self.n_theta}")
        if self.kind == "mixture" and (self.w_gg is None or not 0.0 <= self.w_gg <= 1.0):
            raise DomainError(f"a mixture map needs w_gg in [0, 1], got {self.w_gg}")
        self.betas = np.linspace(0.0, BETA_MAX, self.n_beta)
        self.thetas = np.linspace(0.0, np.pi, self.n_theta)

    def __state(self, beta: float, theta: float) -> FanoState:
        """Spin state at one grid point."""
        if self.kind == "hadronic":
            return hadronic_pair_state(self.cfg, mass_of_beta(beta, self.cfg.m_top), theta)
        kin = Kinematics.from_beta(beta, theta, self.cfg.m_top)
        if self.kind == "mixture":
            return mixture_state(self.w_gg, kin)
        return pair_state(PartonChannel(self.kind), kin)

    def __criticals(self, theta: float) -> dict:
        """Critical velocities at one angle; None where no boundary exists."""
        if theta in self._criticals:
            return self._criticals[theta]
        ph: Tuple[Optional[float], Optional[float]] = (None, None)
        ch: Tuple[Optional[float], Optional[float]] = (None, None)
        if 0.0 < theta < np.pi:
            channel = PartonChannel(self.kind)
            ph = critical_beta_ph_gg(theta) if channel == PartonChannel.GG else (0.0, None)
            try:
                ch = critical_beta_ch(channel, theta)
            except NoRootInBracket:
                logger.debug("no CHSH boundary at theta = %.6g", theta)
        self._criticals[theta] = {"betaPh1": ph[0], "betaPh2": ph[1], "betaCh1": ch[0], "betaCh2": ch[1]}
        return self._criticals[theta]

    def __parse_point(self, beta: float, theta: float) -> dict:
        """One row of the map."""
        state = self.__state(beta, theta)
        row = {"beta": beta, "theta": theta, "concurrence": concurrence(assemble_density(state))}
        if self.kind == "hadronic":
            return row
        chsh = chsh_value(state.c)
        delta = delta_marker(state.c)
        row.update(
            {
                "delta": delta,
                "chsh": chsh,
                "entangled": delta > 0.0,
                "chshViolated": chsh > 2.0,
            },
        )
        if self.kind in ("qqbar", "gg"):
            row.update(self.__criticals(theta))
        return row

    def __parse_rows(self) -> list:
        """Rows in beta-major order; hadronic maps stop at the collider energy."""
        betas = self.betas
        if self.kind == "hadronic":
            betas = [b for b in betas if mass_of_beta(b, self.cfg.m_top) < self.cfg.sqrt_s]
        return [self.__parse_point(float(beta), float(theta)) for beta in betas for theta in self.thetas]

    def get_scan_map(self) -> dict:
        """
        Compute the map.

        Returns:
            dict: The kind, the grid resolutions, the mixture weight or collider where relevant, and the rows.
        """
        self.rows = self.__parse_rows()
        logger.info("%s map: %d points", self.kind, len(self.rows))
        self.response["kind"] = self.kind
        self.response["grid"] = [self.n_beta, self.n_theta]
        if self.kind == "mixture":
            self.response["wGg"] = self.w_gg
        if self.kind == "hadronic":
            self.response["collider"] = self.collider_info()
        self.response["rows"] = self.rows

        return self.finalize(SCAN_MAP)
