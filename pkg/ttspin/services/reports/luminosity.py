import logging
from dataclasses import dataclass

import numpy as np

from ttspin.schemas import LUMINOSITY
from ttspin.services.base import SpinReportBase
from ttspin.services.pdf.luminosity import channel_weights, luminosity
from ttspin.services.production.kinematics import PartonChannel
from ttspin.utils.errors import DegenerateNormalization, DomainError

logger = logging.getLogger(__name__)


@dataclass
class SpinLuminosity(SpinReportBase):
    """
    Parton luminosities and channel weights along the invariant mass.

    Args:
        m_lo (float, optional): Lowest mass in GeV, 2 m_top by default.
        m_hi (float, optional): Highest mass in GeV, sqrt_s by default.
        points (int): Number of masses, at least 2.
    """

    m_lo: float = None
    m_hi: float = None
    points: int = 20

    def __post_init__(self) -> None:
        """Fill in the mass range and check it."""
        self.m_lo = self.cfg.threshold if self.m_lo is None else self.m_lo
        self.m_hi = self.cfg.sqrt_s if self.m_hi is None else self.m_hi
        self.cfg.check_mass(self.m_lo)
        self.cfg.check_mass(self.m_hi)
        if self.points < 2:
            raise DomainError(f"need at least 2 masses, got {self.points}")
        if not self.m_lo < self.m_hi:
            raise DomainError(f"mass range [{self.m_lo:.6g}, {self.m_hi:.6g}] GeV is empty")

    def __parse_mass(self, m_tt: float) -> dict:
        """One row of the table; the weights are None where both luminosities vanish."""
        try:
            w_qq, w_gg = channel_weights(self.cfg, m_tt)
        except DegenerateNormalization:
            w_qq, w_gg = None, None
        return {
            "mTt": m_tt,
            "x": m_tt / self.cfg.sqrt_s,
            "lQq": luminosity(self.cfg, PartonChannel.QQBAR, m_tt),
            "lGg": luminosity(self.cfg, PartonChannel.GG, m_tt),
            "wQq": w_qq,
            "wGg": w_gg,
        }

    def get_luminosity(self) -> dict:
        """
        Tabulate the luminosities on an even mass grid.

        Returns:
            dict: The collider and the rows.
        """
        self.rows = [self.__parse_mass(float(m)) for m in np.linspace(self.m_lo, self.m_hi, self.points)]
        logger.info("luminosity table: %d masses in [%.6g, %.6g] GeV", len(self.rows), self.m_lo, self.m_hi)
        self.response["collider"] = self.collider_info()
        self.response["rows"] = self.rows

        return self.finalize(LUMINOSITY)
