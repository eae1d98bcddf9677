import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ttspin.schemas import OBSERVABLES
from ttspin.services.base import SpinReportBase
from ttspin.services.collider import Beam, MassWindow
from ttspin.services.phase_space.integrated import delta_high_pt, window_markers
from ttspin.services.production.kinematics import beta_of_mass
from ttspin.services.spinpair.measures import chsh_value
from ttspin.utils.errors import DomainError

logger = logging.getLogger(__name__)

THRESHOLD = "threshold"
HIGH_PT = "high-pt"


@dataclass
class SpinObservables(SpinReportBase):
    """
    Integrated spin correlations and markers as functions of an invariant-mass cut.

    Threshold mode integrates [2 m_top, m_cut]; high-pt mode integrates [m_cut, sqrt_s] and reports the rate-weighted
    angular markers, which is how the high-energy region is probed.

    Args:
        m_cuts (List[float]): Mass cuts in GeV.
        mode (str, optional): "threshold" or "high-pt"; threshold for pp and high-pt for ppbar when omitted.
    """

    m_cuts: List[float] = field(default_factory=lambda: list(np.linspace(350.0, 1000.0, 14)))
    mode: Optional[str] = None

    def __post_init__(self) -> None:
        """Pick the mode and check the cuts against the collider."""
        if self.mode is None:
            self.mode = THRESHOLD if self.cfg.beam == Beam.PP else HIGH_PT
        if self.mode not in (THRESHOLD, HIGH_PT):
            raise DomainError(f"mode must be {THRESHOLD} or {HIGH_PT}, got {self.mode!r}")
        for m_cut in self.m_cuts:
            self.cfg.check_mass(m_cut)
            if m_cut == (self.cfg.threshold if self.mode == THRESHOLD else self.cfg.sqrt_s):
                raise DomainError(f"m_cut = {m_cut:.6g} GeV leaves an empty {self.mode} window")

    def __window(self, m_cut: float) -> MassWindow:
        """Window selected by one cut."""
        if self.mode == THRESHOLD:
            return MassWindow(lo=self.cfg.threshold, hi=m_cut)
        return MassWindow(lo=m_cut, hi=self.cfg.sqrt_s)

    def __parse_cut(self, m_cut: float) -> dict:
        """One row of the table."""
        markers = window_markers(self.cfg, self.__window(m_cut))
        c_perp, c_z = markers["cPerp"], markers["cZ"]
        if self.mode == THRESHOLD:
            delta = markers["delta"]
            chsh = chsh_value(np.diag([c_perp, c_perp, c_z]))
        else:
            delta, chsh = delta_high_pt(self.cfg, m_cut)
        return {
            "mCut": m_cut,
            "beta": beta_of_mass(m_cut, self.cfg.m_top),
            "cPerp": c_perp,
            "cZ": c_z,
            "d": markers["d"],
            "delta": delta,
            "deltaHelicity": markers["deltaHelicity"],
            "chshHalf": chsh / 2.0,
            "cRr": markers["cRr"],
            "cNn": markers["cNn"],
            "cKk": markers["cKk"],
            "wGg": markers["wGg"],
        }

    def get_observables(self) -> dict:
        """
        Compute one row per mass cut.

        Returns:
            dict: The collider, the mode and the rows.
        """
        self.rows = [self.__parse_cut(float(m_cut)) for m_cut in self.m_cuts]
        logger.info("%s observables: %d cuts", self.mode, len(self.rows))
        self.response["collider"] = self.collider_info()
        self.response["mode"] = self.mode
        self.response["rows"] = self.rows

        return self.finalize(OBSERVABLES)
