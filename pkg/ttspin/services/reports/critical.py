import logging
from dataclasses import dataclass, field
from typing import List

from ttspin.schemas import CRITICAL
from ttspin.services.base import SpinReportBase
from ttspin.services.collider import Beam, ColliderConfig
from ttspin.services.pdf.luminosity import channel_weights, gluon_fraction
from ttspin.services.phase_space.integrated import CriticalKind, ThresholdProfile, critical_beta_vs_energy
from ttspin.utils.errors import DomainError, NoRootInBracket, NoSignature

logger = logging.getLogger(__name__)


@dataclass
class SpinCriticalScan(SpinReportBase):
    """
    Gluon fractions and threshold-side critical velocities against the collider energy.

    Args:
        energies (List[float]): Center-of-mass energies in GeV.
        beams (List[Beam]): Beams to scan, both by default.
    """

    energies: List[float] = field(default_factory=lambda: [2000.0, 5000.0, 8000.0, 13000.0])
    beams: List[Beam] = field(default_factory=lambda: [Beam.PP, Beam.PPBAR])

    def __post_init__(self) -> None:
        """Require at least one energy above threshold."""
        if not self.energies:
            raise DomainError("at least one energy is needed")
        for sqrt_s in self.energies:
            if sqrt_s <= self.cfg.threshold:
                raise DomainError(f"sqrt_s = {sqrt_s:.6g} GeV must exceed 2 m_top = {self.cfg.threshold:.6g} GeV")

    def __collider(self, beam: Beam, sqrt_s: float) -> ColliderConfig:
        """The configured collider with another beam and energy."""
        return ColliderConfig(**{**self.cfg.model_dump(), "beam": beam, "sqrt_s": sqrt_s})

    @staticmethod
    def __critical(cfg: ColliderConfig, kind: CriticalKind, profile: ThresholdProfile) -> tuple:
        """(critical velocity or None, whether the threshold shows the signature)."""
        try:
            return critical_beta_vs_energy(cfg, kind, profile), True
        except NoSignature:
            return None, False
        except NoRootInBracket:
            return None, True

    def __parse_point(self, beam: Beam, sqrt_s: float) -> dict:
        """One row of the scan."""
        cfg = self.__collider(beam, sqrt_s)
        profile = ThresholdProfile(cfg)
        beta_ph, ph = self.__critical(cfg, CriticalKind.PH, profile)
        beta_ch, ch = self.__critical(cfg, CriticalKind.CH, profile)
        _, w_gg = channel_weights(cfg, cfg.threshold)
        return {
            "beam": beam.value,
            "sqrtS": sqrt_s,
            "fGg": gluon_fraction(cfg),
            "wGgThreshold": w_gg,
            "betaPh": beta_ph,
            "betaCh": beta_ch,
            "phSignature": ph,
            "chSignature": ch,
        }

    def get_critical(self) -> dict:
        """
        Compute one row per beam and energy.

        Returns:
            dict: The base collider and the rows, beam-major.
        """
        self.rows = [self.__parse_point(Beam(beam), float(sqrt_s)) for beam in self.beams for sqrt_s in self.energies]
        self.response["collider"] = self.collider_info()
        self.response["rows"] = self.rows

        return self.finalize(CRITICAL)
