from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from ttspin.schemas import TOMOGRAPHY
from ttspin.services.base import SpinReportBase
from ttspin.services.collider import MassWindow
from ttspin.services.tomography.decay import DecayConfig
from ttspin.services.tomography.estimate import MIN_EVENTS, tomography_report
from ttspin.utils.errors import InsufficientSample


@dataclass
class SpinTomography(SpinReportBase):
    """
    Simulated dilepton tomography of the pairs produced in a mass window.

    Args:
        lo (float): Lower window edge in GeV.
        hi (float): Upper window edge in GeV.
        n (int): Number of events.
        seed (int): Event generator seed.
        decay (DecayConfig): Spin analyzing powers.
        streams (int): Number of generator streams.
        events_path (Union[str, Path], optional): Where to write the events as CSV.
    """

    lo: float = 346.0
    hi: float = 400.0
    n: int = 100_000
    seed: int = 0
    decay: DecayConfig = field(default_factory=DecayConfig)
    streams: int = 1
    events_path: Optional[Union[str, Path]] = None

    def __post_init__(self) -> None:
        """Build the window and check the sample size."""
        self.window = MassWindow(lo=self.lo, hi=self.hi)
        self.window.check(self.cfg)
        if self.n < MIN_EVENTS:
            raise InsufficientSample(f"tomography needs at least {MIN_EVENTS} events, got {self.n}")

    def get_tomography(self) -> dict:
        """
        Generate the events and reconstruct the state under every assumption tier.

        Returns:
            dict: The collider, the window and the tomography results.
        """
        self.response["collider"] = self.collider_info()
        self.response["window"] = [self.lo, self.hi]
        self.response.update(
            tomography_report(
                self.cfg,
                self.window,
                self.n,
                seed=self.seed,
                decay=self.decay,
                streams=self.streams,
                events_path=self.events_path,
            ),
        )
        self.rows = [
            {"tier": name, "parameterCount": tier["parameterCount"], **tier["markers"], **tier["projected"]}
            for name, tier in self.response["tiers"].items()
        ]
        for row in self.rows:
            row.pop("correlations")

        return self.finalize(TOMOGRAPHY)
