import logging
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ttspin.services.pdf.grid import PdfSet, parse_lhagrid
from ttspin.services.pdf.toy import TOY_SETS
from ttspin.settings import settings
from ttspin.utils.errors import AboveEnergy, BelowThreshold, DataError

logger = logging.getLogger(__name__)


class Beam(str, Enum):
    """Colliding hadrons."""

    PP = "pp"
    PPBAR = "ppbar"


class QScaleRule(str, Enum):
    """Choice of the factorization scale."""

    MTT = "mtt"
    MTT_HALF = "mtt/2"
    FIXED = "fixed"


class Interpolation(str, Enum):
    """Grid interpolation order in (ln x, ln Q^2)."""

    BILINEAR = "bilinear"
    BICUBIC = "bicubic"


def parse_q_scale(text: str) -> Tuple[QScaleRule, Optional[float]]:
    """
    Parse a scale choice of the form mtt, mtt/2 or fixed:GEV.

    Raises:
        ValueError: If the text is not one of these forms.
    """
    rule, _, value = text.partition(":")
    try:
        rule = QScaleRule(rule.lower())
    except ValueError:
        raise ValueError(f"q-scale must be mtt, mtt/2 or fixed:GEV, got {text!r}")
    if rule == QScaleRule.FIXED:
        try:
            return rule, float(value)
        except ValueError:
            raise ValueError(f"fixed q-scale needs a value in GeV, got {text!r}")
    if value:
        raise ValueError(f"only the fixed q-scale takes a value, got {text!r}")
    return rule, None


class ColliderConfig(BaseModel):
    """Hadron collider, coupling and PDF choice for every hadronic computation."""

    model_config = ConfigDict(frozen=True)

    beam: Beam = Beam.PP
    sqrt_s: float = Field(default=13000.0, gt=0.0)
    m_top: float = Field(default_factory=lambda: settings.M_TOP, gt=0.0)
    alpha_s: float = Field(default_factory=lambda: settings.ALPHA_S, gt=0.0)
    q_scale_rule: QScaleRule = QScaleRule.MTT
    q_fixed: Optional[float] = Field(default=None, gt=0.0)
    pdf: str = "toy-v1"
    interpolation: Interpolation = Interpolation.BILINEAR
    freeze_below_floor: bool = False
    clamp_negative: bool = False

    @model_validator(mode="after")
    def check_energy_and_scale(self) -> "ColliderConfig":
        """Require an energy above threshold and a value for the fixed scale."""
        if self.sqrt_s <= 2.0 * self.m_top:
            raise ValueError(f"sqrt_s = {self.sqrt_s} GeV must exceed 2 m_top = {2.0 * self.m_top} GeV")
        if self.q_scale_rule == QScaleRule.FIXED and self.q_fixed is None:
            raise ValueError("q_fixed is required with the fixed scale rule")
        return self

    @property
    def threshold(self) -> float:
        """Pair production threshold 2 m_top in GeV."""
        return 2.0 * self.m_top

    def q_scale(self, m_tt: float) -> float:
        """Factorization scale in GeV at invariant mass m_tt."""
        if self.q_scale_rule == QScaleRule.FIXED:
            return self.q_fixed
        return m_tt / 2.0 if self.q_scale_rule == QScaleRule.MTT_HALF else m_tt

    def check_mass(self, m_tt: float) -> None:
        """
        Require 2 m_top <= m_tt <= sqrt_s.

        Raises:
            BelowThreshold: Below 2 m_top.
            AboveEnergy: Above sqrt_s.
        """
        if m_tt < self.threshold:
            raise BelowThreshold(f"m_tt = {m_tt:.6g} GeV is below threshold {self.threshold:.6g} GeV")
        if m_tt > self.sqrt_s:
            raise AboveEnergy(f"m_tt = {m_tt:.6g} GeV exceeds sqrt_s = {self.sqrt_s:.6g} GeV")

    def pdf_set(self) -> PdfSet:
        """The parton densities named by pdf."""
        return load_pdf(self.pdf, self.interpolation.value, self.freeze_below_floor, self.clamp_negative)


class MassWindow(BaseModel):
    """Invariant-mass window [lo, hi] in GeV."""

    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float

    @model_validator(mode="after")
    def check_order(self) -> "MassWindow":
        """Require lo < hi."""
        if not self.lo < self.hi:
            raise ValueError(f"window must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        return self

    def check(self, cfg: ColliderConfig) -> None:
        """Require 2 m_top <= lo and hi <= sqrt_s."""
        cfg.check_mass(self.lo)
        cfg.check_mass(self.hi)


@lru_cache(maxsize=8)
def load_pdf(
    pdf: str,
    interpolation: str = Interpolation.BILINEAR.value,
    freeze_below_floor: bool = False,
    clamp_negative: bool = False,
) -> PdfSet:
    """
    Resolve a builtin toy set by name or parse a grid file.

    Args:
        pdf (str): "toy-v1", "toy-gluon-only", "toy-quark-only" or the path of an lhagrid1 member file.
        interpolation (str): "bilinear" or "bicubic".
        freeze_below_floor (bool): Freeze x below the grid floor.
        clamp_negative (bool): Clamp negative interpolated values to zero.

    Returns:
        PdfSet: Parton densities.

    Raises:
        DataError: If the file cannot be read.
    """
    if pdf in TOY_SETS:
        return TOY_SETS[pdf]
    path = Path(pdf)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read PDF grid {pdf!r}: {exc.strerror}")
    logger.info("loading PDF grid %s", path)
    return parse_lhagrid(
        text,
        name=path.stem,
        interpolation=interpolation,
        freeze_below_floor=freeze_below_floor,
        clamp_negative=clamp_negative,
    )
