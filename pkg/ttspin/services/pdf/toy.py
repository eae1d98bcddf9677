from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ttspin.services.pdf.grid import PdfSet
from ttspin.utils.constants import PDG_GLUON
from ttspin.utils.errors import OutOfRange

TOY_FLAVORS = (-5, -4, -3, -2, -1, 1, 2, 3, 4, 5, PDG_GLUON)


@dataclass(frozen=True)
class ToyPdf(PdfSet):
    """
    Analytic, scale-independent parton densities for hermetic tests.

    x g = a_gluon (1 - x)^gluon_power, x u_v = a_u_valence x^0.5 (1 - x)^3, x d_v = a_d_valence x^0.5 (1 - x)^3 and
    every light sea parton (u bar, d bar, s, s bar) carries x f = a_sea (1 - x)^sea_power. Charm and bottom vanish.

    Args:
        name (str): Set name.
        a_gluon (float): Gluon normalization.
        gluon_power (float): Large-x power of the gluon.
        a_u_valence (float): Up valence normalization; 2.187 gives two valence up quarks.
        a_d_valence (float): Down valence normalization; 1.094 gives one valence down quark.
        a_sea (float): Sea normalization.
        sea_power (float): Large-x power of the sea.
    """

    name: str
    a_gluon: float = 2.7
    gluon_power: float = 5.0
    a_u_valence: float = 2.187
    a_d_valence: float = 1.094
    a_sea: float = 0.43
    sea_power: float = 7.0

    @property
    def flavor_ids(self) -> Tuple[int, ...]:
        """Five antiquarks, five quarks and the gluon."""
        return TOY_FLAVORS

    def xfx_all(self, x, q) -> np.ndarray:
        """
        Closed-form x f(x) for every flavor; q only sets the broadcast shape.

        Args:
            x: Momentum fractions in (0, 1].
            q: Ignored scale in GeV.

        Returns:
            np.ndarray: Shape (len(x), 11) in TOY_FLAVORS order.
        """
        x, _ = np.broadcast_arrays(np.atleast_1d(np.asarray(x, dtype=float)), np.asarray(q, dtype=float))
        if np.any(x <= 0.0) or np.any(x > 1.0):
            raise OutOfRange("x must lie in (0, 1]")
        one_minus = 1.0 - x
        sea = self.a_sea * one_minus**self.sea_power
        valence = np.sqrt(x) * one_minus**3
        zero = np.zeros_like(x)
        columns = {
            -5: zero,
            -4: zero,
            -3: sea,
            -2: sea,
            -1: sea,
            1: sea + self.a_d_valence * valence,
            2: sea + self.a_u_valence * valence,
            3: sea,
            4: zero,
            5: zero,
            PDG_GLUON: self.a_gluon * one_minus**self.gluon_power,
        }
        return np.column_stack([columns[f] for f in TOY_FLAVORS])


TOY_SETS = {
    "toy-v1": ToyPdf(name="toy-v1"),
    "toy-gluon-only": ToyPdf(name="toy-gluon-only", a_u_valence=0.0, a_d_valence=0.0, a_sea=0.0),
    "toy-quark-only": ToyPdf(name="toy-quark-only", a_gluon=0.0),
}
