import os

import pytest

from ttspin.services.collider import Beam, ColliderConfig
from ttspin.services.pdf.toy import TOY_SETS, ToyPdf

LINEAR_GLUON = "toy-linear-gluon"


@pytest.fixture
def toy_collider():
    return ColliderConfig(beam=Beam.PP, sqrt_s=13000.0, m_top=173.0, pdf="toy-v1")


@pytest.fixture
def toy_tevatron():
    return ColliderConfig(beam=Beam.PPBAR, sqrt_s=1960.0, m_top=173.0, pdf="toy-v1")


@pytest.fixture
def gluon_only_collider():
    return ColliderConfig(sqrt_s=13000.0, m_top=173.0, pdf="toy-gluon-only")


@pytest.fixture
def quark_only_collider():
    return ColliderConfig(sqrt_s=13000.0, m_top=173.0, pdf="toy-quark-only")


@pytest.fixture
def linear_gluon_collider(monkeypatch):
    monkeypatch.setitem(
        TOY_SETS,
        LINEAR_GLUON,
        ToyPdf(name=LINEAR_GLUON, a_gluon=1.0, gluon_power=1.0, a_u_valence=0.0, a_d_valence=0.0, a_sea=0.0),
    )
    return ColliderConfig(sqrt_s=1000.0, m_top=173.0, pdf=LINEAR_GLUON)


@pytest.fixture
def grid_path():
    path = os.environ.get("TTSPIN_PDF_GRID")
    if not path:
        pytest.skip("TTSPIN_PDF_GRID is not set")
    return path


@pytest.fixture
def small_grid_text():
    return "\n".join(
        [
            "PdfType: central",
            "Format: lhagrid1",
            "Flavors: [-1, 1, 21]",
            "---",
            "1e-3 1e-1 1",
            "10 100",
            "-1 1 0",
            "0.5 1.0 2.0",
            "0.4 0.8 1.6",
            "0.3 0.6 1.2",
            "0.2 0.4 0.8",
            "0 0 0",
            "0 0 0",
            "---",
            "1e-3 1e-1 1",
            "100 1000",
            "-1 1 0",
            "9.0 9.0 9.0",
            "0.3 0.6 1.2",
            "9.0 9.0 9.0",
            "0.1 0.2 0.4",
            "9.0 9.0 9.0",
            "0 0 0",
            "---",
        ],
    )
