from fastapi import APIRouter, Depends

from ttspin.api.params import collider_config
from ttspin.services.collider import ColliderConfig
from ttspin.services.pdf.luminosity import channel_weights, luminosity
from ttspin.services.production.kinematics import PartonChannel
from ttspin.utils.errors import DegenerateNormalization
from ttspin.utils.utils import clean_response

router = APIRouter()


@router.get("")
def get_luminosity(m_tt: float, cfg: ColliderConfig = Depends(collider_config)) -> dict:
    """Parton luminosities of both channels and their weights at one invariant mass."""
    l_qq = luminosity(cfg, PartonChannel.QQBAR, m_tt)
    l_gg = luminosity(cfg, PartonChannel.GG, m_tt)
    try:
        w_qq, w_gg = channel_weights(cfg, m_tt)
    except DegenerateNormalization:
        w_qq, w_gg = None, None
    return clean_response(
        {
            "beam": cfg.beam.value,
            "sqrtS": cfg.sqrt_s,
            "pdf": cfg.pdf,
            "mTt": m_tt,
            "lQq": l_qq,
            "lGg": l_gg,
            "wQq": w_qq,
            "wGg": w_gg,
        },
    )
