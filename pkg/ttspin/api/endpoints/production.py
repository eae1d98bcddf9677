import numpy as np
from fastapi import APIRouter, Query

from ttspin.services.production.criticals import critical_beta_ch, critical_beta_ph_gg
from ttspin.services.production.kinematics import Kinematics, PartonChannel
from ttspin.services.production.lo import diag_eigs, pair_state
from ttspin.services.spinpair.measures import state_markers
from ttspin.utils.utils import clean_response

router = APIRouter()


@router.get("/{channel}/state")
def get_pair_state(
    channel: PartonChannel,
    beta: float = Query(ge=0.0, le=1.0),
    theta: float = Query(ge=0.0, le=np.pi),
) -> dict:
    """Leading-order spin state of one channel at a velocity and production angle."""
    kin = Kinematics.from_beta(beta, theta)
    state = pair_state(channel, kin)
    return clean_response(
        {
            "channel": channel.value,
            "beta": beta,
            "theta": theta,
            "basis": state.basis_tag,
            "c": state.c,
            "diagonal": dict(zip(("cPlus", "cNn", "cMinus"), diag_eigs(channel, kin))),
            "markers": state_markers(state),
        },
    )


@router.get("/{channel}/criticals")
def get_criticals(channel: PartonChannel, theta: float) -> dict:
    """Velocities where entanglement and CHSH violation switch at a fixed production angle."""
    ph = critical_beta_ph_gg(theta) if channel == PartonChannel.GG else (0.0, None)
    ch = critical_beta_ch(channel, theta)
    return clean_response(
        {
            "channel": channel.value,
            "theta": theta,
            "betaPh1": ph[0],
            "betaPh2": ph[1],
            "betaCh1": ch[0],
            "betaCh2": ch[1],
        },
    )
