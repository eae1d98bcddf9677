from typing import Optional

from fastapi import APIRouter, Query

from ttspin.services.phase_space.averages import (
    angular_avg,
    axial_criticals_gg,
    beta_delta_gg,
    c_perp_crossover_gg,
    chsh_angular_avg,
    chsh_mu_omega,
    delta_axial_omega,
    delta_omega,
)
from ttspin.services.production.kinematics import PartonChannel
from ttspin.utils.utils import clean_response

router = APIRouter()


@router.get("/{channel}/angular")
def get_angular_average(channel: PartonChannel, beta: float = Query(ge=0.0, le=1.0)) -> dict:
    """Angle-averaged correlations and markers of one channel at a velocity."""
    avg = angular_avg(channel, beta)
    return clean_response(
        {
            "channel": channel.value,
            "beta": beta,
            "aTilde": avg.a_tilde,
            "correlations": avg.normalized(),
            "traceResidual": avg.trace_residual,
            "deltaOmega": delta_omega(avg),
            "deltaAxial": delta_axial_omega(avg),
            "chshMu": chsh_mu_omega(avg),
            "chshAngular": chsh_angular_avg(channel, beta),
        },
    )


@router.get("/criticals")
def get_gg_criticals(m_top: Optional[float] = Query(default=None, gt=0.0)) -> dict:
    """Critical velocities and masses of the angle-averaged gluon-fusion state."""
    beta_ph, m_ph, beta_ch, m_ch = axial_criticals_gg(m_top)
    return clean_response(
        {
            "betaPh": beta_ph,
            "massPh": m_ph,
            "betaCh": beta_ch,
            "massCh": m_ch,
            "betaCPerpCrossover": c_perp_crossover_gg(),
            "betaKkRrCrossover": beta_delta_gg(),
        },
    )
