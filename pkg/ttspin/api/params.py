from fastapi import HTTPException

from ttspin.services.collider import Beam, ColliderConfig, parse_q_scale
from ttspin.services.pdf.toy import TOY_SETS


def collider_config(
    beam: Beam = Beam.PP,
    sqrt_s: float = 13000.0,
    pdf: str = "toy-v1",
    q_scale: str = "mtt",
) -> ColliderConfig:
    """Collider built from query parameters; only the builtin PDF sets are served over HTTP."""
    if pdf not in TOY_SETS:
        raise HTTPException(status_code=422, detail=f"pdf must be one of {', '.join(TOY_SETS)}, got {pdf!r}")
    try:
        q_scale_rule, q_fixed = parse_q_scale(q_scale)
        return ColliderConfig(beam=beam, sqrt_s=sqrt_s, pdf=pdf, q_scale_rule=q_scale_rule, q_fixed=q_fixed)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=f"Invalid collider: {exc}")
