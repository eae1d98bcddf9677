from fastapi import APIRouter, Depends, HTTPException, Query
from pydantic import ValidationError

from ttspin.api.params import collider_config
from ttspin.services.collider import ColliderConfig
from ttspin.services.reports.tomography import SpinTomography

router = APIRouter()


@router.get("/report")
def get_tomography_report(
    lo: float,
    hi: float,
    n: int = Query(default=10_000, ge=100, le=1_000_000),
    seed: int = Query(default=0, ge=0),
    cfg: ColliderConfig = Depends(collider_config),
) -> dict:
    """Simulated dilepton tomography of the pairs in the window [lo, hi]."""
    try:
        tomography = SpinTomography(cfg=cfg, lo=lo, hi=hi, n=n, seed=seed)
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=f"Invalid window: {exc}")
    return tomography.get_tomography()
