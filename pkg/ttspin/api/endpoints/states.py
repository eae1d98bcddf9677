import numpy as np
from fastapi import APIRouter, HTTPException

from ttspin.services.spinpair.fano import FanoState, assemble_density
from ttspin.services.spinpair.measures import concurrence, is_physical, min_eigenvalue, state_markers
from ttspin.utils.utils import clean_response, parse_correlations

router = APIRouter()


def _state(c: str) -> FanoState:
    """Normalized state from a comma-separated correlation matrix."""
    try:
        return FanoState.from_correlations(parse_correlations(c))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=f"Invalid correlations: {exc}")


@router.get("/concurrence")
def get_concurrence(c: str) -> dict:
    """Wootters concurrence of the state with these correlations."""
    state = _state(c)
    return clean_response({"c": state.c, "concurrence": concurrence(assemble_density(state))})


@router.get("/markers")
def get_markers(c: str) -> dict:
    """Physicality of the state and, when physical, its entanglement and CHSH markers."""
    state = _state(c)
    rho = assemble_density(state)
    physical = is_physical(rho)
    response = {
        "c": state.c,
        "physical": physical,
        "minEigenvalue": min_eigenvalue(rho),
        "correlationEigenvalues": np.linalg.eigvalsh((state.c + state.c.T) / 2.0),
    }
    if physical:
        response.update(state_markers(state))
    return clean_response(response)
