from fastapi import APIRouter

from ttspin.api.endpoints import luminosity, phase_space, production, states, tomography

api_router = APIRouter()
api_router.include_router(states.router, prefix="/states", tags=["states"])
api_router.include_router(production.router, prefix="/production", tags=["production"])
api_router.include_router(phase_space.router, prefix="/phase-space", tags=["phase-space"])
api_router.include_router(luminosity.router, prefix="/luminosity", tags=["luminosity"])
api_router.include_router(tomography.router, prefix="/tomography", tags=["tomography"])
