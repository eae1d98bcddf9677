import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from slowapi import Limiter, _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
from slowapi.middleware import SlowAPIMiddleware
from slowapi.util import get_remote_address
from starlette.responses import RedirectResponse

from ttspin.api.api import api_router
from ttspin.settings import settings
from ttspin.utils.errors import TTSpinError
from ttspin.utils.utils import configure_logging

configure_logging(settings.LOG_LEVEL)

limiter = Limiter(
    key_func=get_remote_address,
    default_limits=[settings.RATE_LIMITING_FREQUENCY],
    enabled=settings.RATE_LIMITING_ENABLE,
)
app = FastAPI(title="ttbar Spin Entanglement API")
app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)
app.add_middleware(SlowAPIMiddleware)
app.include_router(api_router)


@app.exception_handler(TTSpinError)
async def ttspin_error_handler(request: Request, exc: TTSpinError) -> JSONResponse:
    """Report library errors as JSON with their HTTP status."""
    return JSONResponse(status_code=exc.status_code, content={"detail": exc.detail})


@app.get("/", include_in_schema=False)
def docs_redirect():
    """Send the root path to the interactive documentation."""
    return RedirectResponse(url="/docs")


if __name__ == "__main__":
    uvicorn.run("ttspin.main:app", host="0.0.0.0", port=8000, reload=True)
