from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Physics constants, numerical tolerances and service options, overridable from the environment or .env."""

    model_config = SettingsConfigDict(env_file=".env")

    M_TOP: float = 173.0
    ALPHA_S: float = 0.118

    PHYSICALITY_EPS: float = 1e-10
    ALGEBRA_EPS: float = 1e-12
    CLOSED_FORM_EPS: float = 1e-9
    COLLINEAR_EPS: float = 1e-6
    FORWARD_SINGULARITY_EPS: float = 1e-9

    QUAD_EPSREL: float = 1e-6
    QUAD_EPSABS: float = 1e-30
    QUAD_LIMIT: int = 2000
    ROOT_XTOL: float = 1e-9
    SCAN_POINTS: int = 2048
    GAUSS_NODES: int = 64
    SMALL_BETA: float = 1e-2

    OUTPUT_DIGITS: int = 9
    LOG_LEVEL: str = "WARNING"

    RATE_LIMITING_ENABLE: bool = False
    RATE_LIMITING_FREQUENCY: str = "2/3seconds"


settings = Settings()
