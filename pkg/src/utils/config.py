from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Literal, Optional


class Config(BaseSettings):
    """Application configuration loaded from environment variables"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application Configuration
    app_name: str = "DualFlux"
    app_version: str = "0.1.0"

    # Server Configuration
    api_host: str = "0.0.0.0"
    api_port: int = 8000
    debug: bool = False
    cors_origins: str = "*"  # Comma-separated list of allowed origins, or "*" for all

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None
    log_dir: str = "logs"

    # Geometry tolerances
    degeneracy_tolerance: float = Field(
        default=1e-14,
        description="A triangle is degenerate when |signed area| < tolerance * diameter^2. "
                    "Set via DEGENERACY_TOLERANCE environment variable."
    )

    # Stencil Configuration
    rank_tolerance: float = Field(
        default=1e-10,
        description="Minimum sigma_min/sigma_max of the equilibrated 3x5 flux constraint system. "
                    "Set via RANK_TOLERANCE environment variable."
    )
    default_closure: str = Field(
        default="minnorm",
        description="Closure of the two-parameter stencil family: minnorm, minouter or fixed:t1,t2. "
                    "Set via DEFAULT_CLOSURE environment variable."
    )

    # Mesh Configuration
    default_split: Literal["diagonal", "antidiagonal"] = "diagonal"

    # Linear solvers
    admissibility_tolerance: float = Field(
        default=1e-12,
        description="Circumcenter distances with |d_a| <= tolerance * |a| merge the two cells "
                    "into one two-point control volume."
    )
    saddle_solver: Literal["direct", "schur"] = Field(
        default="direct",
        description="Mixed system strategy: sparse direct factorization or Schur-complement CG. "
                    "The Schur path is also the fallback when the direct solve fails."
    )
    petrov_solver: Literal["direct", "bicgstab"] = "direct"
    iterative_rtol: float = 1e-12
    iterative_maxiter: int = 5000

    # Harness Configuration
    infsup_max_size: int = Field(
        default=2000,
        description="Largest E+F accepted by the dense inf-sup eigensolve."
    )
    rhs_quadrature_degree: int = 3
    error_quadrature_degree: int = 5


# Create a global config instance
config = Config()
