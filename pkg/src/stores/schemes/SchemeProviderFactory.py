"""Factory for creating discretization scheme providers"""
from typing import Optional

from src.models.schemas.stencil import ClosureRule
from src.stores.schemes.SchemeEnums import SchemeEnum
from src.stores.schemes.SchemeInterface import SchemeInterface
from src.stores.schemes.providers.MixedProvider import MixedProvider
from src.stores.schemes.providers.PetrovGalerkinProvider import PetrovGalerkinProvider
from src.stores.schemes.providers.TpfaProvider import TpfaProvider
from src.utils.config import Config
from src.utils.errors import UsageError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class SchemeProviderFactory:
    """Factory for creating scheme providers configured from the application settings"""

    def __init__(self, config: Config):
        """
        Initialize factory with configuration.

        Args:
            config: Application configuration object
        """
        self.config = config

    def create(self, scheme: "str | SchemeEnum", closure: "str | ClosureRule | None" = None) -> SchemeInterface:
        """
        Create a scheme provider.

        Args:
            scheme: "mixed", "tpfa" or "petrov"
            closure: Stencil closure for the Petrov-Galerkin scheme (defaults to the configured one)

        Returns:
            SchemeInterface instance

        Raises:
            UsageError: If the scheme is not supported
        """
        try:
            scheme = SchemeEnum(scheme.lower() if isinstance(scheme, str) else scheme)
        except ValueError:
            raise UsageError(f"Unsupported scheme: {scheme}") from None

        if scheme == SchemeEnum.MIXED:
            provider = MixedProvider(
                solver=self.config.saddle_solver,
                rtol=self.config.iterative_rtol,
                maxiter=self.config.iterative_maxiter,
                quadrature_degree=self.config.rhs_quadrature_degree,
            )
        elif scheme == SchemeEnum.TPFA:
            provider = TpfaProvider(
                quadrature_degree=self.config.rhs_quadrature_degree,
                admissibility_tolerance=self.config.admissibility_tolerance,
            )
        else:
            rule: Optional[ClosureRule] = ClosureRule.parse(closure or self.config.default_closure)
            provider = PetrovGalerkinProvider(
                closure=rule,
                solver=self.config.petrov_solver,
                rtol=self.config.iterative_rtol,
                maxiter=self.config.iterative_maxiter,
                quadrature_degree=self.config.rhs_quadrature_degree,
                rank_tolerance=self.config.rank_tolerance,
            )

        logger.debug(f"Created {scheme.value} provider")
        return provider
