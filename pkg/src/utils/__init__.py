# Utils package

# Expose commonly used utilities
from src.utils.config import Config, config
from src.utils.errors import DualFluxError, NumericalError, UsageError
from src.utils.logger import setup_logging, get_logger

__all__ = ["Config", "config", "DualFluxError", "NumericalError", "UsageError", "setup_logging", "get_logger"]
