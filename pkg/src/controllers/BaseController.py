"""Base controller class for application controllers"""
from src.utils.helpers import get_settings
from src.utils.config import Config


class BaseController:
    """Base controller class with common functionality"""

    def __init__(self, settings: Config | None = None):
        """
        Initialize base controller with app settings.

        Args:
            settings: Configuration to use instead of the global one (tests pass their own)
        """
        self.app_settings: Config = settings or get_settings()
