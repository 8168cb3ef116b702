"""Helper functions for the application"""
from src.utils.config import config, Config
from src.utils.errors import UsageError


def get_settings() -> Config:
    """
    Get application settings/configuration.

    Returns:
        Config instance with application settings
    """
    return config


def parse_int_list(text: str, name: str = "levels") -> list[int]:
    """
    Parse a comma-separated list of integers such as "8,16,32".

    Raises:
        UsageError: If an entry is not an integer
    """
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated integers, got '{text}'") from None


def format_float(value: float) -> str:
    """Shortest text that round-trips a double"""
    return f"{value:.17g}"
