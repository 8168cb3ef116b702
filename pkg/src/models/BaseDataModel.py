"""Base data model class for file-backed data access"""
from pathlib import Path

from src.utils.helpers import get_settings
from src.utils.config import Config


class BaseDataModel:
    """Base class for all data models"""

    def __init__(self, root_dir: str | Path | None = None):
        """
        Initialize base data model with the directory relative paths resolve against.

        Args:
            root_dir: Base directory for relative paths (default: current directory)
        """
        self.root_dir = Path(root_dir) if root_dir is not None else None
        self.app_settings: Config = get_settings()

    def resolve(self, path: str | Path) -> Path:
        """
        Resolve a path against root_dir and create its parent directory.

        Args:
            path: Absolute or relative file path

        Returns:
            Resolved Path
        """
        path = Path(path)
        if self.root_dir is not None and not path.is_absolute():
            path = self.root_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
