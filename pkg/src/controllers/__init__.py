# Controllers package

from src.controllers.BaseController import BaseController
from src.controllers.MeshController import MeshController
from src.controllers.StencilController import StencilController
from src.controllers.SolveController import SolveController
from src.controllers.HarnessController import HarnessController

__all__ = [
    "BaseController",
    "MeshController",
    "StencilController",
    "SolveController",
    "HarnessController",
]
