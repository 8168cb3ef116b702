"""Manufactured solutions of -div grad u = f with u = 0 on the unit square"""
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from src.stores.schemes.SchemeEnums import CaseEnum
from src.utils.errors import UnknownCaseError

ScalarField = Callable[[NDArray, NDArray], NDArray]
VectorField = Callable[[NDArray, NDArray], tuple[NDArray, NDArray]]


@dataclass(frozen=True)
class ManufacturedCase:
    name: CaseEnum
    u: ScalarField
    p: VectorField   # grad u
    f: ScalarField   # -laplacian u


def _sinsin() -> ManufacturedCase:
    pi = np.pi
    return ManufacturedCase(
        name=CaseEnum.SINSIN,
        u=lambda x, y: np.sin(pi * x) * np.sin(pi * y),
        p=lambda x, y: (pi * np.cos(pi * x) * np.sin(pi * y), pi * np.sin(pi * x) * np.cos(pi * y)),
        f=lambda x, y: 2.0 * pi ** 2 * np.sin(pi * x) * np.sin(pi * y),
    )


def _bubble() -> ManufacturedCase:
    return ManufacturedCase(
        name=CaseEnum.BUBBLE,
        u=lambda x, y: x * (1 - x) * y * (1 - y),
        p=lambda x, y: ((1 - 2 * x) * y * (1 - y), x * (1 - x) * (1 - 2 * y)),
        f=lambda x, y: 2.0 * (x * (1 - x) + y * (1 - y)),
    )


def _zero() -> ManufacturedCase:
    return ManufacturedCase(
        name=CaseEnum.ZERO,
        u=lambda x, y: np.zeros_like(np.asarray(x, dtype=float)),
        p=lambda x, y: (np.zeros_like(np.asarray(x, dtype=float)), np.zeros_like(np.asarray(x, dtype=float))),
        f=lambda x, y: np.zeros_like(np.asarray(x, dtype=float)),
    )


_CASES = {CaseEnum.SINSIN: _sinsin, CaseEnum.BUBBLE: _bubble, CaseEnum.ZERO: _zero}


def mms_case(name: "str | CaseEnum") -> ManufacturedCase:
    """
    Look up a manufactured solution by name (case-insensitive).

    Raises:
        UnknownCaseError: If the name is not sinsin, bubble or zero
    """
    try:
        key = CaseEnum(name.lower() if isinstance(name, str) else name)
    except ValueError:
        raise UnknownCaseError(f"unknown case '{name}'") from None
    return _CASES[key]()
