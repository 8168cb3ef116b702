"""Six-point stencil data: neighborhood geometry, constraint systems, coefficients, closures"""
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Optional

import numpy as np
from numpy.typing import NDArray

from src.models.schemas.mesh import EdgeNeighborhood
from src.stores.schemes.SchemeEnums import ClosureEnum
from src.utils.errors import InvalidClosureError

COEFFICIENT_NAMES = ("eta", "alpha", "beta", "gamma", "delta")
SIDE_NAMES = ("alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class ClosureRule:
    """How one stencil is picked from the affine solution set of the constraint system"""
    kind: ClosureEnum = ClosureEnum.MIN_NORM
    t: tuple[float, float] = (0.0, 0.0)

    @classmethod
    def parse(cls, text: "str | ClosureRule | None") -> "ClosureRule":
        """
        Parse "minnorm", "minouter" or "fixed:t1,t2".

        Raises:
            InvalidClosureError: If the text names no closure
        """
        if text is None:
            return cls()
        if isinstance(text, ClosureRule):
            return text
        raw = text.strip().lower()
        head, _, tail = raw.partition(":")
        try:
            kind = ClosureEnum(head)
        except ValueError:
            raise InvalidClosureError(f"unknown closure '{text}'") from None
        if kind != ClosureEnum.FIXED:
            if tail:
                raise InvalidClosureError(f"closure '{head}' takes no parameters")
            return cls(kind)
        parts = tail.split(",")
        if len(parts) != 2:
            raise InvalidClosureError(f"closure 'fixed' needs two parameters, got '{text}'")
        try:
            t1, t2 = (float(p) for p in parts)
        except ValueError:
            raise InvalidClosureError(f"non-numeric closure parameters in '{text}'") from None
        if not (np.isfinite(t1) and np.isfinite(t2)):
            raise InvalidClosureError(f"non-finite closure parameters in '{text}'")
        return cls(kind, (t1, t2))

    def __str__(self) -> str:
        if self.kind == ClosureEnum.FIXED:
            return f"fixed:{self.t[0]:g},{self.t[1]:g}"
        return self.kind.value


@dataclass(frozen=True, eq=False)
class NeighborhoodFrame:
    """Coordinates of the eight vertices around an edge S->N; everything else is derived"""
    S: NDArray[np.float64]
    N: NDArray[np.float64]
    W: NDArray[np.float64]
    E: NDArray[np.float64]
    A: NDArray[np.float64]
    B: NDArray[np.float64]
    C: NDArray[np.float64]
    D: NDArray[np.float64]
    edge: int = -1

    TRIANGLES: ClassVar[dict[str, tuple[str, str, str]]] = {
        "K": ("S", "N", "W"),
        "L": ("N", "S", "E"),
        "M": ("N", "E", "A"),
        "P": ("W", "N", "B"),
        "Q": ("S", "W", "C"),
        "R": ("E", "S", "D"),
    }

    def point(self, name: str) -> NDArray[np.float64]:
        return getattr(self, name)

    def triangle(self, name: str) -> NDArray[np.float64]:
        return np.array([self.point(v) for v in self.TRIANGLES[name]])

    def centroid(self, name: str) -> NDArray[np.float64]:
        return self._centroids[name]

    def area(self, name: str) -> float:
        return self._areas[name]

    def gyration2(self, name: str) -> float:
        """Squared radius of gyration: sum of squared sides / 36"""
        p = self.triangle(name)
        return float(sum(np.sum((p[i] - p[(i + 1) % 3]) ** 2) for i in range(3)) / 36.0)

    @cached_property
    def _centroids(self) -> dict[str, NDArray[np.float64]]:
        return {name: self.triangle(name).mean(axis=0) for name in self.TRIANGLES}

    @cached_property
    def _areas(self) -> dict[str, float]:
        out = {}
        for name in self.TRIANGLES:
            p = self.triangle(name)
            d1, d2 = p[1] - p[0], p[2] - p[0]
            out[name] = 0.5 * abs(d1[0] * d2[1] - d1[1] * d2[0])
        return out

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.N - self.S))

    @property
    def normal(self) -> NDArray[np.float64]:
        t = self.N - self.S
        return np.array([t[1], -t[0]]) / np.linalg.norm(t)

    @property
    def midpoint(self) -> NDArray[np.float64]:
        return 0.5 * (self.S + self.N)

    def scaled(self, factor: float, origin: Optional[NDArray] = None) -> "NeighborhoodFrame":
        o = np.zeros(2) if origin is None else np.asarray(origin, dtype=float)
        moved = {k: o + factor * (self.point(k) - o) for k in "SNWEABCD"}
        return NeighborhoodFrame(**moved, edge=self.edge)

    def reversed(self) -> "NeighborhoodFrame":
        """Same points described from the edge N->S"""
        return NeighborhoodFrame(
            S=self.N, N=self.S, W=self.E, E=self.W,
            A=self.C, B=self.D, C=self.A, D=self.B, edge=self.edge,
        )


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """3 x 5 flux constraints in unknown order (eta, alpha, beta, gamma, delta)"""
    matrix: NDArray[np.float64]
    rhs: NDArray[np.float64]
    frame: NeighborhoodFrame
    neighborhood: Optional[EdgeNeighborhood] = None

    @property
    def scale(self) -> float:
        return self.frame.length

    @property
    def edge(self) -> int:
        return self.frame.edge if self.neighborhood is None else self.neighborhood.edge


@dataclass(frozen=True)
class StencilCoefficients:
    """Fluxes across SN, EN, NW, WS, SE and the constraint residuals of the solve"""
    eta: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    residual_first: float = 0.0
    residual_second: float = 0.0
    nullspace_dim: int = 2

    @classmethod
    def from_array(cls, x: NDArray, **extra) -> "StencilCoefficients":
        return cls(*(float(v) for v in x), **extra)

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.eta, self.alpha, self.beta, self.gamma, self.delta])

    def with_values(self, **values) -> "StencilCoefficients":
        data = {name: getattr(self, name) for name in COEFFICIENT_NAMES}
        data.update(values)
        return StencilCoefficients(**data, residual_first=self.residual_first,
                                   residual_second=self.residual_second, nullspace_dim=self.nullspace_dim)


@dataclass(frozen=True)
class SideMomenta:
    """First and second flux momenta of one outer side, about its two endpoints"""
    first: float
    first_tilde: float
    second: float
    second_tilde: float


@dataclass(frozen=True)
class EtaSecondMomenta:
    eta2_L: float
    eta2tilde_L: float
    eta2_K: float
    eta2tilde_K: float

