"""Orbit-length profiles f(s) on the unit circle for the warped torus."""

from __future__ import annotations

import dataclasses
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import NDArray


def constant(s: NDArray[np.float64], offset: float = 1.0) -> NDArray[np.float64]:
    """f(s) = offset."""
    return np.full_like(s, offset, dtype=float)


def sin_bump(s: NDArray[np.float64], offset: float = 2.0, amplitude: float = 1.0) -> NDArray[np.float64]:
    """f(s) = offset + amplitude sin(2 pi s)."""
    return offset + amplitude * np.sin(2 * np.pi * s)


def gaussian_bump(
    s: NDArray[np.float64],
    offset: float = 1.0,
    amplitude: float = 1.0,
    center: float = 0.5,
    width: float = 0.1,
) -> NDArray[np.float64]:
    """Gaussian bump on the circle, using the wrapped distance to ``center``."""
    distance = (s - center + 0.5) % 1.0 - 0.5
    return offset + amplitude * np.exp(-(distance**2) / (2 * width**2))


PROFILE_REGISTRY: dict[str, Callable[..., NDArray[np.float64]]] = {
    "constant": constant,
    "sin-bump": sin_bump,
    "gaussian-bump": gaussian_bump,
}


@dataclasses.dataclass(frozen=True)
class Profile:
    """A named closed-form profile or an explicit periodic sample table.

    Examples
    --------
        >>> Profile.named("constant", offset=2.0).sample(4)
        array([2., 2., 2., 2.])

    """

    name: str = "constant"
    params: tuple[tuple[str, float], ...] = ()
    samples: tuple[float, ...] | None = None

    @classmethod
    def named(cls, name: str, **params: float) -> Profile:
        """Profile from the registry."""
        if name not in PROFILE_REGISTRY:
            msg = f"unknown profile {name!r}; expected one of {sorted(PROFILE_REGISTRY)}"
            raise ValueError(msg)
        return cls(name, tuple(sorted(params.items())))

    @classmethod
    def from_samples(cls, samples: list[float]) -> Profile:
        """Profile given by samples on a uniform periodic grid."""
        return cls("samples", (), tuple(float(x) for x in samples))

    def sample(self, n_points: int) -> NDArray[np.float64]:
        """Values on the grid s_i = i / n_points."""
        s = np.arange(n_points) / n_points
        if self.samples is None:
            return PROFILE_REGISTRY[self.name](s, **dict(self.params))
        table = np.asarray(self.samples)
        if table.size == n_points:
            return table.copy()
        grid = np.arange(table.size) / table.size
        return np.interp(s, grid, table, period=1.0)

    def describe(self) -> dict[str, object]:
        """Metadata for reports."""
        if self.samples is not None:
            return {"name": self.name, "sample_count": len(self.samples)}
        return {"name": self.name, **dict(self.params)}
