"""Coefficient sets and their JSON file format."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import FormatError
from .geometry import GeometrySpec, SolidWeight
from .poly1d import Weight1D
from .solid import SolidBasis, SolidIndex, solid_dim, solid_indices
from .surface import SurfaceBasis, SurfaceIndex, surface_dim, surface_indices

FORMAT_VERSION = 1


@dataclass
class CoefficientSet:
    """Dense expansion coefficients in the canonical basis order.

    Attributes
    ----------
    geometry : GeometrySpec
    basis : {"surface", "solid"}
    weight : Weight1D
        ``w`` for surface bases, ``w1`` for solid bases.
    mu : float or None
        Disk parameter of solid bases.
    N : int
        Maximum degree.
    values : ndarray
        Shape ``(dim,)`` or ``(dim,) + batch``.
    parameters : dict
        Descriptive ``alpha``, ``beta``, ``mu`` labels recorded in files.
    """

    geometry: GeometrySpec
    basis: str
    weight: Weight1D
    N: int
    values: np.ndarray
    mu: float | None = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in ("surface", "solid"):
            raise FormatError(f"unknown basis kind {self.basis!r}")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[0] != self.dim:
            raise FormatError(f"expected {self.dim} coefficients for N={self.N}, got {self.values.shape[0]}")
        if not np.all(np.isfinite(self.values)):
            raise FormatError("coefficients must be finite")

    @property
    def dim(self) -> int:
        return surface_dim(self.N) if self.basis == "surface" else solid_dim(self.N)

    def indices(self):
        return surface_indices(self.N) if self.basis == "surface" else solid_indices(self.N)

    def slice_bounds(self, n: int) -> tuple[int, int]:
        if self.basis == "surface":
            return n * n, (n + 1) * (n + 1)
        return solid_dim(n - 1), solid_dim(n)

    def degree_slice(self, n: int) -> np.ndarray:
        lo, hi = self.slice_bounds(n)
        return self.values[lo:hi]

    def __getitem__(self, idx: SurfaceIndex | SolidIndex):
        return self.values[idx.position]

    def make_basis(self):
        if self.basis == "surface":
            return SurfaceBasis(self.geometry, self.weight)
        return SolidBasis(self.geometry, SolidWeight(self.geometry, self.weight, self.mu))

    def synthesize(self, x, y, t, check: bool = True):
        return self.make_basis().synthesize(self.values, x, y, t, check=check)

    # -- serialisation --------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        if self.values.ndim != 1:
            raise FormatError("only unbatched coefficient sets can be serialised")
        geom = self.geometry.to_dict()
        geom["weights"] = {"w" if self.basis == "surface" else "w1": self.weight.to_dict(), "mu": self.mu}
        params = {"alpha": None, "beta": None, "mu": self.mu}
        params.update(self.parameters)
        params["N"] = self.N
        return {
            "format_version": FORMAT_VERSION,
            "geometry": geom,
            "basis": self.basis,
            "parameters": params,
            "entries": [float(v) for v in self.values],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CoefficientSet":
        if not isinstance(data, dict):
            raise FormatError("coefficient document must be a JSON object")
        version = data.get("format_version")
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
        try:
            geom = GeometrySpec.from_dict(data["geometry"])
            kind = data["basis"]
            weights = data["geometry"]["weights"]
            key = "w" if kind == "surface" else "w1"
            weight = Weight1D.from_dict(weights[key])
            params = dict(data["parameters"])
            N = int(params.pop("N"))
            mu = weights.get("mu")
            entries = np.asarray(data["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"malformed coefficient document: {exc}") from exc
        return cls(geom, kind, weight, N, entries, mu=mu, parameters=params)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "CoefficientSet":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)


def decay_profile(coeffs: CoefficientSet) -> list[tuple[int, float]]:
    """Per-degree Euclidean norms ``(n, ||slice_n||_2)`` for ``n = 0..N``."""
    out = []
    for n in range(coeffs.N + 1):
        sl = coeffs.degree_slice(n)
        out.append((n, float(math.sqrt(float(np.sum(sl * sl))))))
    return out
