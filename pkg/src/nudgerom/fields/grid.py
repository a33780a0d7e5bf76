# SPDX-FileCopyrightText: Copyright (c) 2024, NudgeROM Developers.
# All rights reserved.
# SPDX-License-Identifier: Apache-2.0


import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.fft

from nudgerom.util.exception_handlers.errors import ConfigurationError
from nudgerom.util.exception_handlers.errors import DimensionError
from nudgerom.util.multi_processing.worker_pool import fft_workers

logger = logging.getLogger(__name__)

DEFAULT_DEALIAS_FRACTION = 2.0 / 3.0


@dataclass(frozen=True)
class Grid:
    """
    Uniform periodic grid on [0, lx) x [0, ly).

    Nodal arrays have shape (nx, ny) with x along axis 0. Spectral arrays are the `scipy.fft.rfft2` half spectrum
    of shape (nx, ny // 2 + 1).

    Parameters
    ----------
    nx, ny : int
        Number of cells (and nodes) per direction; positive even integers.
    lx, ly : float
        Domain extents.
    dealias_fraction : float
        Fraction of the resolvable wavenumber range kept by `dealias`; 2/3 gives the classic 2/3 rule.
    """

    nx: int
    ny: int
    lx: float = 2.0 * math.pi
    ly: float = 2.0 * math.pi
    dealias_fraction: float = DEFAULT_DEALIAS_FRACTION

    def __post_init__(self):
        for name in ("nx", "ny"):
            value = getattr(self, name)
            if int(value) != value or value <= 0 or value % 2 != 0:
                raise ConfigurationError(f"{name} must be a positive even integer, got {value}")
        for name in ("lx", "ly"):
            if not getattr(self, name) > 0.0:
                raise ConfigurationError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if not 0.0 < self.dealias_fraction <= 1.0:
            raise ConfigurationError(f"dealias_fraction must lie in (0, 1], got {self.dealias_fraction}")

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny)

    @property
    def spectral_shape(self) -> Tuple[int, int]:
        return (self.nx, self.ny // 2 + 1)

    @property
    def hx(self) -> float:
        return self.lx / self.nx

    @property
    def hy(self) -> float:
        return self.ly / self.ny

    @property
    def weight(self) -> float:
        """Quadrature weight of every node."""
        return self.hx * self.hy

    @property
    def area(self) -> float:
        return self.lx * self.ly

    def same_as(self, other: "Grid") -> bool:
        return (
            self.nx == other.nx
            and self.ny == other.ny
            and self.lx == other.lx
            and self.ly == other.ly
            and self.dealias_fraction == other.dealias_fraction
        )

    def require_same(self, other: "Grid") -> None:
        if not self.same_as(other):
            raise DimensionError(f"Grid mismatch: {self} vs {other}")

    @cached_property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Nodal coordinates (x, y), each of shape (nx, ny)."""
        x = np.arange(self.nx) * self.hx
        y = np.arange(self.ny) * self.hy
        return np.meshgrid(x, y, indexing="ij")

    @cached_property
    def wavenumber_index(self) -> Tuple[np.ndarray, np.ndarray]:
        """Integer wavenumbers (kx, ky) broadcastable to the spectral shape."""
        kx = np.fft.fftfreq(self.nx, d=1.0 / self.nx).reshape(-1, 1)
        ky = np.fft.rfftfreq(self.ny, d=1.0 / self.ny).reshape(1, -1)
        return kx, ky

    @cached_property
    def wavenumbers(self) -> Tuple[np.ndarray, np.ndarray]:
        """Physical wavenumbers used for differentiation; Nyquist modes are zeroed."""
        kx_index, ky_index = self.wavenumber_index
        kx = (2.0 * np.pi / self.lx) * kx_index
        ky = (2.0 * np.pi / self.ly) * ky_index
        kx = np.where(np.abs(kx_index) == self.nx // 2, 0.0, kx)
        ky = np.where(ky_index == self.ny // 2, 0.0, ky)
        return kx, ky

    @cached_property
    def laplacian_symbol(self) -> np.ndarray:
        """|k|^2 on the spectral shape, including Nyquist modes (the viscous operator is even)."""
        kx_index, ky_index = self.wavenumber_index
        kx = (2.0 * np.pi / self.lx) * kx_index
        ky = (2.0 * np.pi / self.ly) * ky_index
        return kx**2 + ky**2

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        kx_index, ky_index = self.wavenumber_index
        keep_x = np.abs(kx_index) < self.dealias_fraction * (self.nx // 2)
        keep_y = np.abs(ky_index) < self.dealias_fraction * (self.ny // 2)
        return keep_x & keep_y

    def to_spectral(self, values: np.ndarray) -> np.ndarray:
        """Forward transform over the last two axes."""
        if values.shape[-2:] != self.shape:
            raise DimensionError(f"Array of shape {values.shape} does not live on grid {self.shape}")
        return scipy.fft.rfft2(values, axes=(-2, -1), workers=fft_workers())

    def to_physical(self, coefficients: np.ndarray) -> np.ndarray:
        """Inverse transform over the last two axes."""
        return scipy.fft.irfft2(coefficients, s=self.shape, axes=(-2, -1), workers=fft_workers())
