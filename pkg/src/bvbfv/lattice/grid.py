"""Periodic grids and a slab: finite-difference / trig derivatives, exact sums.

All domains are unit tori (spacing 1/N) or the unit slab T^2 x [0,1].
Periodic directions support three derivative kernels:

* ``fd2``      second-order centered stencil,
* ``fd4``      fourth-order centered stencil,
* ``spectral`` exact trigonometric differentiation of the resolved modes.

The slab's free direction always uses stencils: centered in the interior,
one-sided second order at the two ends; integration along it is composite
Simpson (the point count is kept odd).
"""

from __future__ import annotations

import numpy as np


def _fd2(f: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)) / (2 * h)


def _fd4(f: np.ndarray, axis: int, h: float) -> np.ndarray:
    return (
        -np.roll(f, -2, axis=axis)
        + 8 * np.roll(f, -1, axis=axis)
        - 8 * np.roll(f, 1, axis=axis)
        + np.roll(f, 2, axis=axis)
    ) / (12 * h)


def _spectral(f: np.ndarray, axis: int, n: int) -> np.ndarray:
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k = k.copy()
        k[n // 2] = 0.0  # drop the unpaired mode for an odd operator
    shape = [1] * f.ndim
    shape[axis] = n
    mult = (2j * np.pi * k).reshape(shape)
    return np.fft.ifft(np.fft.fft(f, axis=axis) * mult, axis=axis)


def _dz_slab(f: np.ndarray, axis: int, h: float) -> np.ndarray:
    out = np.empty_like(f)
    sl = [slice(None)] * f.ndim

    def at(i):
        s = sl.copy()
        s[axis] = i
        return tuple(s)

    inner = sl.copy()
    inner[axis] = slice(1, -1)
    up = sl.copy()
    up[axis] = slice(2, None)
    dn = sl.copy()
    dn[axis] = slice(0, -2)
    out[tuple(inner)] = (f[tuple(up)] - f[tuple(dn)]) / (2 * h)
    out[at(0)] = (-3 * f[at(0)] + 4 * f[at(1)] - f[at(2)]) / (2 * h)
    out[at(-1)] = (3 * f[at(-1)] - 4 * f[at(-2)] + f[at(-3)]) / (2 * h)
    return out


def simpson_weights(npoints: int, h: float) -> np.ndarray:
    if npoints < 3 or npoints % 2 == 0:
        raise ValueError("Simpson integration needs an odd number of points >= 3")
    w = np.ones(npoints)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


class Grid2:
    """N x N periodic grid on the unit torus; fields are arrays (N, N, ...)."""

    def __init__(self, N: int, deriv: str = "fd2"):
        if N < 4:
            raise ValueError("grid size must be at least 4")
        self.N = N
        self.h = 1.0 / N
        self.deriv = deriv
        xs = np.arange(N) * self.h
        self.x, self.y = np.meshgrid(xs, xs, indexing="ij")

    def d(self, f: np.ndarray, axis: int) -> np.ndarray:
        if self.deriv == "fd2":
            return _fd2(f, axis, self.h)
        if self.deriv == "fd4":
            return _fd4(f, axis, self.h)
        if self.deriv == "spectral":
            return _spectral(f, axis, self.N)
        raise ValueError(f"unknown derivative kernel {self.deriv!r}")

    def dx(self, f):
        return self.d(f, 0)

    def dy(self, f):
        return self.d(f, 1)

    def integrate(self, f: np.ndarray) -> complex:
        """Exact sum x cell area over the torus (trapezoid = rectangle here)."""
        return np.sum(f, axis=(0, 1)) * self.h * self.h


class Grid3:
    """Slab T^2 x [0,1]: periodic in x, y; free ends along z (Nz even, Nz+1 planes)."""

    def __init__(self, N: int, Nz: int | None = None, deriv: str = "fd2"):
        if N < 4:
            raise ValueError("grid size must be at least 4")
        self.N = N
        self.Nz = Nz if Nz is not None else N
        if self.Nz % 2 == 1:
            self.Nz += 1
        self.h = 1.0 / N
        self.hz = 1.0 / self.Nz
        self.deriv = deriv
        xs = np.arange(N) * self.h
        zs = np.arange(self.Nz + 1) * self.hz
        self.x = xs[:, None, None] + np.zeros((N, N, self.Nz + 1))
        self.y = xs[None, :, None] + np.zeros((N, N, self.Nz + 1))
        self.z = zs[None, None, :] + np.zeros((N, N, self.Nz + 1))
        self._wz = simpson_weights(self.Nz + 1, self.hz)

    def boundary(self) -> Grid2:
        return Grid2(self.N, deriv=self.deriv)

    def d(self, f: np.ndarray, axis: int) -> np.ndarray:
        if axis == 2:
            return _dz_slab(f, 2, self.hz)
        if self.deriv == "fd2":
            return _fd2(f, axis, self.h)
        if self.deriv == "fd4":
            return _fd4(f, axis, self.h)
        if self.deriv == "spectral":
            return _spectral(f, axis, self.N)
        raise ValueError(f"unknown derivative kernel {self.deriv!r}")

    def dx(self, f):
        return self.d(f, 0)

    def dy(self, f):
        return self.d(f, 1)

    def dz(self, f):
        return self.d(f, 2)

    def integrate(self, f: np.ndarray) -> complex:
        """Sum over x, y times Simpson along z."""
        zw = self._wz.reshape((1, 1, -1) + (1,) * (f.ndim - 3))
        return np.sum(f * zw, axis=(0, 1, 2)) * self.h * self.h

    def at_z(self, f: np.ndarray, index: int) -> np.ndarray:
        return f[:, :, index]
