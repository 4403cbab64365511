"""Random band-limited field recipes, su(2) helpers, and flow-time paths.

A recipe stores mode coefficients (and a polynomial profile along the slab
direction) drawn once per experiment; evaluating the same recipe on finer
grids samples the same smooth field, so refinement rows share one continuum
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
EYE2 = np.eye(2, dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def su2_norm_max(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(m) ** 2, axis=(-2, -1))).max())


def mexp_su2(x: np.ndarray) -> np.ndarray:
    """Exact exponential of traceless anti-hermitian 2x2 fields."""
    a = np.stack([np.real(np.trace(-1j * x @ s, axis1=-2, axis2=-1)) / 2 for s in SIGMA], axis=-1)
    r = np.sqrt(np.sum(a * a, axis=-1))
    r_safe = np.where(r == 0, 1.0, r)
    sinc = np.where(r == 0, 1.0, np.sin(r) / r_safe)
    out = np.cos(r)[..., None, None] * EYE2
    for j, s in enumerate(SIGMA):
        out = out + 1j * (sinc * a[..., j])[..., None, None] * s
    return out


def unitarize(g: np.ndarray, iterations: int = 2) -> np.ndarray:
    """Newton polar projection to U(2), then a det-phase fix into SU(2)."""
    for _ in range(iterations):
        g = 1.5 * g - 0.5 * (g @ dagger(g) @ g)
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
    phase = np.sqrt(det)
    return g / phase[..., None, None]


def unitarity_drift(g: np.ndarray) -> float:
    err = g @ dagger(g) - EYE2
    return float(np.sqrt(np.sum(np.abs(err) ** 2, axis=(-2, -1))).max())


# ---------------------------------------------------------------------------
# Recipes


@dataclass
class TrigRecipe:
    """f(x,y,z) = (sum_k a_k cos(2 pi k.r) + b_k sin(2 pi k.r)) * zpoly(z)."""

    modes: Dict[Tuple[int, int], Tuple[float, float]]
    zpoly: Tuple[float, ...] = (1.0,)

    def eval_xy(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x)
        for (kx, ky), (a, b) in self.modes.items():
            phase = 2 * np.pi * (kx * x + ky * y)
            out = out + a * np.cos(phase) + b * np.sin(phase)
        return out

    def eval(self, grid) -> np.ndarray:
        out = self.eval_xy(grid.x, grid.y)
        if hasattr(grid, "z"):
            prof = np.zeros_like(grid.z)
            for p, cp in enumerate(self.zpoly):
                prof = prof + cp * grid.z**p
            out = out * prof
        return out


def _draw_trig(rng: np.random.Generator, kmax: int, z_degree: int) -> TrigRecipe:
    modes = {}
    for kx in range(0, kmax + 1):
        for ky in range(-kmax, kmax + 1):
            if kx == 0 and ky < 0:
                continue
            a = rng.normal()
            b = 0.0 if (kx, ky) == (0, 0) else rng.normal()
            modes[(kx, ky)] = (a, b)
    zc = rng.normal(size=z_degree + 1)
    zc /= max(1.0, np.abs(zc).sum())
    return TrigRecipe(modes, tuple(zc))


@dataclass
class SU2Recipe:
    """su(2)-valued recipe: i sum_j f_j sigma_j, f_j trig recipes, common scale."""

    components: Tuple[TrigRecipe, TrigRecipe, TrigRecipe]
    scale: float = 1.0

    def eval(self, grid) -> np.ndarray:
        out = np.zeros(grid.x.shape + (2, 2), dtype=complex)
        for recipe, s in zip(self.components, SIGMA):
            out = out + 1j * recipe.eval(grid)[..., None, None] * s
        return self.scale * out


@dataclass
class ScalarVecRecipe:
    """R^ncomp-valued recipe for the abelian experiments."""

    components: Tuple[TrigRecipe, ...]
    scale: float = 1.0

    def eval(self, grid) -> np.ndarray:
        return self.scale * np.stack([r.eval(grid) for r in self.components], axis=-1)


class _ProbeGrid2:
    def __init__(self, n=64):
        xs = np.arange(n) / n
        self.x, self.y = np.meshgrid(xs, xs, indexing="ij")


class _ProbeGrid3(_ProbeGrid2):
    def __init__(self, n=48, nz=17):
        xs = np.arange(n) / n
        zs = np.linspace(0, 1, nz)
        self.x = xs[:, None, None] + np.zeros((n, n, nz))
        self.y = xs[None, :, None] + np.zeros((n, n, nz))
        self.z = zs[None, None, :] + np.zeros((n, n, nz))


def _probe_for(slab: bool):
    return _ProbeGrid3() if slab else _ProbeGrid2()


def su2_recipe(rng, kmax: int, amp: float, slab: bool, z_degree: int = 2) -> SU2Recipe:
    rec = SU2Recipe(tuple(_draw_trig(rng, kmax, z_degree if slab else 0) for _ in range(3)))
    top = su2_norm_max(rec.eval(_probe_for(slab)))
    if top > 0:
        rec.scale = amp / top
    return rec


def su2_one_form_recipe(rng, kmax: int, amp: float, slab: bool, z_degree: int = 2) -> Dict[str, SU2Recipe]:
    dirs = ("x", "y", "z") if slab else ("x", "y")
    return {d: su2_recipe(rng, kmax, amp, slab, z_degree) for d in dirs}


def eval_one_form(recipe: Dict[str, SU2Recipe], grid) -> Dict[str, np.ndarray]:
    return {k: r.eval(grid) for k, r in recipe.items()}


@dataclass
class PathRecipe:
    """Algebra-valued flow path gamma_t = sum_p t^p gamma_p."""

    coefficients: Sequence[SU2Recipe]

    def on_grid(self, grid) -> "PathOnGrid":
        return PathOnGrid([c.eval(grid) for c in self.coefficients])

    def rescale(self, factor: float):
        for c in self.coefficients:
            c.scale *= factor


@dataclass
class PathOnGrid:
    coefficients: List[np.ndarray]

    def __call__(self, t: float) -> np.ndarray:
        out = self.coefficients[0]
        for p in range(1, len(self.coefficients)):
            out = out + (t**p) * self.coefficients[p]
        return out


def su2_path_recipe(rng, kmax: int, amp: float, slab: bool, degree: int = 2, z_degree: int = 2) -> PathRecipe:
    rec = PathRecipe([su2_recipe(rng, kmax, 1.0, slab, z_degree) for _ in range(degree + 1)])
    probe = rec.on_grid(_probe_for(slab))
    top = max(su2_norm_max(probe(t)) for t in np.linspace(0, 1, 9))
    if top > 0:
        rec.rescale(amp / top)
    return rec


@dataclass
class ScalarPathRecipe:
    coefficients: Sequence[ScalarVecRecipe]

    def on_grid(self, grid) -> PathOnGrid:
        return PathOnGrid([c.eval(grid) for c in self.coefficients])

    def rescale(self, factor: float):
        for c in self.coefficients:
            c.scale *= factor


def scalar_vec_recipe(rng, kmax: int, amp: float, ncomp: int, slab: bool, z_degree: int = 1) -> ScalarVecRecipe:
    rec = ScalarVecRecipe(tuple(_draw_trig(rng, kmax, z_degree if slab else 0) for _ in range(ncomp)))
    top = float(np.abs(rec.eval(_probe_for(slab))).max())
    if top > 0:
        rec.scale = amp / top
    return rec


def scalar_path_recipe(rng, kmax: int, amp: float, ncomp: int, slab: bool, degree: int = 2, z_degree: int = 1) -> ScalarPathRecipe:
    rec = ScalarPathRecipe([scalar_vec_recipe(rng, kmax, 1.0, ncomp, slab, z_degree) for _ in range(degree + 1)])
    probe = rec.on_grid(_probe_for(slab))
    top = max(float(np.abs(probe(t)).max()) for t in np.linspace(0, 1, 9))
    if top > 0:
        rec.rescale(amp / top)
    return rec
