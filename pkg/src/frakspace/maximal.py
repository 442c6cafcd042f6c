"""Fractional sharp and Hardy-Littlewood maximal operators on a cloud.

Both operators scan cubes centered at every cloud point over a shared dyadic
scale grid. The sharp operator weights local best-approximation errors by
t**-alpha; the degree of the fitted polynomial space follows alpha through
one of two conventions ("sharp" and "flat") that differ only at integer
alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyGrid,
    NonFiniteValue,
    NonpositiveAlpha,
    OutOfRange,
    RankDeficient,
    ScaleTooFine,
    TooFewPoints,
)
from .measure import WeightedPointCloud
from .polyapprox import (
    CLAMP_REL,
    DEFAULT_DELTA_REL,
    DEFAULT_MAX_ITER,
    DEFAULT_RTOL,
    MIN_POINTS_FACTOR,
    basis_size,
    fit_in_span,
    multi_indices,
)

__all__ = [
    "GridFunction",
    "ScaleGrid",
    "degree_for_sharp",
    "degree_for_flat",
    "approx_error_matrix",
    "sharp_maximal",
    "hl_maximal",
]


@dataclass(frozen=True)
class GridFunction:
    """Values of a function at every point of a cloud."""

    cloud: WeightedPointCloud
    values: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).ravel()
        if vals.shape[0] != self.cloud.size:
            raise OutOfRange(
                f"{vals.shape[0]} values for a cloud of {self.cloud.size} points"
            )
        if not np.all(np.isfinite(vals)):
            raise NonFiniteValue(f"non-finite sample in {self.name or 'function'}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class ScaleGrid:
    """Decreasing dyadic scales t_nu = diam * 2**-nu, nu = nu_min..nu_max."""

    scales: np.ndarray
    levels: np.ndarray
    diam: float
    factor: float

    def __post_init__(self):
        s = np.asarray(self.scales, dtype=float)
        lv = np.asarray(self.levels, dtype=int)
        if s.shape != lv.shape:
            raise OutOfRange("scales and levels disagree in length")
        if s.size and np.any(np.diff(s) >= 0.0):
            raise OutOfRange("scales must be strictly decreasing")
        s.setflags(write=False)
        lv.setflags(write=False)
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "levels", lv)

    def __len__(self) -> int:
        return int(self.scales.size)

    @classmethod
    def dyadic(
        cls,
        cloud: WeightedPointCloud,
        factor: float = 4.0,
        nu_max: int | None = None,
        nu_min: int = 0,
    ) -> "ScaleGrid":
        """All levels whose scale stays above factor * resolution_scale."""
        if factor <= 0.0:
            raise OutOfRange(f"factor must be positive, got {factor}")
        if nu_min < 0:
            raise OutOfRange(f"nu_min must be >= 0, got {nu_min}")
        floor_scale = factor * cloud.resolution_scale
        auto_max = int(math.floor(math.log2(cloud.diam / floor_scale) + 1e-9))
        if nu_max is None:
            nu_max = auto_max
        elif nu_max > auto_max:
            raise ScaleTooFine(
                f"nu_max={nu_max} finer than admissible level {auto_max} "
                f"(factor {factor} x resolution scale)"
            )
        if nu_max < nu_min:
            raise ScaleTooFine(
                f"no admissible scales: nu_max={nu_max} < nu_min={nu_min}"
            )
        levels = np.arange(nu_min, nu_max + 1)
        return cls(
            scales=cloud.diam * 2.0 ** -levels.astype(float),
            levels=levels,
            diam=cloud.diam,
            factor=factor,
        )


def degree_for_sharp(alpha: float) -> int:
    """Space parameter k for the sharp convention: greatest integer < alpha + 1."""
    if not alpha > 0.0:
        raise NonpositiveAlpha(f"alpha must be positive, got {alpha}")
    return int(math.ceil(alpha))


def degree_for_flat(alpha: float) -> int:
    """Space parameter k for the flat convention: smallest integer > alpha."""
    if not alpha > 0.0:
        raise NonpositiveAlpha(f"alpha must be positive, got {alpha}")
    return int(math.floor(alpha)) + 1


def _variant_degree(alpha: float, variant: str) -> int:
    if variant == "sharp":
        return degree_for_sharp(alpha)
    if variant == "flat":
        return degree_for_flat(alpha)
    raise OutOfRange(f"variant must be 'sharp' or 'flat', got {variant!r}")


def approx_error_matrix(
    cloud: WeightedPointCloud,
    f,
    k: int,
    u: float,
    grid: ScaleGrid,
    min_points_factor: int = MIN_POINTS_FACTOR,
) -> np.ndarray:
    """Normalized local errors, one row per cloud point, one column per scale.

    Entry (i, j) is the average-form best-approximation error of f over
    Q(x_i, t_j) by degree <= k - 1 polynomials, measured in L^u. Scales whose
    cube holds too few points (or is rank deficient) are NaN; a point with
    every scale skipped raises, since its maximal value would be meaningless.
    """
    if not (1.0 <= u < math.inf):
        raise OutOfRange(f"u must lie in [1, inf), got {u}")
    if len(grid) == 0:
        raise EmptyGrid("scale grid holds no scales")
    values = np.asarray(getattr(f, "values", f), dtype=float).ravel()
    if values.shape[0] != cloud.size:
        raise OutOfRange("function sample count does not match the cloud")
    n = cloud.ambient_dim
    d = basis_size(n, k)
    needed = max(1, min_points_factor * d)
    pts = cloud.points
    wts = cloud.weights
    scales = grid.scales
    inv_u = 1.0 / u
    out = np.full((cloud.size, len(grid)), np.nan)

    if d > 1:
        exps = np.asarray(multi_indices(n, k - 1), dtype=int).reshape(-1, n)
        degs = exps.sum(axis=1).astype(float)

    for i in range(cloud.size):
        dx = np.max(np.abs(pts - pts[i]), axis=1) if n > 1 else np.abs(
            pts[:, 0] - pts[i, 0]
        )
        order = np.argsort(dx, kind="stable")
        dxs = dx[order]
        fo = values[order]
        wo = wts[order]
        if d > 1:
            rel = pts[order] - pts[i]
            raw = np.ones((cloud.size, d))
            for col, e in enumerate(exps):
                for j in range(n):
                    p = int(e[j])
                    if p:
                        raw[:, col] *= rel[:, j] ** p
        for j, t in enumerate(scales):
            m = int(np.searchsorted(dxs, t, side="right"))
            if m < needed:
                continue
            w = wo[:m]
            fv = fo[:m]
            mass = float(w.sum())
            if d == 1:
                ek = _constant_fit_error(fv, w, mass, u)
            else:
                V = raw[:m] * t**-degs
                try:
                    _, ek, _, _ = fit_in_span(V, w, fv, u)
                except RankDeficient:
                    continue
            out[i, j] = ek / mass**inv_u
        if np.isnan(out[i]).all():
            raise TooFewPoints(
                f"point {i} admits no scale with {needed} points for k={k}"
            )
    return out


def _constant_fit_error(fv: np.ndarray, w: np.ndarray, mass: float, u: float) -> float:
    """Best-constant error in L^u; mirrors fit_in_span's degree-0 behavior."""
    scale = float(np.max(np.abs(fv)))
    if scale == 0.0:
        return 0.0
    c = float(np.dot(w, fv) / mass)
    r = fv - c
    if u == 2.0:
        value = float(np.sqrt(np.dot(w, r * r)))
    elif u == 1.0:
        # The weighted median minimizes sum w|f - c| exactly; no iteration.
        order = np.argsort(fv, kind="stable")
        cum = np.cumsum(w[order])
        c = float(fv[order][np.searchsorted(cum, 0.5 * mass)])
        value = float(np.dot(w, np.abs(fv - c)))
    else:
        delta2 = (DEFAULT_DELTA_REL * scale) ** 2
        obj = float(np.dot(w, np.abs(r) ** u) ** (1.0 / u))
        best = obj
        exponent = 0.5 * u - 1.0
        damping = 1.0 / (u - 1.0) if u > 2.0 else 1.0
        for _ in range(DEFAULT_MAX_ITER):
            omega = w * (r * r + delta2) ** exponent
            c += damping * (float(np.dot(omega, fv) / omega.sum()) - c)
            r = fv - c
            new_obj = float(np.dot(w, np.abs(r) ** u) ** (1.0 / u))
            if new_obj < best:
                best = new_obj
            if abs(new_obj - obj) <= DEFAULT_RTOL * max(obj, DEFAULT_DELTA_REL * scale):
                break
            obj = new_obj
        value = best
    if value <= CLAMP_REL * scale * mass ** (1.0 / u):
        value = 0.0
    return value


def sharp_maximal(
    cloud: WeightedPointCloud,
    f,
    alpha: float,
    u: float = 1.0,
    variant: str = "sharp",
    grid: ScaleGrid | None = None,
    min_points_factor: int = MIN_POINTS_FACTOR,
) -> GridFunction:
    """Pointwise max over admissible scales of t**-alpha times the local error."""
    k = _variant_degree(alpha, variant)
    if grid is None:
        grid = ScaleGrid.dyadic(cloud)
    if len(grid) == 0:
        raise EmptyGrid("scale grid holds no scales")
    matrix = approx_error_matrix(cloud, f, k, u, grid, min_points_factor)
    weighted = matrix * grid.scales**-alpha
    vals = np.nanmax(weighted, axis=1)
    skipped = int(np.isnan(matrix).sum())
    name = getattr(f, "name", "")
    return GridFunction(
        cloud,
        vals,
        name=f"sharp({name})" if name else "sharp",
        meta={
            "alpha": alpha,
            "u": u,
            "variant": variant,
            "k": k,
            "skipped_cells": skipped,
            "nu_min": int(grid.levels[0]),
            "nu_max": int(grid.levels[-1]),
        },
    )


def hl_maximal(
    cloud: WeightedPointCloud,
    g,
    sigma: float,
    grid: ScaleGrid | None = None,
) -> GridFunction:
    """M_sigma g: max over scales of the cube average of |g|**sigma, power 1/sigma.

    Cubes are centered at cloud points, so every cube holds at least its
    center and all scales contribute.
    """
    if not sigma > 0.0:
        raise OutOfRange(f"sigma must be positive, got {sigma}")
    if grid is None:
        grid = ScaleGrid.dyadic(cloud)
    if len(grid) == 0:
        raise EmptyGrid("scale grid holds no scales")
    values = np.asarray(getattr(g, "values", g), dtype=float).ravel()
    if values.shape[0] != cloud.size:
        raise OutOfRange("function sample count does not match the cloud")
    pts = cloud.points
    wts = cloud.weights
    n = cloud.ambient_dim
    powered = wts * np.abs(values) ** sigma
    out = np.empty(cloud.size)
    for i in range(cloud.size):
        dx = np.max(np.abs(pts - pts[i]), axis=1) if n > 1 else np.abs(
            pts[:, 0] - pts[i, 0]
        )
        order = np.argsort(dx, kind="stable")
        cw = np.cumsum(wts[order])
        cg = np.cumsum(powered[order])
        counts = np.searchsorted(dx[order], grid.scales, side="right")
        counts = counts[counts >= 1]
        avgs = cg[counts - 1] / cw[counts - 1]
        out[i] = float(np.max(avgs)) ** (1.0 / sigma)
    name = getattr(g, "name", "")
    return GridFunction(
        cloud,
        out,
        name=f"hl({name})" if name else "hl",
        meta={"sigma": sigma},
    )
