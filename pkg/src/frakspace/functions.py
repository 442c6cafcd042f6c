"""Reference functions for exercising norms and verification checks.

The battery mixes functions whose regularity is known by construction:
polynomials (annihilated by high enough degree spaces), radial cusps with a
prescribed Holder exponent at one point, lacunary trigonometric series that
are uniformly rough at every point, and smooth but steep profiles. Each
carries a nominal smoothness used by checks that need to pick sensible
parameters, never as an asserted ground truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .maximal import GridFunction
from .measure import WeightedPointCloud

__all__ = [
    "TestFunction",
    "sample",
    "holder_cusp",
    "lacunary_series",
    "steep_sigmoid",
    "battery",
    "battery_table",
]


@dataclass(frozen=True)
class TestFunction:
    """A named callable on point arrays with advisory regularity metadata."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    nominal_smoothness: float
    description: str
    poly_degree: int | None = None

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.fn(points)


def sample(tf: TestFunction, cloud: WeightedPointCloud) -> GridFunction:
    """Evaluate on the cloud's points; rejects non-finite values."""
    values = np.asarray(tf.fn(cloud.points), dtype=float).ravel()
    meta = {"smoothness": tf.nominal_smoothness}
    if tf.poly_degree is not None:
        meta["poly_degree"] = tf.poly_degree
    return GridFunction(cloud=cloud, values=values, name=tf.name, meta=meta)


def holder_cusp(anchor: np.ndarray, beta: float, scale: float = 1.0):
    """x -> (|x - anchor| / scale)**beta, a one-point cusp of exponent beta."""
    anchor = np.asarray(anchor, dtype=float)

    def fn(points: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(np.atleast_2d(points) - anchor, axis=1)
        return (d / scale) ** beta

    return fn


def lacunary_series(
    direction: np.ndarray, beta: float, scale: float = 1.0, terms: int = 8
):
    """Weierstrass-type sum of cosines with frequencies 2**j.

    sum_j 2**(-j*beta) cos(2**j * pi * <direction, x> / scale) is uniformly
    rough: roughly beta derivatives at every point when 0 < beta < 1.
    """
    direction = np.asarray(direction, dtype=float)

    def fn(points: np.ndarray) -> np.ndarray:
        phase = np.atleast_2d(points) @ direction * (math.pi / scale)
        out = np.zeros(phase.shape[0])
        for j in range(terms):
            out += 2.0 ** (-j * beta) * np.cos(2.0**j * phase)
        return out

    return fn


def steep_sigmoid(direction: np.ndarray, center: np.ndarray, width: float):
    """Smooth tanh front of the given width across a hyperplane."""
    direction = np.asarray(direction, dtype=float)
    center = np.asarray(center, dtype=float)

    def fn(points: np.ndarray) -> np.ndarray:
        t = (np.atleast_2d(points) - center) @ direction / width
        return np.tanh(t)

    return fn


def _unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def battery(cloud: WeightedPointCloud, seed: int = 0) -> tuple[TestFunction, ...]:
    """Deterministic function battery adapted to the cloud's geometry.

    Anchors are actual cloud points and all magnitudes are O(1) after
    rescaling by the diameter, so results are comparable across generators.
    """
    rng = np.random.default_rng(seed)
    lo, hi = cloud.bbox
    mid = 0.5 * (lo + hi)
    diam = cloud.diam
    n = cloud.ambient_dim

    def z(points: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(points) - mid) / diam

    def pick_anchor() -> np.ndarray:
        return cloud.points[int(rng.integers(cloud.size))].copy()

    funcs: list[TestFunction] = [
        TestFunction(
            "const_one", lambda x: np.ones(np.atleast_2d(x).shape[0]),
            math.inf, "constant 1", poly_degree=0,
        ),
        TestFunction(
            "const_minus",
            lambda x: np.full(np.atleast_2d(x).shape[0], -2.5),
            math.inf, "constant -2.5", poly_degree=0,
        ),
        TestFunction(
            "linear_axis", lambda x: 3.0 * z(x)[:, 0] - 0.25,
            math.inf, "affine in the first coordinate", poly_degree=1,
        ),
        TestFunction(
            "linear_blend", lambda x: z(x)[:, 0] - 2.0 * z(x)[:, -1] + 0.5,
            math.inf, "affine blend of first and last coordinates",
            poly_degree=1,
        ),
        TestFunction(
            "quad_axis", lambda x: 4.0 * z(x)[:, 0] ** 2 - z(x)[:, 0] + 1.0,
            math.inf, "quadratic in the first coordinate", poly_degree=2,
        ),
        TestFunction(
            "quad_cross",
            lambda x: z(x)[:, 0] * z(x)[:, -1] + z(x)[:, -1] ** 2 - 0.3,
            math.inf, "quadratic with a cross term", poly_degree=2,
        ),
        TestFunction(
            "cubic_blend",
            lambda x: z(x)[:, 0] ** 3
            - 1.5 * z(x)[:, 0] * z(x)[:, -1]
            + 0.7 * z(x)[:, -1]
            - 0.2,
            math.inf, "cubic blend", poly_degree=3,
        ),
    ]
    for beta in (0.3, 0.6, 0.9):
        anchor = pick_anchor()
        funcs.append(
            TestFunction(
                f"cusp_beta{int(round(100 * beta)):03d}",
                holder_cusp(anchor, beta, scale=diam),
                beta,
                f"radial cusp |x-a|^{beta} at a cloud point",
            )
        )
    a1, a2 = pick_anchor(), pick_anchor()
    funcs.append(
        TestFunction(
            "cusp_pair",
            lambda x, f1=holder_cusp(a1, 0.6, diam), f2=holder_cusp(
                a2, 0.6, diam
            ): f1(x) - 0.5 * f2(x),
            0.6,
            "difference of two cusps of exponent 0.6",
        )
    )
    for beta in (0.5, 1.5):
        direction = _unit_vector(rng, n)
        funcs.append(
            TestFunction(
                f"lacunary_beta{int(round(100 * beta)):03d}",
                lacunary_series(direction, beta, scale=diam),
                beta,
                f"lacunary cosine series, uniform roughness {beta}",
            )
        )
    funcs.append(
        TestFunction(
            "sigmoid_steep",
            steep_sigmoid(_unit_vector(rng, n), pick_anchor(), diam / 40.0),
            math.inf,
            "smooth tanh front of width diam/40",
        )
    )
    funcs.append(
        TestFunction(
            "ridge_abs",
            lambda x, d=_unit_vector(rng, n), c=pick_anchor(): np.abs(
                (np.atleast_2d(x) - c) @ d
            )
            / diam,
            1.0,
            "absolute value of a linear functional (Lipschitz ridge)",
        )
    )
    funcs.append(
        TestFunction(
            "ripple",
            lambda x, d=_unit_vector(rng, n): np.sin(
                6.0 * math.pi * (z(x) @ d)
            ),
            math.inf,
            "three-period sine ripple",
        )
    )
    return tuple(funcs)


def battery_table(functions) -> str:
    """Plain-text table of names, nominal smoothness, and descriptions."""
    rows = ["name                 smoothness  description"]
    for tf in functions:
        s = "inf" if tf.nominal_smoothness == math.inf else (
            f"{tf.nominal_smoothness:.2f}"
        )
        rows.append(f"{tf.name:<20} {s:>10}  {tf.description}")
    return "\n".join(rows)
