"""Best polynomial approximation on cube-localized pieces of a cloud.

All fits work in the cube's own chart z = (x - center)/half_side, which maps
the cube onto [-1, 1]^n and keeps Vandermonde matrices well scaled. Degrees
are indexed by the space parameter k: fits range over polynomials of total
degree <= k - 1, with k = 0 denoting the zero space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .errors import EmptyCube, OutOfRange, RankDeficient, TooFewPoints
from .geometry import Cube, restrict
from .measure import WeightedPointCloud

__all__ = [
    "multi_indices",
    "basis_size",
    "Polynomial",
    "Projector",
    "ApproxResult",
    "make_projector",
    "apply_projector",
    "best_approx",
    "reverse_holder_ratio",
    "fit_in_span",
    "monomial_matrix",
    "uniform_bound",
    "sup_bound_ratio",
]

# Singular values of sqrt(w)V below this relative threshold flag a rank
# deficient Gram matrix (threshold 1e-12 on the Gram spectrum itself).
RANK_RTOL_SV = 1e-6
# Normalized fit errors below CLAMP_REL times the local data scale are
# floating-point noise from an exact fit and are reported as 0.
CLAMP_REL = 1e-11

DEFAULT_MAX_ITER = 50
DEFAULT_RTOL = 1e-8
DEFAULT_DELTA_REL = 1e-8
MIN_POINTS_FACTOR = 2


def multi_indices(n: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples with total degree <= max_degree, graded lexicographic."""
    if n < 1:
        raise OutOfRange(f"ambient dimension must be >= 1, got {n}")
    out: list[tuple[int, ...]] = []
    for deg in range(max(max_degree, -1) + 1):
        block = set()
        for combo in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for j in combo:
                e[j] += 1
            block.add(tuple(e))
        out.extend(sorted(block, reverse=True))
    return out


def basis_size(n: int, k: int) -> int:
    """Dimension of polynomials of total degree <= k - 1 in n variables."""
    if n < 1:
        raise OutOfRange(f"ambient dimension must be >= 1, got {n}")
    if k < 0:
        raise OutOfRange(f"space parameter k must be >= 0, got {k}")
    return math.comb(n + k - 1, n)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in chart coordinates z = (x - origin) / scale.

    ``exponents`` holds one multi-index per row; total degree never exceeds
    ``max_degree``. An empty exponent set is the zero polynomial.
    """

    ambient_dim: int
    max_degree: int
    exponents: np.ndarray
    coefficients: np.ndarray
    origin: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        exps = np.asarray(self.exponents, dtype=int).reshape(-1, self.ambient_dim)
        coef = np.asarray(self.coefficients, dtype=float).ravel()
        if exps.shape[0] != coef.shape[0]:
            raise OutOfRange("exponents and coefficients disagree in length")
        if exps.size and int(exps.sum(axis=1).max()) > self.max_degree:
            raise OutOfRange("an exponent exceeds max_degree")
        origin = np.asarray(self.origin, dtype=float).ravel()
        if origin.shape[0] != self.ambient_dim:
            raise OutOfRange("origin dimension mismatch")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise OutOfRange(f"chart scale must be positive, got {self.scale}")
        for arr in (exps, coef, origin):
            arr.setflags(write=False)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls(n, -1, np.zeros((0, n), dtype=int), np.zeros(0), np.zeros(n))

    @classmethod
    def constant(cls, n: int, value: float) -> "Polynomial":
        return cls(n, 0, np.zeros((1, n), dtype=int), np.array([float(value)]), np.zeros(n))

    @classmethod
    def from_coeff_map(cls, n, mapping, origin=None, scale=1.0) -> "Polynomial":
        items = sorted(mapping.items())
        exps = np.array([e for e, _ in items], dtype=int).reshape(-1, n)
        coef = np.array([c for _, c in items], dtype=float)
        deg = int(exps.sum(axis=1).max()) if len(items) else -1
        if origin is None:
            origin = np.zeros(n)
        return cls(n, deg, exps, coef, origin, scale)

    def coeff_map(self) -> dict[tuple[int, ...], float]:
        return {
            tuple(int(v) for v in e): float(c)
            for e, c in zip(self.exponents, self.coefficients)
        }

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.ambient_dim:
            raise OutOfRange("point dimension mismatch")
        if self.exponents.shape[0] == 0:
            return np.zeros(pts.shape[0])
        z = (pts - self.origin) / self.scale
        V = _vandermonde(z, self.exponents)
        return V @ self.coefficients

    __call__ = evaluate


def _vandermonde(z: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    m, n = z.shape
    V = np.ones((m, exponents.shape[0]))
    for col, e in enumerate(exponents):
        for j in range(n):
            p = int(e[j])
            if p:
                V[:, col] *= z[:, j] ** p
    return V


def monomial_matrix(points: np.ndarray, cube: Cube, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Chart-local monomial values at ``points`` for degree <= k - 1.

    Returns (V, exponents); V has one column per multi-index.
    """
    exps = np.asarray(multi_indices(cube.ambient_dim, k - 1), dtype=int).reshape(
        -1, cube.ambient_dim
    )
    z = (np.atleast_2d(points) - cube.center) / cube.half_side
    return _vandermonde(z, exps), exps


def _weighted_norm(values: np.ndarray, weights: np.ndarray, u: float) -> float:
    if u == math.inf:
        return float(np.max(np.abs(values))) if values.size else 0.0
    return float(np.sum(weights * np.abs(values) ** u) ** (1.0 / u))


def fit_in_span(
    V: np.ndarray,
    w: np.ndarray,
    f: np.ndarray,
    u: float,
    *,
    max_iter: int = DEFAULT_MAX_ITER,
    rtol: float = DEFAULT_RTOL,
    delta_rel: float = DEFAULT_DELTA_REL,
) -> tuple[np.ndarray, float, int, bool]:
    """Minimize (sum_i w_i |f_i - (V c)_i|^u)^(1/u) over coefficients c.

    u = 2 is solved directly; other u by iteratively reweighted least
    squares warm-started from the u = 2 solution, with residual smoothing
    delta = delta_rel * max|f|. Returns (c, value, iterations, converged);
    the reported value is the true objective at the best iterate seen.
    """
    m, d = V.shape
    if d == 0:
        value = _weighted_norm(f, w, u)
        return np.zeros(0), value, 0, True
    scale = float(np.max(np.abs(f))) if m else 0.0
    mass = float(w.sum())
    if scale == 0.0:
        return np.zeros(d), 0.0, 0, True

    if d == 1 and np.all(V[:, 0] == 1.0):
        if u == 1.0:
            # Weighted median: the exact minimizer of sum w|f - c|.
            order = np.argsort(f, kind="stable")
            cum = np.cumsum(w[order])
            c = float(f[order][np.searchsorted(cum, 0.5 * mass)])
            value = float(np.sum(w * np.abs(f - c)))
            if value <= CLAMP_REL * scale * mass:
                value = 0.0
            return np.array([c]), value, 0, True
        coef = np.array([float(np.sum(w * f) / mass)])
        resid = f - coef[0]
    else:
        sw = np.sqrt(w)
        coef, _, rank, sv = np.linalg.lstsq(V * sw[:, None], sw * f, rcond=None)
        if rank < d or (sv.size and sv[-1] <= sv[0] * RANK_RTOL_SV):
            raise RankDeficient(
                f"local Gram matrix is rank deficient ({rank} of {d} columns usable)"
            )
        resid = f - V @ coef

    if u == 2.0:
        value = float(np.sqrt(np.sum(w * resid * resid)))
        iters, converged = 0, True
    else:
        delta2 = (delta_rel * scale) ** 2
        obj = float(np.sum(w * np.abs(resid) ** u) ** (1.0 / u))
        best_obj, best_coef = obj, coef
        iters, converged = 0, False
        exponent = 0.5 * u - 1.0
        # Plain reweighting oscillates for u > 2; relaxing the step by
        # 1/(u - 1) restores monotone convergence to the minimizer.
        damping = 1.0 / (u - 1.0) if u > 2.0 else 1.0
        for _ in range(max_iter):
            omega = w * (resid * resid + delta2) ** exponent
            G = V.T @ (V * omega[:, None])
            rhs = V.T @ (omega * f)
            try:
                step = np.linalg.solve(G, rhs)
            except np.linalg.LinAlgError:
                so = np.sqrt(omega)
                step = np.linalg.lstsq(V * so[:, None], so * f, rcond=None)[0]
            coef = coef + damping * (step - coef)
            iters += 1
            resid = f - V @ coef
            new_obj = float(np.sum(w * np.abs(resid) ** u) ** (1.0 / u))
            if new_obj < best_obj:
                best_obj, best_coef = new_obj, coef
            if abs(new_obj - obj) <= rtol * max(obj, delta_rel * scale):
                converged = True
                break
            obj = new_obj
        value, coef = best_obj, best_coef

    if value <= CLAMP_REL * scale * mass ** (1.0 / u):
        value = 0.0
    return np.asarray(coef, dtype=float), value, iters, converged


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector onto degree <= k - 1 polynomials over a cube.

    ``basis`` is orthonormal for <f, g> = sum_i w_i f(x_i) g(x_i) over the
    cloud points inside the cube.
    """

    cube: Cube
    k: int
    basis: tuple[Polynomial, ...]
    gram_cond: float
    indices: np.ndarray
    mass: float
    _weights: np.ndarray
    _basis_values: np.ndarray
    _coeff_matrix: np.ndarray
    _exponents: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.basis)


def make_projector(
    cloud: WeightedPointCloud,
    cube: Cube,
    k: int,
    min_points_factor: int = MIN_POINTS_FACTOR,
) -> Projector:
    """Construct the local projector; the cube must hold enough points.

    Requires at least ``min_points_factor * basis_size`` points (and one
    point even for k = 0) so that the Gram matrix is trustworthy.
    """
    d = basis_size(cloud.ambient_dim, k)
    idx, mass = restrict(cloud, cube)
    needed = max(1, min_points_factor * d)
    if idx.size < needed:
        raise TooFewPoints(
            f"cube holds {idx.size} points, need {needed} for k={k} in dim "
            f"{cloud.ambient_dim}"
        )
    w = cloud.weights[idx]
    if d == 0:
        n = cloud.ambient_dim
        return Projector(
            cube=cube,
            k=k,
            basis=(),
            gram_cond=1.0,
            indices=idx,
            mass=mass,
            _weights=w,
            _basis_values=np.zeros((idx.size, 0)),
            _coeff_matrix=np.zeros((0, 0)),
            _exponents=np.zeros((0, n), dtype=int),
        )
    V, exps = monomial_matrix(cloud.points[idx], cube, k)
    G = V.T @ (V * w[:, None])
    lam, U = np.linalg.eigh(G)
    if lam[-1] <= 0.0 or lam[0] <= lam[-1] * 1e-12:
        raise RankDeficient(
            f"Gram spectrum [{lam[0]:.3e}, {lam[-1]:.3e}] is rank deficient"
        )
    cond = float(lam[-1] / lam[0])
    C = U / np.sqrt(lam)
    B = V @ C
    basis = tuple(
        Polynomial(
            cloud.ambient_dim,
            k - 1,
            exps,
            C[:, j],
            cube.center,
            cube.half_side,
        )
        for j in range(d)
    )
    return Projector(
        cube=cube,
        k=k,
        basis=basis,
        gram_cond=cond,
        indices=idx,
        mass=mass,
        _weights=w,
        _basis_values=B,
        _coeff_matrix=C,
        _exponents=exps,
    )


def _values_on(cloud: WeightedPointCloud, f) -> np.ndarray:
    values = np.asarray(getattr(f, "values", f), dtype=float).ravel()
    if values.shape[0] != cloud.size:
        raise OutOfRange(
            f"function has {values.shape[0]} samples, cloud has {cloud.size}"
        )
    return values


def apply_projector(proj: Projector, f, cloud: WeightedPointCloud | None = None) -> Polynomial:
    """P_Q f = sum_beta <f, p_beta> p_beta as a chart-local polynomial.

    ``f`` may be a GridFunction or a plain value array over the full cloud.
    One refinement pass keeps reproduction exact to roundoff even when the
    Gram matrix is poorly conditioned.
    """
    values = np.asarray(getattr(f, "values", f), dtype=float).ravel()
    fv = values[proj.indices]
    n = proj._exponents.shape[1] if proj._exponents.size else proj.cube.ambient_dim
    if proj.dimension == 0:
        return Polynomial.zero(n)
    B, w = proj._basis_values, proj._weights
    a = B.T @ (w * fv)
    a += B.T @ (w * (fv - B @ a))
    coef = proj._coeff_matrix @ a
    return Polynomial(
        n,
        proj.k - 1,
        proj._exponents,
        coef,
        proj.cube.center,
        proj.cube.half_side,
    )


def sup_bound_ratio(proj: Projector, f) -> float:
    """max |P_Q f| over cube points divided by the average of |f| there."""
    values = np.asarray(getattr(f, "values", f), dtype=float).ravel()
    fv = values[proj.indices]
    avg = float(np.sum(proj._weights * np.abs(fv)) / proj.mass)
    if proj.dimension == 0:
        return 0.0
    B, w = proj._basis_values, proj._weights
    a = B.T @ (w * fv)
    a += B.T @ (w * (fv - B @ a))
    peak = float(np.max(np.abs(B @ a)))
    if avg == 0.0:
        return math.inf if peak > 0.0 else 0.0
    return peak / avg


def uniform_bound(proj: Projector, u: float) -> float:
    """sum_beta ||p_beta||_u * ||p_beta||_u' over the cube (u' conjugate)."""
    if not 1.0 <= u:
        raise OutOfRange(f"u must be >= 1, got {u}")
    dual = math.inf if u == 1.0 else u / (u - 1.0)
    total = 0.0
    for j in range(proj.dimension):
        vals = proj._basis_values[:, j]
        total += _weighted_norm(vals, proj._weights, u) * _weighted_norm(
            vals, proj._weights, dual
        )
    return total


@dataclass(frozen=True)
class ApproxResult:
    """Outcome of a local best-approximation problem.

    ``value`` is the plain integral error E_k; ``normalized`` divides by
    mass(Q)^(1/u), i.e. the average form used by the maximal operators.
    """

    value: float
    normalized: float
    minimizer: Polynomial
    iterations: int
    converged: bool


def best_approx(
    cloud: WeightedPointCloud,
    cube: Cube,
    f,
    k: int,
    u: float,
    *,
    max_iter: int = DEFAULT_MAX_ITER,
    rtol: float = DEFAULT_RTOL,
    delta_rel: float = DEFAULT_DELTA_REL,
    min_points_factor: int = MIN_POINTS_FACTOR,
) -> ApproxResult:
    """Best degree <= k - 1 approximation of f over the cube in L^u."""
    if not (1.0 <= u < math.inf):
        raise OutOfRange(f"u must lie in [1, inf), got {u}")
    values = _values_on(cloud, f)
    d = basis_size(cloud.ambient_dim, k)
    idx, mass = restrict(cloud, cube)
    needed = max(1, min_points_factor * d)
    if idx.size < needed:
        raise TooFewPoints(
            f"cube holds {idx.size} points, need {needed} for k={k}"
        )
    fv = values[idx]
    w = cloud.weights[idx]
    if d == 0:
        value = _weighted_norm(fv, w, u)
        return ApproxResult(
            value=value,
            normalized=value / mass ** (1.0 / u),
            minimizer=Polynomial.zero(cloud.ambient_dim),
            iterations=0,
            converged=True,
        )
    V, exps = monomial_matrix(cloud.points[idx], cube, k)
    coef, value, iters, converged = fit_in_span(
        V, w, fv, u, max_iter=max_iter, rtol=rtol, delta_rel=delta_rel
    )
    minimizer = Polynomial(
        cloud.ambient_dim, k - 1, exps, coef, cube.center, cube.half_side
    )
    return ApproxResult(
        value=value,
        normalized=value / mass ** (1.0 / u),
        minimizer=minimizer,
        iterations=iters,
        converged=converged,
    )


def reverse_holder_ratio(
    cloud: WeightedPointCloud,
    cube: Cube,
    poly: Polynomial,
    q: float,
    u: float,
) -> float:
    """Ratio of average L^q to average L^u size of a polynomial on the cube.

    Returns +inf when the denominator vanishes while the numerator does not,
    and 1 when both vanish.
    """
    if not (1.0 <= u <= q):
        raise OutOfRange(f"need 1 <= u <= q, got u={u}, q={q}")
    idx, mass = restrict(cloud, cube)
    if idx.size == 0:
        raise EmptyCube("cube contains no cloud points")
    vals = poly.evaluate(cloud.points[idx])
    w = cloud.weights[idx]
    num = float((np.sum(w * np.abs(vals) ** q) / mass) ** (1.0 / q))
    den = float((np.sum(w * np.abs(vals) ** u) / mass) ** (1.0 / u))
    if den == 0.0:
        return math.inf if num > 0.0 else 1.0
    return num / den
