"""Geometry of the Grassmann manifold Gr(N, D).

A point is a subspace, represented by an orthonormal N x D basis matrix; two
bases related by a right D x D rotation represent the same point. Tangent
vectors at X are N x D matrices H with X.T @ H = 0. Distances, geodesics and
alignments are all expressed through the principal angles between subspaces,
which this module stores in ascending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, qr_orthonormalize, thin_svd

POINT_ORTHONORMALITY_TOL = 1e-9
TANGENCY_TOL = 1e-9
ALIGNMENT_DIAG_TOL = 1e-8
SPEC_ORTHONORMALITY_TOL = 1e-8
# Smallest singular value of X.T @ Y required for a unique connecting geodesic.
UNIQUE_GEODESIC_CUTOFF = 1e-8
# Principal angles at or below this count as zero when building aligned geodesics.
ZERO_ANGLE_CUTOFF = 1e-8
# Fixed seed for the deterministic orthonormal completion of zero-angle columns.
_COMPLETION_SEED = 1618


class GeodesicNotUnique(ValueError):
    """The subspaces meet at an angle of pi/2, so no unique geodesic joins them."""


@dataclass(frozen=True)
class GrassmannPoint:
    """A D-dimensional subspace of R^N held as an orthonormal basis matrix."""

    basis: np.ndarray

    def __post_init__(self):
        b = as_matrix(self.basis)
        object.__setattr__(self, "basis", b)
        n, d = b.shape
        if not 1 <= d < n:
            raise ValueError(f"need 1 <= D < N, got N={n}, D={d}")
        err = np.max(np.abs(b.T @ b - np.eye(d)))
        if err > POINT_ORTHONORMALITY_TOL:
            raise ValueError(f"basis is not orthonormal (max Gram deviation {err:.3e})")

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def d(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class TangentVector:
    """An N x D matrix in the tangent space at `base`: base.T @ delta = 0."""

    base: GrassmannPoint
    delta: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.delta)
        object.__setattr__(self, "delta", m)
        if m.shape != self.base.basis.shape:
            raise ValueError(
                f"tangent shape {m.shape} does not match base shape {self.base.basis.shape}"
            )
        err = np.max(np.abs(self.base.basis.T @ m))
        if err > TANGENCY_TOL:
            raise ValueError(f"matrix is not tangent at base (max X^T H entry {err:.3e})")

    def norm(self) -> float:
        return float(np.linalg.norm(self.delta))


@dataclass(frozen=True)
class PrincipalAngles:
    """Principal angles between two subspaces, ascending, each in [0, pi/2]."""

    angles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        object.__setattr__(self, "angles", a)
        if a.ndim != 1 or a.size < 1:
            raise ValueError("angles must form a non-empty 1-d array")
        if np.any(a < 0.0) or np.any(a > np.pi / 2):
            raise ValueError("principal angles must lie in [0, pi/2]")
        if np.any(np.diff(a) < 0.0):
            raise ValueError("principal angles must be sorted ascending")

    def norm(self) -> float:
        return float(np.linalg.norm(self.angles))


@dataclass(frozen=True)
class AlignedPair:
    """Rotated representatives with diagonal cross-Gram: x_a.T @ y_a = diag(cos(theta))."""

    x_a: GrassmannPoint
    y_a: GrassmannPoint
    theta: PrincipalAngles

    def __post_init__(self):
        m = self.x_a.basis.T @ self.y_a.basis
        err = np.max(np.abs(m - np.diag(np.cos(self.theta.angles))))
        if err > ALIGNMENT_DIAG_TOL:
            raise ValueError(f"representatives are not aligned (max deviation {err:.3e})")


@dataclass(frozen=True)
class GeodesicSpec:
    """Data for the aligned geodesic t -> x_a cos(theta t) + delta_a sin(theta t)."""

    x_a: GrassmannPoint
    delta_a: TangentVector
    theta: PrincipalAngles

    def __post_init__(self):
        if not np.array_equal(self.delta_a.base.basis, self.x_a.basis):
            raise ValueError("delta_a must be based at x_a")
        d = self.delta_a.delta
        err = np.max(np.abs(d.T @ d - np.eye(d.shape[1])))
        if err > SPEC_ORTHONORMALITY_TOL:
            raise ValueError(f"delta_a columns are not orthonormal (max deviation {err:.3e})")
        if self.theta.angles.size != self.x_a.d:
            raise ValueError("need one principal angle per basis column")


def make_point(m) -> GrassmannPoint:
    """Orthonormalize the columns of a full-rank N x D matrix into a point."""
    return GrassmannPoint(qr_orthonormalize(m).q)


def random_point(seed: int, n: int, d: int) -> GrassmannPoint:
    """Seeded draw from the rotation-invariant distribution on Gr(n, d)."""
    if d >= n:
        raise ValueError(f"Gr(N, D) requires D < N, got N={n}, D={d}")
    g = np.random.default_rng(seed).standard_normal((n, d))
    return make_point(g)


def random_point_rng(rng: np.random.Generator, n: int, d: int) -> GrassmannPoint:
    """Like random_point but driven by a caller-owned Generator."""
    if d >= n:
        raise ValueError(f"Gr(N, D) requires D < N, got N={n}, D={d}")
    return make_point(rng.standard_normal((n, d)))


def random_unit_tangent(rng: np.random.Generator, x: GrassmannPoint) -> TangentVector:
    """Random tangent vector at x with unit Frobenius norm."""
    h = tangent_project(x, rng.standard_normal(x.basis.shape)).delta
    nrm = np.linalg.norm(h)
    while nrm < 1e-12:  # essentially impossible, but keep the draw well-defined
        h = tangent_project(x, rng.standard_normal(x.basis.shape)).delta
        nrm = np.linalg.norm(h)
    return TangentVector(base=x, delta=h / nrm)


def tangent_project(x: GrassmannPoint, a) -> TangentVector:
    """Project an ambient N x D matrix onto the tangent space at x."""
    m = as_matrix(a)
    if m.shape != x.basis.shape:
        raise ValueError(f"expected shape {x.basis.shape}, got {m.shape}")
    delta = m - x.basis @ (x.basis.T @ m)
    return TangentVector(base=x, delta=delta)


def riemannian_gradient(x: GrassmannPoint, euclidean_grad) -> TangentVector:
    """Tangent projection of the ambient gradient of a cost on representatives."""
    return tangent_project(x, euclidean_grad)


def _check_same_space(x: GrassmannPoint, y: GrassmannPoint) -> None:
    if x.basis.shape != y.basis.shape:
        raise ValueError(
            f"points live on different manifolds: {x.basis.shape} vs {y.basis.shape}"
        )


def principal_angles(x: GrassmannPoint, y: GrassmannPoint) -> PrincipalAngles:
    """Principal angles between two subspaces, ascending.

    The angles are arccos of the clamped singular values of X^T Y; to keep
    small angles accurate they are evaluated as arctan2 of paired sine/cosine
    singular values (the sines coming from the projection residual
    Y - X X^T Y), which is the same quantity without the precision loss of
    arccos near 1. Operands are ordered canonically first so the result is
    exactly symmetric in (x, y).
    """
    _check_same_space(x, y)
    x_bytes, y_bytes = x.basis.tobytes(), y.basis.tobytes()
    if x_bytes == y_bytes:
        return PrincipalAngles(np.zeros(x.d))
    a, b = (x, y) if x_bytes <= y_bytes else (y, x)
    w = a.basis.T @ b.basis
    cos_vals = np.clip(np.linalg.svd(w, compute_uv=False), 0.0, 1.0)
    sin_vals = np.sort(np.clip(np.linalg.svd(b.basis - a.basis @ w, compute_uv=False), 0.0, 1.0))
    theta = np.arctan2(sin_vals, cos_vals)
    theta = np.minimum(np.maximum.accumulate(theta), np.pi / 2)
    return PrincipalAngles(theta)


def canonical_distance(x: GrassmannPoint, y: GrassmannPoint) -> float:
    """Geodesic (arc-length) distance: the 2-norm of the principal angles."""
    return principal_angles(x, y).norm()


def align(x: GrassmannPoint, y: GrassmannPoint) -> AlignedPair:
    """Rotate both bases so their cross-Gram matrix becomes diag(cos(theta))."""
    _check_same_space(x, y)
    f = thin_svd(x.basis.T @ y.basis)
    xa = x.basis @ f.u
    ya = y.basis @ f.v
    # Per-column sine/cosine pairs give the angles without arccos noise near 0.
    dots = np.clip(np.sum(xa * ya, axis=0), 0.0, 1.0)
    sines = np.linalg.norm(ya - xa * dots, axis=0)
    theta = np.arctan2(sines, dots)
    theta = np.minimum(np.maximum.accumulate(theta), np.pi / 2)
    return AlignedPair(
        x_a=GrassmannPoint(xa),
        y_a=GrassmannPoint(ya),
        theta=PrincipalAngles(theta),
    )


def log_map(x: GrassmannPoint, y: GrassmannPoint) -> TangentVector:
    """Tangent vector H at x with exp_map(x, H, 1) equal to y.

    Requires the smallest singular value of x.T @ y to exceed
    UNIQUE_GEODESIC_CUTOFF; otherwise the geodesic is not unique and
    GeodesicNotUnique is raised.
    """
    _check_same_space(x, y)
    w = x.basis.T @ y.basis
    smin = float(np.linalg.svd(w, compute_uv=False)[-1])
    if smin <= UNIQUE_GEODESIC_CUTOFF:
        raise GeodesicNotUnique(
            f"subspaces meet near pi/2 (smallest cross-Gram singular value {smin:.3e})"
        )
    resid = y.basis - x.basis @ w
    l = np.linalg.solve(w.T, resid.T).T
    f = thin_svd(l)
    h = (f.u * np.arctan(f.s)) @ f.v.T
    # Kill the numerical drift out of the tangent space left by the solve.
    h = h - x.basis @ (x.basis.T @ h)
    return TangentVector(base=x, delta=h)


def exp_map(x: GrassmannPoint, h: TangentVector, t: float) -> GrassmannPoint:
    """Point reached after time t along the geodesic from x with velocity h."""
    if not np.array_equal(h.base.basis, x.basis):
        raise ValueError("tangent vector is not based at the given point")
    f = thin_svd(h.delta)
    if f.s.size and f.s[0] > np.pi / 2 + 1e-9:
        raise ValueError(
            f"tangent singular values must not exceed pi/2, largest is {f.s[0]:.6f}"
        )
    c = np.cos(f.s * t)
    s = np.sin(f.s * t)
    gamma = (x.basis @ f.v) * c @ f.v.T + (f.u * s) @ f.v.T
    return GrassmannPoint(gamma)


def build_aligned_spec(x: GrassmannPoint, y: GrassmannPoint) -> GeodesicSpec:
    """Aligned-geodesic data between x and y.

    Columns with principal angle above ZERO_ANGLE_CUTOFF get the normalized
    difference direction (y_a - x_a cos theta) / sin theta; zero-angle columns
    are filled with a deterministic orthonormal completion inside the joint
    orthogonal complement, so delta_a always has orthonormal columns.
    """
    pair = align(x, y)
    th = pair.theta.angles
    xa = pair.x_a.basis
    ya = pair.y_a.basis
    n, d = xa.shape
    delta = np.zeros_like(xa)
    moving = th > ZERO_ANGLE_CUTOFF
    # (y_a - x_a cos theta) / sin theta, evaluated as the normalized projection
    # residual so near-zero angles cannot amplify rounding error.
    dots = np.sum(xa * ya, axis=0)
    resid = ya - xa * dots
    for j in np.flatnonzero(moving):
        delta[:, j] = resid[:, j] / np.linalg.norm(resid[:, j])
    frozen = np.flatnonzero(~moving)
    if frozen.size:
        span = np.concatenate([xa, delta[:, moving]], axis=1)
        if frozen.size > n - span.shape[1]:
            raise ValueError(
                "cannot orthonormally complete zero-angle directions: "
                f"{frozen.size} needed but only {n - span.shape[1]} dimensions free"
            )
        g = np.random.default_rng(_COMPLETION_SEED).standard_normal((n, frozen.size))
        g = g - span @ (span.T @ g)
        delta[:, frozen] = qr_orthonormalize(g).q
    return GeodesicSpec(
        x_a=pair.x_a,
        delta_a=TangentVector(base=pair.x_a, delta=delta),
        theta=pair.theta,
    )


def aligned_geodesic_at(spec: GeodesicSpec, t: float) -> GrassmannPoint:
    """Evaluate the aligned geodesic at t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    th = spec.theta.angles
    g = spec.x_a.basis * np.cos(th * t) + spec.delta_a.delta * np.sin(th * t)
    return GrassmannPoint(g)
