"""Two-block majorization-minimization driver, assumption audits, diagnostics.

The driver alternates surrogate minimizations over a Grassmann-valued block G
and a convex-set-valued block c:

    G_{i+1} = argmin_G  g_G(G | G_i, c_i)
    c_{i+1} = argmin_c  g_c(c | G_{i+1}, c_i)

and enforces the resulting descent chain f(G_i, c_i) >= f(G_{i+1}, c_i) >=
f(G_{i+1}, c_{i+1}) at runtime. The audit functions are Monte-Carlo checks of
the surrogate assumptions (tightness, majorization, directional-derivative
match, geodesic quasiconvexity) and of rotation invariance of the cost; they
can refute an assumption on sampled evidence but never prove it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grassmann import (
    GeodesicNotUnique,
    GrassmannPoint,
    aligned_geodesic_at,
    build_aligned_spec,
    canonical_distance,
    exp_map,
    random_point_rng,
    random_unit_tangent,
    riemannian_gradient,
)
from .linalg import as_matrix, orthonormalize_gaussian, thin_svd

GRASSMANN_BLOCK = "grassmann"
CONVEX_BLOCK = "convex"

DESCENT_SLACK = 1e-10          # slack allowed on each link of the descent chain
MONOTONICITY_TOL = 1e-8        # cost increase beyond this aborts the run
FEASIBILITY_TOL = 1e-9         # distance of a convex update from its projection
TIGHTNESS_TOL = 1e-9
MAJORIZATION_TOL = 1e-9
DERIVATIVE_MATCH_TOL = 1e-4
DERIVATIVE_FD_STEPS = (1e-4, 1e-5)
QUASICONVEXITY_TOL = 1e-8
QUASICONVEXITY_RADIUS = np.pi / 4   # default geodesic sampling radius around anchors
HOMOGENEITY_TOL = 1e-9
STATIONARITY_FD_STEP = 1e-5
STATIONARITY_PASS = -1e-4      # scores at or above this count as stationary
_ZERO_GRAD_FALLBACK_FD = 1e-6  # step for the finite-difference gradient fallback


class MonotonicityViolation(RuntimeError):
    """The cost increased beyond MONOTONICITY_TOL during a surrogate update."""


class InfeasibleBlockError(RuntimeError):
    """A surrogate minimize returned a value outside its feasible set."""


@dataclass(frozen=True)
class SurrogateOracle:
    """Surrogate for one block, anchored at the current iterate pair.

    evaluate(candidate, anchor_g, anchor_c) -> float value of the surrogate.
    minimize(anchor_g, anchor_c) -> new feasible value for the block.
    smooth_along, when given, reports whether the segment candidate +/- h*direction
    stays clear of non-smooth points; the derivative-match audit skips (and
    counts) directions where it returns False.
    """

    evaluate: Callable
    minimize: Callable
    smooth_along: Optional[Callable] = None


@dataclass(frozen=True)
class BlockProblem:
    """A two-block problem: cost f(G, c), one surrogate per block, constraints.

    dims is (n, d, c_len): G lives on Gr(n, d) and c in R^c_len. The optional
    gradient callables feed the per-iteration diagnostic columns; when absent
    the driver falls back to finite differences. grassmann_membership, when
    given, restricts the Grassmann feasible set; audit sampling rejects points
    outside it.
    """

    cost: Callable[[GrassmannPoint, np.ndarray], float]
    grassmann_surrogate: SurrogateOracle
    convex_surrogate: SurrogateOracle
    convex_constraint: Callable[[np.ndarray], np.ndarray]
    dims: tuple[int, int, int]
    grassmann_grad: Optional[Callable] = None
    convex_grad: Optional[Callable] = None
    grassmann_membership: Optional[Callable[[GrassmannPoint], bool]] = None


@dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 5000
    dist_tol: float = 1e-6
    cost_tol: float = 1e-10
    audit_every: int = 0
    audit_samples: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.dist_tol <= 0.0 or self.cost_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.audit_every < 0:
            raise ValueError("audit_every must be non-negative (0 disables audits)")
        if self.audit_samples < 1:
            raise ValueError("audit_samples must be at least 1")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    f: float
    f_after_g: float
    dc_step: float
    grad_norm_g: float
    grad_norm_c: float
    audit_ok: Optional[bool] = None


@dataclass
class IterationTrace:
    """Per-iteration history of a run; one record per outer iteration."""

    records: list[IterationRecord] = field(default_factory=list)

    def append(self, record: IterationRecord) -> None:
        self.records.append(record)

    def costs(self) -> np.ndarray:
        return np.array([r.f for r in self.records])

    def dc_steps(self) -> np.ndarray:
        return np.array([r.dc_step for r in self.records])

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    iterations: int
    final_cost: float
    final_dc: float
    stationarity_score: float
    stationarity_directions: int
    stationarity_seed: int
    tie_suspected: bool
    audit_summary: Optional[dict]
    final_g: GrassmannPoint
    final_c: np.ndarray


@dataclass(frozen=True)
class AuditResult:
    """Outcome of one sampled audit.

    `worst` is the headline number: max deviation for tightness, derivative
    match and homogeneity; min margin for majorization; max interior excess
    for quasiconvexity.
    """

    audit: str
    block: Optional[str]
    passed: bool
    worst: float
    threshold: float
    checked: int
    skipped: int = 0


def _oracle_for(problem: BlockProblem, block: str) -> SurrogateOracle:
    if block == GRASSMANN_BLOCK:
        return problem.grassmann_surrogate
    if block == CONVEX_BLOCK:
        return problem.convex_surrogate
    raise ValueError(f"unknown block {block!r}; use 'grassmann' or 'convex'")


def _complement_basis(g: GrassmannPoint) -> np.ndarray:
    full = np.linalg.qr(g.basis, mode="complete")[0]
    return full[:, g.d:]


def _fd_grad_norm_grassmann(problem: BlockProblem, g: GrassmannPoint, c: np.ndarray) -> float:
    # Directional derivatives along an orthonormal tangent basis recover the
    # full Riemannian gradient norm; only used when no gradient callable exists.
    comp = _complement_basis(g)
    h = _ZERO_GRAD_FALLBACK_FD
    total = 0.0
    for i in range(comp.shape[1]):
        for j in range(g.d):
            delta = np.zeros_like(g.basis)
            delta[:, j] = comp[:, i]
            tv = riemannian_gradient(g, delta)
            plus = problem.cost(exp_map(g, tv, h), c)
            minus = problem.cost(exp_map(g, tv, -h), c)
            total += ((plus - minus) / (2.0 * h)) ** 2
    return float(np.sqrt(total))


def _fd_grad_norm_convex(problem: BlockProblem, g: GrassmannPoint, c: np.ndarray) -> float:
    h = _ZERO_GRAD_FALLBACK_FD
    total = 0.0
    for i in range(c.size):
        step = h * (1.0 + abs(c[i]))
        cp = c.copy()
        cp[i] += step
        cm = c.copy()
        cm[i] -= step
        total += ((problem.cost(g, cp) - problem.cost(g, cm)) / (2.0 * step)) ** 2
    return float(np.sqrt(total))


def _gradient_norms(problem: BlockProblem, g: GrassmannPoint, c: np.ndarray) -> tuple[float, float]:
    if problem.grassmann_grad is not None:
        gn_g = riemannian_gradient(g, problem.grassmann_grad(g, c)).norm()
    else:
        gn_g = _fd_grad_norm_grassmann(problem, g, c)
    if problem.convex_grad is not None:
        gn_c = float(np.linalg.norm(problem.convex_grad(g, c)))
    else:
        gn_c = _fd_grad_norm_convex(problem, g, c)
    return gn_g, gn_c


def _tie_suspected(dc_steps: list[float], converged: bool, dist_tol: float) -> bool:
    # Minimizer ties show up as sustained oscillation of the step lengths: the
    # iterate keeps hopping a non-vanishing distance without the trend dying out.
    if converged or len(dc_steps) < 10:
        return False
    tail = np.asarray(dc_steps[-10:])
    if np.mean(tail) <= dist_tol:
        return False
    diffs = np.diff(tail)
    flips = np.sum(diffs[1:] * diffs[:-1] < 0.0)
    return bool(flips >= 4 and tail[-1] > 0.5 * np.max(tail))


def run_block_mm(
    problem: BlockProblem,
    init_g: GrassmannPoint,
    init_c,
    config: SolverConfig = SolverConfig(),
) -> tuple[IterationTrace, ConvergenceReport]:
    """Run the alternating surrogate scheme until the iterates stagnate.

    Stops as soon as the Grassmann step distance falls below dist_tol and the
    relative cost change falls below cost_tol in the same iteration; raises
    MonotonicityViolation if either half-update increases the cost by more
    than MONOTONICITY_TOL, and InfeasibleBlockError (naming the block) if a
    surrogate returns a value outside its feasible set.
    """
    n, d, c_len = problem.dims
    if init_g.basis.shape != (n, d):
        raise ValueError(f"init_g has shape {init_g.basis.shape}, expected {(n, d)}")
    c = np.asarray(problem.convex_constraint(np.asarray(init_c, dtype=float)), dtype=float)
    if c.shape != (c_len,):
        raise ValueError(f"init_c has shape {c.shape}, expected {(c_len,)}")
    g = init_g

    trace = IterationTrace()
    converged = False
    iterations = 0
    final_dc = float("inf")
    audit_flags: list[bool] = []
    audit_worsts: list[float] = []

    for i in range(config.max_iter):
        f_curr = float(problem.cost(g, c))

        g_next = problem.grassmann_surrogate.minimize(g, c)
        if not isinstance(g_next, GrassmannPoint) or g_next.basis.shape != (n, d):
            raise InfeasibleBlockError("grassmann block update is not a point of Gr(n, d)")
        if problem.grassmann_membership is not None and not problem.grassmann_membership(g_next):
            raise InfeasibleBlockError("grassmann block update left the feasible set")
        f_after_g = float(problem.cost(g_next, c))
        if f_after_g > f_curr + MONOTONICITY_TOL:
            raise MonotonicityViolation(
                f"grassmann update increased the cost by {f_after_g - f_curr:.3e} "
                f"at iteration {i}"
            )

        c_raw = np.asarray(problem.convex_surrogate.minimize(g_next, c), dtype=float)
        if c_raw.shape != (c_len,):
            raise InfeasibleBlockError(
                f"convex block update has shape {c_raw.shape}, expected {(c_len,)}"
            )
        c_proj = np.asarray(problem.convex_constraint(c_raw), dtype=float)
        if np.linalg.norm(c_proj - c_raw) > FEASIBILITY_TOL * (1.0 + np.linalg.norm(c_raw)):
            raise InfeasibleBlockError("convex block update is infeasible")
        c_next = c_proj
        f_next = float(problem.cost(g_next, c_next))
        if f_next > f_after_g + MONOTONICITY_TOL:
            raise MonotonicityViolation(
                f"convex update increased the cost by {f_next - f_after_g:.3e} "
                f"at iteration {i}"
            )

        dc = canonical_distance(g_next, g)
        gn_g, gn_c = _gradient_norms(problem, g_next, c_next)

        audit_ok: Optional[bool] = None
        if config.audit_every > 0 and i % config.audit_every == 0:
            anchor = [(g, c)]
            tight_g = audit_tightness(problem, GRASSMANN_BLOCK, anchor)
            tight_c = audit_tightness(problem, CONVEX_BLOCK, anchor)
            major_g = audit_majorization(
                problem, GRASSMANN_BLOCK, anchor, config.audit_samples, config.seed + i
            )
            major_c = audit_majorization(
                problem, CONVEX_BLOCK, anchor, config.audit_samples, config.seed + i
            )
            checks = [tight_g, tight_c, major_g, major_c]
            audit_ok = all(r.passed for r in checks)
            audit_flags.append(audit_ok)
            audit_worsts.append(max(tight_g.worst, tight_c.worst))

        trace.append(
            IterationRecord(
                iteration=i,
                f=f_curr,
                f_after_g=f_after_g,
                dc_step=dc,
                grad_norm_g=gn_g,
                grad_norm_c=gn_c,
                audit_ok=audit_ok,
            )
        )

        rel_change = abs(f_curr - f_next) / max(1.0, abs(f_curr))
        g, c = g_next, c_next
        final_dc = dc
        iterations = i + 1
        if dc < config.dist_tol and rel_change < config.cost_tol:
            converged = True
            break

    stat_dirs = config.audit_samples
    stat_score = stationarity_check(problem, g, c, stat_dirs, config.seed)
    summary = None
    if audit_flags:
        summary = {
            "runs": len(audit_flags),
            "all_passed": all(audit_flags),
            "worst_tightness": max(audit_worsts),
        }
    report = ConvergenceReport(
        converged=converged,
        iterations=iterations,
        final_cost=float(problem.cost(g, c)),
        final_dc=final_dc,
        stationarity_score=stat_score,
        stationarity_directions=stat_dirs,
        stationarity_seed=config.seed,
        tie_suspected=_tie_suspected([r.dc_step for r in trace], converged, config.dist_tol),
        audit_summary=summary,
        final_g=g,
        final_c=c,
    )
    return trace, report


def stationarity_check(
    problem: BlockProblem,
    g: GrassmannPoint,
    c,
    directions: int,
    seed: int,
) -> float:
    """Smallest sampled forward directional slope of the cost at (g, c).

    Probes `directions` random unit tangent directions at g along geodesics and
    the same number of random unit directions in the convex block (projected
    back onto the feasible set). Values at or above STATIONARITY_PASS are
    consistent with first-order stationarity.
    """
    c = np.asarray(c, dtype=float)
    rng = np.random.default_rng(seed)
    h = STATIONARITY_FD_STEP
    f0 = float(problem.cost(g, c))
    worst = np.inf
    for _ in range(directions):
        tv = random_unit_tangent(rng, g)
        slope = (float(problem.cost(exp_map(g, tv, h), c)) - f0) / h
        worst = min(worst, slope)
    for _ in range(directions):
        direction = rng.standard_normal(c.size)
        direction /= np.linalg.norm(direction)
        probe = np.asarray(problem.convex_constraint(c + h * direction), dtype=float)
        slope = (float(problem.cost(g, probe)) - f0) / h
        worst = min(worst, slope)
    return float(worst)


def audit_tightness(problem: BlockProblem, block: str, anchors: list) -> AuditResult:
    """Check g(anchor | anchor) == f(anchor) for each anchor pair."""
    oracle = _oracle_for(problem, block)
    worst = 0.0
    for g, c in anchors:
        f0 = float(problem.cost(g, c))
        candidate = g if block == GRASSMANN_BLOCK else c
        dev = abs(float(oracle.evaluate(candidate, g, c)) - f0)
        worst = max(worst, dev)
    return AuditResult(
        audit="tightness",
        block=block,
        passed=worst <= TIGHTNESS_TOL,
        worst=worst,
        threshold=TIGHTNESS_TOL,
        checked=len(anchors),
    )


def audit_majorization(
    problem: BlockProblem,
    block: str,
    anchors: list,
    samples: int,
    seed: int,
) -> AuditResult:
    """Check g(candidate | anchor) >= f(candidate at that block) on random candidates.

    Reports the worst (smallest) margin; margins below -MAJORIZATION_TOL fail.
    """
    oracle = _oracle_for(problem, block)
    n, d, c_len = problem.dims
    rng = np.random.default_rng(seed)
    worst = np.inf
    checked = 0
    skipped = 0
    for g, c in anchors:
        for _ in range(samples):
            if block == GRASSMANN_BLOCK:
                candidate = random_point_rng(rng, n, d)
                if problem.grassmann_membership is not None and not problem.grassmann_membership(
                    candidate
                ):
                    skipped += 1
                    continue
                margin = float(oracle.evaluate(candidate, g, c)) - float(
                    problem.cost(candidate, c)
                )
            else:
                scale = 1.0 + np.linalg.norm(c) / np.sqrt(c_len)
                raw = c + scale * rng.standard_normal(c_len)
                candidate = np.asarray(problem.convex_constraint(raw), dtype=float)
                margin = float(oracle.evaluate(candidate, g, c)) - float(
                    problem.cost(g, candidate)
                )
            worst = min(worst, margin)
            checked += 1
    if checked == 0:
        worst = 0.0
    return AuditResult(
        audit="majorization",
        block=block,
        passed=checked > 0 and worst >= -MAJORIZATION_TOL,
        worst=float(worst),
        threshold=MAJORIZATION_TOL,
        checked=checked,
        skipped=skipped,
    )


def audit_derivative_match(
    problem: BlockProblem,
    block: str,
    anchor: tuple,
    directions: int,
    seed: int,
) -> AuditResult:
    """Compare directional slopes of the surrogate and the cost at the anchor.

    Slopes are central finite differences at the steps in DERIVATIVE_FD_STEPS,
    along geodesics for the Grassmann block and straight lines for the convex
    block. Directions flagged non-smooth by the oracle's smooth_along guard are
    skipped and counted.
    """
    oracle = _oracle_for(problem, block)
    g, c = anchor
    c = np.asarray(c, dtype=float)
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    skipped = 0
    h_guard = max(DERIVATIVE_FD_STEPS)
    for _ in range(directions):
        if block == GRASSMANN_BLOCK:
            tv = random_unit_tangent(rng, g)
            direction = tv.delta
        else:
            direction = rng.standard_normal(c.size)
            direction /= np.linalg.norm(direction)
        if oracle.smooth_along is not None and not oracle.smooth_along(g, c, direction, h_guard):
            skipped += 1
            continue
        for h in DERIVATIVE_FD_STEPS:
            if block == GRASSMANN_BLOCK:
                p_plus = exp_map(g, tv, h)
                p_minus = exp_map(g, tv, -h)
                sg = (float(oracle.evaluate(p_plus, g, c)) - float(oracle.evaluate(p_minus, g, c))) / (2 * h)
                sf = (float(problem.cost(p_plus, c)) - float(problem.cost(p_minus, c))) / (2 * h)
            else:
                c_plus = c + h * direction
                c_minus = c - h * direction
                sg = (float(oracle.evaluate(c_plus, g, c)) - float(oracle.evaluate(c_minus, g, c))) / (2 * h)
                sf = (float(problem.cost(g, c_plus)) - float(problem.cost(g, c_minus))) / (2 * h)
            mismatch = abs(sg - sf) / max(1.0, abs(sf))
            worst = max(worst, mismatch)
        checked += 1
    return AuditResult(
        audit="derivative_match",
        block=block,
        passed=checked > 0 and worst <= DERIVATIVE_MATCH_TOL,
        worst=worst,
        threshold=DERIVATIVE_MATCH_TOL,
        checked=checked,
        skipped=skipped,
    )


def audit_quasiconvexity(
    problem: BlockProblem,
    anchor: tuple,
    pairs: int,
    t_samples: int,
    seed: int,
    radius: float = QUASICONVEXITY_RADIUS,
) -> AuditResult:
    """Check the Grassmann surrogate has no interior bump along sampled geodesics.

    Endpoint pairs are drawn inside the geodesic ball of the given radius
    around the anchor point (each endpoint via the exponential map along a
    random direction), filtered through the problem's membership predicate.
    Pairs whose connecting geodesic is not unique are skipped and counted.
    For each surviving pair the surrogate is evaluated on a uniform t-grid and
    must not exceed max(endpoint values) by more than QUASICONVEXITY_TOL.
    """
    oracle = problem.grassmann_surrogate
    g_anchor, c_anchor = anchor
    c_anchor = np.asarray(c_anchor, dtype=float)
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    skipped = 0

    def draw_endpoint() -> Optional[GrassmannPoint]:
        for _ in range(20):
            tv = random_unit_tangent(rng, g_anchor)
            r = rng.uniform(0.0, radius)
            candidate = exp_map(g_anchor, tv, r)
            if problem.grassmann_membership is None or problem.grassmann_membership(candidate):
                return candidate
        return None

    ts = np.linspace(0.0, 1.0, t_samples)
    for _ in range(pairs):
        x = draw_endpoint()
        y = draw_endpoint()
        if x is None or y is None:
            skipped += 1
            continue
        try:
            spec = build_aligned_spec(x, y)
        except GeodesicNotUnique:
            skipped += 1
            continue
        if spec.theta.angles[-1] >= np.pi / 2 - 1e-9:
            skipped += 1
            continue
        end_vals = (
            float(oracle.evaluate(x, g_anchor, c_anchor)),
            float(oracle.evaluate(y, g_anchor, c_anchor)),
        )
        cap = max(end_vals)
        for t in ts:
            val = float(oracle.evaluate(aligned_geodesic_at(spec, t), g_anchor, c_anchor))
            worst = max(worst, val - cap)
        checked += 1
    return AuditResult(
        audit="quasiconvexity",
        block=GRASSMANN_BLOCK,
        passed=checked > 0 and worst <= QUASICONVEXITY_TOL,
        worst=worst,
        threshold=QUASICONVEXITY_TOL,
        checked=checked,
        skipped=skipped,
    )


def audit_homogeneity(
    problem: BlockProblem,
    anchors: list,
    rotations: int,
    seed: int,
) -> AuditResult:
    """Check the cost depends on G only through its column span.

    Samples random D x D rotations R and compares f(G R, c) against f(G, c).
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    checked = 0
    for g, c in anchors:
        f0 = float(problem.cost(g, c))
        for _ in range(rotations):
            r = orthonormalize_gaussian(rng, g.d, g.d)
            rotated = GrassmannPoint(g.basis @ r)
            worst = max(worst, abs(float(problem.cost(rotated, c)) - f0))
            checked += 1
    return AuditResult(
        audit="homogeneity",
        block=None,
        passed=worst <= HOMOGENEITY_TOL,
        worst=worst,
        threshold=HOMOGENEITY_TOL,
        checked=checked,
    )


def builtin_subspace_plus_mean(a, d: int) -> BlockProblem:
    """Fit a D-dimensional subspace plus a mean vector to columns of A.

    The cost is the squared residual of projecting the mean-centered columns
    onto the subspace: f(G, c) = || (A - c 1^T) - G G^T (A - c 1^T) ||_F^2.
    Both surrogates are the exact cost restricted to one block, with closed-form
    minimizers: the top-D left singular vectors of the centered matrix for G,
    and the column mean of the projection residual for c.
    """
    a = as_matrix(a)
    n, m = a.shape
    if not 1 <= d < min(n, m):
        raise ValueError(f"need 1 <= D < min(N, M), got D={d} for a {n}x{m} matrix")

    def cost(g: GrassmannPoint, c: np.ndarray) -> float:
        b = a - np.asarray(c, dtype=float)[:, None]
        r = b - g.basis @ (g.basis.T @ b)
        return float(np.sum(r * r))

    def minimize_g(g: GrassmannPoint, c: np.ndarray) -> GrassmannPoint:
        b = a - np.asarray(c, dtype=float)[:, None]
        return GrassmannPoint(thin_svd(b).u[:, :d])

    def minimize_c(g: GrassmannPoint, c: np.ndarray) -> np.ndarray:
        b = a - np.asarray(c, dtype=float)[:, None]
        residual = a - g.basis @ (g.basis.T @ b)
        return residual.mean(axis=1)

    def grad_g(g: GrassmannPoint, c: np.ndarray) -> np.ndarray:
        b = a - np.asarray(c, dtype=float)[:, None]
        return -2.0 * (b @ (b.T @ g.basis))

    def grad_c(g: GrassmannPoint, c: np.ndarray) -> np.ndarray:
        b = a - np.asarray(c, dtype=float)[:, None]
        r = b - g.basis @ (g.basis.T @ b)
        return -2.0 * r.sum(axis=1)

    return BlockProblem(
        cost=cost,
        grassmann_surrogate=SurrogateOracle(
            evaluate=lambda candidate, g, c: cost(candidate, c),
            minimize=minimize_g,
        ),
        convex_surrogate=SurrogateOracle(
            evaluate=lambda candidate, g, c: cost(g, candidate),
            minimize=minimize_c,
        ),
        convex_constraint=lambda v: np.asarray(v, dtype=float),
        dims=(n, d, n),
        grassmann_grad=grad_g,
        convex_grad=grad_c,
    )


def subspace_plus_mean_init(a, d: int, seed: int) -> tuple[GrassmannPoint, np.ndarray]:
    """Default start: the column mean of A and a seeded random subspace."""
    a = as_matrix(a)
    rng = np.random.default_rng(seed)
    return random_point_rng(rng, a.shape[0], d), a.mean(axis=1)
