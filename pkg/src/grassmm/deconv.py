"""Blind sparse deconvolution: y ~ a (*) x with unit-norm kernel a and sparse x.

The kernel is a point of Gr(N, 1), which makes the estimate sign-ambiguous:
(a, x) and (-a, -x) explain the data equally well. The cost used everywhere is

    f(a, x) = min over s in {+1, -1} of ||y - s * (a (*) x)||_2^2 + lambda * ||x||_1

so it is exactly invariant under flipping the kernel representative. The sign
attaining the minimum is called the active sign; gradients and surrogate steps
are taken on that branch. Circular convolution is computed as the direct
O(N^2) sum; the Fourier identity is reserved for test oracles and the
Lipschitz bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    BlockProblem,
    ConvergenceReport,
    IterationTrace,
    SolverConfig,
    SurrogateOracle,
    run_block_mm,
)
from .grassmann import GrassmannPoint, random_point, riemannian_gradient

ZERO_GRAD_CUTOFF = 1e-14  # Riemannian gradient norms at or below this skip the kernel step
_KERNEL_NORM_TOL = 1e-10

_conv_index_cache: dict[int, np.ndarray] = {}


def _conv_index(n: int) -> np.ndarray:
    idx = _conv_index_cache.get(n)
    if idx is None:
        grid = np.arange(n)
        idx = (grid[:, None] - grid[None, :]) % n
        _conv_index_cache[n] = idx
    return idx


def _as_signal(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-d array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def circular_convolution(a, x) -> np.ndarray:
    """Circular convolution out[i] = sum_k a[k] * x[(i - k) mod N], direct sum."""
    a = _as_signal(a, "a")
    x = _as_signal(x, "x")
    if a.size != x.size:
        raise ValueError(f"length mismatch: {a.size} vs {x.size}")
    return x[_conv_index(a.size)] @ a


def circular_correlation(v, w) -> np.ndarray:
    """Circular cross-correlation out[k] = sum_i v[(i - k) mod N] * w[i]."""
    v = _as_signal(v, "v")
    w = _as_signal(w, "w")
    if v.size != w.size:
        raise ValueError(f"length mismatch: {v.size} vs {w.size}")
    return w @ v[_conv_index(v.size)]


def soft_threshold(v, tau: float) -> np.ndarray:
    """Proximal operator of tau * ||.||_1: shrink each entry toward zero by tau."""
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def lipschitz_bound(v) -> float:
    """Curvature bound 2 * max |DFT(v)|^2 for w -> ||y - v (*) w||_2^2."""
    v = _as_signal(v, "v")
    return float(2.0 * np.max(np.abs(np.fft.fft(v)) ** 2))


@dataclass(frozen=True)
class DeconvProblem:
    """Observed signal plus the sparsity weight of the cost."""

    y: np.ndarray
    lam: float

    def __post_init__(self):
        y = _as_signal(self.y, "y")
        object.__setattr__(self, "y", y)
        if self.lam < 0.0:
            raise ValueError(f"lambda must be non-negative, got {self.lam}")

    @property
    def n(self) -> int:
        return self.y.size


@dataclass(frozen=True)
class DeconvState:
    """Current kernel estimate (a point of Gr(N, 1)) and sparse code estimate."""

    a: GrassmannPoint
    x: np.ndarray

    def __post_init__(self):
        x = _as_signal(self.x, "x")
        object.__setattr__(self, "x", x)
        if self.a.d != 1:
            raise ValueError("kernel must be a point of Gr(N, 1)")
        if self.a.n != x.size:
            raise ValueError(f"kernel length {self.a.n} does not match code length {x.size}")
        nrm = float(np.linalg.norm(self.a.basis[:, 0]))
        if abs(nrm - 1.0) > _KERNEL_NORM_TOL:
            raise ValueError(f"kernel norm deviates from 1 by {abs(nrm - 1.0):.3e}")

    @property
    def kernel(self) -> np.ndarray:
        return self.a.basis[:, 0]


@dataclass(frozen=True)
class SyntheticInstance:
    """Ground-truth planted instance: y = true_a (*) true_x + noise."""

    seed: int
    true_a: np.ndarray
    true_x: np.ndarray
    y: np.ndarray
    sparsity: float
    kernel_support: int
    noise_sigma: float

    @property
    def n(self) -> int:
        return self.y.size


def active_sign(problem: DeconvProblem, state: DeconvState) -> float:
    """Sign s minimizing ||y - s * (a (*) x)||; +1 on ties."""
    u = circular_convolution(state.kernel, state.x)
    return 1.0 if float(problem.y @ u) >= 0.0 else -1.0


def working_state(problem: DeconvProblem, state: DeconvState) -> DeconvState:
    """The same state with the kernel representative flipped to its active sign."""
    if active_sign(problem, state) >= 0.0:
        return state
    return DeconvState(a=GrassmannPoint(-state.a.basis), x=state.x)


def deconv_cost(problem: DeconvProblem, state: DeconvState) -> float:
    """Sign-invariant cost: best-sign squared residual plus lambda * ||x||_1."""
    u = circular_convolution(state.kernel, state.x)
    r_plus = problem.y - u
    r_minus = problem.y + u
    data = min(float(r_plus @ r_plus), float(r_minus @ r_minus))
    return data + problem.lam * float(np.sum(np.abs(state.x)))


def grad_x(problem: DeconvProblem, state: DeconvState) -> np.ndarray:
    """Gradient of ||y - a (*) x||^2 in x for the given kernel representative."""
    r = problem.y - circular_convolution(state.kernel, state.x)
    return -2.0 * circular_correlation(state.kernel, r)


def grad_a(problem: DeconvProblem, state: DeconvState) -> np.ndarray:
    """Gradient of ||y - a (*) x||^2 in the kernel representative."""
    r = problem.y - circular_convolution(state.kernel, state.x)
    return -2.0 * circular_correlation(state.x, r)


def prox_step_x(problem: DeconvProblem, state: DeconvState, step: float) -> np.ndarray:
    """One proximal gradient step on the code: shrink(x - step * grad, step * lambda)."""
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    return soft_threshold(state.x - step * grad_x(problem, state), step * problem.lam)


def riemannian_step_a(problem: DeconvProblem, state: DeconvState, step: float) -> GrassmannPoint:
    """One geodesic gradient step on the kernel.

    Moves along the Gr(N, 1) geodesic a cos(||h||) + (h / ||h||) sin(||h||)
    with h = -step * (tangent-projected gradient); returns the kernel unchanged
    when the projected gradient norm is at or below ZERO_GRAD_CUTOFF.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    eg = grad_a(problem, state)[:, None]
    rg = riemannian_gradient(state.a, eg)
    if rg.norm() <= ZERO_GRAD_CUTOFF:
        return state.a
    h = -step * rg.delta[:, 0]
    hn = float(np.linalg.norm(h))
    new = state.kernel * np.cos(hn) + (h / hn) * np.sin(hn)
    return GrassmannPoint(new[:, None])


def generate_instance(
    seed: int,
    n: int,
    sparsity: float,
    kernel_support: int,
    noise_sigma: float = 0.0,
) -> SyntheticInstance:
    """Planted instance: Bernoulli-Gaussian code, unit Gaussian kernel on the
    first `kernel_support` samples, plus white noise. Deterministic per seed;
    the draw order is code mask, code amplitudes, kernel, noise."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not 0.0 < sparsity < 1.0:
        raise ValueError(f"sparsity must lie strictly between 0 and 1, got {sparsity}")
    if not 1 <= kernel_support <= n:
        raise ValueError(f"kernel_support must lie in [1, {n}], got {kernel_support}")
    if noise_sigma < 0.0:
        raise ValueError(f"noise_sigma must be non-negative, got {noise_sigma}")
    rng = np.random.default_rng(seed)
    mask = rng.random(n) < sparsity
    amplitudes = rng.standard_normal(n)
    true_x = np.where(mask, amplitudes, 0.0)
    raw = np.zeros(n)
    raw[:kernel_support] = rng.standard_normal(kernel_support)
    true_a = raw / np.linalg.norm(raw)
    y = circular_convolution(true_a, true_x) + noise_sigma * rng.standard_normal(n)
    return SyntheticInstance(
        seed=seed,
        true_a=true_a,
        true_x=true_x,
        y=y,
        sparsity=sparsity,
        kernel_support=kernel_support,
        noise_sigma=noise_sigma,
    )


def recovery_score(estimate: DeconvState, truth: SyntheticInstance) -> float:
    """Best absolute inner product between the estimated kernel and the true
    kernel over all circular shifts and both signs; 1 means perfect recovery."""
    if estimate.a.n != truth.n:
        raise ValueError(f"length mismatch: {estimate.a.n} vs {truth.n}")
    return float(min(np.max(np.abs(circular_correlation(estimate.kernel, truth.true_a))), 1.0))


def heuristic_lambda(y, a0_kernel) -> float:
    """Sparsity weight 0.1 * ||corr(a0, y)||_inf used when none is configured."""
    return float(0.1 * np.max(np.abs(circular_correlation(a0_kernel, y))))


def default_init(problem: DeconvProblem, window: int) -> DeconvState:
    """Data-driven start: the max-energy length-`window` segment of y as kernel
    (placed at the leading indices), zero code."""
    y = problem.y
    n = problem.n
    if not 1 <= window <= n:
        raise ValueError(f"window must lie in [1, {n}], got {window}")
    sq = y * y
    energies = np.array([sq[(i + np.arange(window)) % n].sum() for i in range(n)])
    start = int(np.argmax(energies))
    raw = np.zeros(n)
    raw[:window] = y[(start + np.arange(window)) % n]
    nrm = np.linalg.norm(raw)
    if nrm <= 1e-12:
        raw[:] = 0.0
        raw[0] = 1.0
        nrm = 1.0
    return DeconvState(a=GrassmannPoint((raw / nrm)[:, None]), x=np.zeros(n))


def random_init(problem: DeconvProblem, seed: int) -> DeconvState:
    """Seeded random unit kernel, zero code."""
    return DeconvState(a=random_point(seed, problem.n, 1), x=np.zeros(problem.n))


def lasso_warm_start(problem: DeconvProblem, init: DeconvState, max_iter: int = 500) -> DeconvState:
    """Refine the code by proximal gradient steps with the kernel held fixed.

    Useful before a joint solve: with the kernel frozen this is a plain
    l1-regularized least-squares solve, so the code settles on a stable
    sparse support before the kernel is allowed to move.
    """
    if max_iter < 0:
        raise ValueError(f"max_iter must be nonnegative, got {max_iter}")
    bound = lipschitz_bound(init.kernel)
    if bound <= 0.0:
        return init
    step = 1.0 / bound
    x = init.x
    for _ in range(max_iter):
        x_next = prox_step_x(problem, DeconvState(a=init.a, x=x), step)
        done = np.max(np.abs(x_next - x)) <= 1e-12
        x = x_next
        if done:
            break
    return DeconvState(a=init.a, x=x)


def build_block_problem(problem: DeconvProblem, step_scale: float = 1.0) -> BlockProblem:
    """Wire the deconvolution cost and its two surrogates into a BlockProblem.

    Both surrogates are Lipschitz quadratic models of the data term around the
    active-sign representative, with curvature L / step_scale where L is the
    Fourier bound from the current fixed block; step_scale = 1 makes them true
    majorants. The kernel surrogate is minimized by one geodesic gradient step
    of length step_scale / L, the code surrogate by one proximal step.
    """
    if step_scale <= 0.0:
        raise ValueError(f"step_scale must be positive, got {step_scale}")
    n = problem.n
    y = problem.y

    def state_of(g: GrassmannPoint, x: np.ndarray) -> DeconvState:
        return DeconvState(a=g, x=np.asarray(x, dtype=float))

    def cost(g: GrassmannPoint, x: np.ndarray) -> float:
        return deconv_cost(problem, state_of(g, x))

    # --- kernel block -----------------------------------------------------
    def a_minimize(g: GrassmannPoint, x: np.ndarray) -> GrassmannPoint:
        ws = working_state(problem, state_of(g, x))
        lip = lipschitz_bound(ws.x)
        if lip <= 0.0:
            return ws.a
        return riemannian_step_a(problem, ws, step_scale / lip)

    def a_evaluate(candidate: GrassmannPoint, g: GrassmannPoint, x: np.ndarray) -> float:
        ws = working_state(problem, state_of(g, x))
        anchor_vec = ws.kernel
        lip = lipschitz_bound(ws.x)
        curvature = lip / step_scale
        resid = y - circular_convolution(anchor_vec, ws.x)
        base = float(resid @ resid)
        grad = -2.0 * circular_correlation(ws.x, resid)
        penalty = problem.lam * float(np.sum(np.abs(ws.x)))

        def quad(vec: np.ndarray) -> float:
            diff = vec - anchor_vec
            return base + float(grad @ diff) + 0.5 * curvature * float(diff @ diff)

        b = candidate.basis[:, 0]
        return min(quad(b), quad(-b)) + penalty

    # --- code block --------------------------------------------------------
    def x_minimize(g: GrassmannPoint, x: np.ndarray) -> np.ndarray:
        ws = working_state(problem, state_of(g, x))
        lip = lipschitz_bound(ws.kernel)
        return prox_step_x(problem, ws, step_scale / lip)

    def x_evaluate(candidate: np.ndarray, g: GrassmannPoint, x: np.ndarray) -> float:
        ws = working_state(problem, state_of(g, x))
        candidate = np.asarray(candidate, dtype=float)
        lip = lipschitz_bound(ws.kernel)
        curvature = lip / step_scale
        resid = y - circular_convolution(ws.kernel, ws.x)
        base = float(resid @ resid)
        grad = -2.0 * circular_correlation(ws.kernel, resid)
        diff = candidate - ws.x
        return (
            base
            + float(grad @ diff)
            + 0.5 * curvature * float(diff @ diff)
            + problem.lam * float(np.sum(np.abs(candidate)))
        )

    def x_smooth_along(g: GrassmannPoint, x: np.ndarray, direction: np.ndarray, h: float) -> bool:
        # The l1 term has kinks where a coordinate of x crosses zero; reject
        # directions whose +/- h sweep reaches or touches such a crossing.
        x = np.asarray(x, dtype=float)
        margin = np.abs(x) - h * np.abs(np.asarray(direction, dtype=float))
        return bool(np.all(margin > 1e-12))

    # --- diagnostics --------------------------------------------------------
    def g_grad(g: GrassmannPoint, x: np.ndarray) -> np.ndarray:
        ws = working_state(problem, state_of(g, x))
        return grad_a(problem, ws)[:, None]

    def c_grad(g: GrassmannPoint, x: np.ndarray) -> np.ndarray:
        # Proximal-gradient residual, scaled to gradient units; zero exactly at
        # fixed points of the code update.
        ws = working_state(problem, state_of(g, x))
        lip = lipschitz_bound(ws.kernel)
        return lip * (ws.x - prox_step_x(problem, ws, 1.0 / lip))

    return BlockProblem(
        cost=cost,
        grassmann_surrogate=SurrogateOracle(evaluate=a_evaluate, minimize=a_minimize),
        convex_surrogate=SurrogateOracle(
            evaluate=x_evaluate, minimize=x_minimize, smooth_along=x_smooth_along
        ),
        convex_constraint=lambda v: np.asarray(v, dtype=float),
        dims=(n, 1, n),
        grassmann_grad=g_grad,
        convex_grad=c_grad,
    )


def solve_deconv(
    problem: DeconvProblem,
    init: DeconvState,
    config: SolverConfig = SolverConfig(),
    step_scale: float = 1.0,
) -> tuple[IterationTrace, ConvergenceReport]:
    """Alternate kernel and code surrogate steps from `init` until stagnation."""
    block_problem = build_block_problem(problem, step_scale=step_scale)
    return run_block_mm(block_problem, init.a, init.x, config)


def final_state(problem: DeconvProblem, report: ConvergenceReport) -> DeconvState:
    """The converged iterate of a solve_deconv run as a DeconvState."""
    return DeconvState(a=report.final_g, x=report.final_c)
