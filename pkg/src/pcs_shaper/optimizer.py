"""Shaping optimization: projected gradient ascent over the capped simplex.

The feasible set is {p : a^T p <= P, 1^T p = 1, 0 <= p <= 1} where a holds
the symbol energies and P the average-power budget. The Euclidean
projection onto it is computed by a nested bisection on the two dual
variables: the outer level drives the simplex sum to one, the inner level
enforces the power cap. ``project_reference`` is an independent exact
solver (sorted-breakpoint scans with machine-precision multiplier search)
used only to verify the bisection; ``project_enumerate`` brute-forces
every clamp pattern for small instances and anchors the reference itself.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but keep working
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]

from .capacity import DEFAULT_NODES, CapacityObjective
from .clipping import SystemParams
from .constellation import Constellation, SymbolDistribution
from .ofdm import OfdmConfig

__all__ = [
    "OptimizerConfig",
    "OptimizerTrace",
    "InfeasiblePowerError",
    "numerical_gradient",
    "solve_lambda",
    "project",
    "project_reference",
    "project_enumerate",
    "optimize",
]

# Bracket-collapse tolerances of the projection bisections. These are much
# tighter than the loop-level tolerance so the projection is exact to well
# below the 1e-4 accuracy the verification suite demands; a loose stop can
# return power-slack points that are not the Euclidean projection.
_NU_TOL = 1e-11
_LAMBDA_TOL = 1e-9


class InfeasiblePowerError(ValueError):
    """The power budget is below every symbol energy, so no distribution exists."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters of the projected-gradient loop and its projection."""

    power_budget: float
    max_iters: int = 500
    step_size: float = 1e-4
    tolerance: float = 1e-3
    gradient_step: float = 1e-5
    bisection_bound: float = 1e5
    bisection_max_iters: int = 500

    def __post_init__(self) -> None:
        for name in (
            "power_budget",
            "max_iters",
            "step_size",
            "tolerance",
            "gradient_step",
            "bisection_bound",
            "bisection_max_iters",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.tolerance >= 1:
            raise ValueError(f"tolerance must be < 1, got {self.tolerance}")


@dataclass
class OptimizerTrace:
    """Per-iteration history of one optimization run.

    ``capacities`` holds bits per subcarrier symbol, starting with the
    value at the starting point; ``distributions`` holds every iterate so
    feasibility is checkable after the fact.
    """

    iterations: int
    capacities: list[float]
    step_norms: list[float]
    converged: bool
    final_distribution: SymbolDistribution
    distributions: list[np.ndarray] = field(default_factory=list)
    projection_seconds: list[float] = field(default_factory=list)


def numerical_gradient(f, p, step: float) -> np.ndarray:
    """Central-difference gradient of ``f`` at ``p``.

    Perturbed points are evaluated as raw vectors without re-projection;
    the projection step of the ascent loop restores feasibility. When
    ``f`` exposes ``evaluate_batch`` all 2M evaluations run in one call.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    probs = p.probs if isinstance(p, SymbolDistribution) else np.asarray(p, dtype=float)
    m = len(probs)
    batch = np.vstack([probs + step * np.eye(m), probs - step * np.eye(m)])
    if hasattr(f, "evaluate_batch"):
        values = np.asarray(f.evaluate_batch(batch), dtype=float)
    else:
        values = np.array([f(row) for row in batch], dtype=float)
    return (values[:m] - values[m:]) / (2.0 * step)


@njit(cache=True)
def _clamp_eval(v, lam, a, p):
    """p := min(1, max(0, v - lam*a)); returns (sum(p), a @ p)."""
    total = 0.0
    used = 0.0
    for i in range(v.shape[0]):
        x = v[i] - lam * a[i]
        if x < 0.0:
            x = 0.0
        elif x > 1.0:
            x = 1.0
        p[i] = x
        total += x
        used += a[i] * x
    return total, used


@njit(cache=True)
def _solve_lambda_core(nu, q, a, power, w_bound, max_iters, lam_tol, p):
    """Inner bisection of the nested projection; fills ``p`` and returns sum(p)."""
    m = q.shape[0]
    v = np.empty(m)
    v_max = 0.0
    a_min = np.inf
    for i in range(m):
        v[i] = q[i] - nu
        av = abs(v[i])
        if av > v_max:
            v_max = av
        if 0.0 < a[i] < a_min:
            a_min = a[i]
    total, used = _clamp_eval(v, 0.0, a, p)
    if used <= power + 1e-12 * max(1.0, abs(power)):
        return total  # power cap slack: lambda stays at the lower bracket
    hi = w_bound
    if np.isfinite(a_min):
        bound = v_max / a_min
        if bound > hi:
            hi = bound  # instance-aware widening keeps lambda* bracketed
    lo = 0.0
    it = 0
    while hi - lo > lam_tol and it < max_iters:
        mid = 0.5 * (lo + hi)
        total, used = _clamp_eval(v, mid, a, p)
        if used > power:
            lo = mid
        else:
            hi = mid
        it += 1
    total, used = _clamp_eval(v, hi, a, p)  # feasible side of the bracket
    return total


@njit(cache=True)
def _project_core(q, a, w_bound, max_iters, lam_tol, nu_tol, p):
    """Outer bisection on nu for sum(p) = 1; power is normalized to 1."""
    q_max = 0.0
    for i in range(q.shape[0]):
        if abs(q[i]) > q_max:
            q_max = abs(q[i])
    hi = w_bound if w_bound > q_max + 2.0 else q_max + 2.0
    lo = -hi
    # the lower endpoint must oversatisfy the sum constraint for the
    # bisection invariant; expand if a pathological instance defeats it
    for _ in range(64):
        if _solve_lambda_core(lo, q, a, 1.0, w_bound, max_iters, lam_tol, p) >= 1.0:
            break
        lo *= 2.0
    it = 0
    while hi - lo > nu_tol and it < max_iters:
        nu = 0.5 * (lo + hi)
        total = _solve_lambda_core(nu, q, a, 1.0, w_bound, max_iters, lam_tol, p)
        if abs(total - 1.0) <= 1e-15:
            return
        if total > 1.0:
            lo = nu
        else:
            hi = nu
        it += 1
    _solve_lambda_core(0.5 * (lo + hi), q, a, 1.0, w_bound, max_iters, lam_tol, p)


def solve_lambda(
    nu: float, q: np.ndarray, a: np.ndarray, power: float, cfg: OptimizerConfig
) -> np.ndarray:
    """Inner bisection: the clamp point min(1, max(0, q - lambda*a - nu)).

    Returns the point at the smallest lambda >= 0 with a^T p <= power,
    located by bisection on [0, W] (widened when the instance needs it).
    With the cap already slack at lambda = 0 the clamped vector itself is
    returned.
    """
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    p = np.empty_like(q)
    lam_tol = _LAMBDA_TOL / max(1.0, float(a.max(initial=0.0)))
    _solve_lambda_core(
        float(nu), q, a, float(power), float(cfg.bisection_bound),
        cfg.bisection_max_iters, lam_tol, p,
    )
    return p


def _project_vector(q: np.ndarray, a: np.ndarray, power: float, cfg: OptimizerConfig) -> np.ndarray:
    if power <= 0 or power < a.min() * (1.0 - 1e-12):
        raise InfeasiblePowerError(
            f"power budget {power} is below the smallest symbol energy {a.min()}; "
            "the simplex constraint cannot be met"
        )
    # normalize the power scale so the multiplier brackets are dimensionless
    a_n = np.ascontiguousarray(a / power)
    q = np.ascontiguousarray(q, dtype=float)
    p = np.empty_like(q)
    lam_tol = _LAMBDA_TOL / max(1.0, float(a_n.max(initial=0.0)))
    _project_core(
        q, a_n, float(cfg.bisection_bound), cfg.bisection_max_iters, lam_tol, _NU_TOL, p
    )
    return p


def project(q: np.ndarray, c: Constellation, power: float, cfg: OptimizerConfig) -> SymbolDistribution:
    """Euclidean projection of ``q`` onto the capped simplex of ``c``."""
    q = np.asarray(q, dtype=float)
    if len(q) != c.order:
        raise ValueError(f"point has {len(q)} entries for order {c.order}")
    return SymbolDistribution(_project_vector(q, c.symbol_energies, power, cfg))


# ---------------------------------------------------------------------------
# reference solvers (verification only)
# ---------------------------------------------------------------------------


def _box_simplex_exact(v: np.ndarray) -> np.ndarray:
    """Exact projection onto {0 <= p <= 1, sum p = 1} by breakpoint scan."""
    bps = np.unique(np.concatenate([v - 1.0, v]))
    sums = np.clip(v[None, :] - bps[:, None], 0.0, 1.0).sum(axis=1)
    # sums is non-increasing from len(v) down to 0; locate the crossing of 1
    j = int(np.searchsorted(-sums, -1.0))
    if j == 0 or sums[j - 1] == 1.0:
        nu = bps[max(j - 1, 0)]
    elif sums[j] == sums[j - 1]:
        nu = bps[j]
    else:
        nu = bps[j - 1] + (sums[j - 1] - 1.0) * (bps[j] - bps[j - 1]) / (sums[j - 1] - sums[j])
    return np.clip(v - nu, 0.0, 1.0)


def project_reference(q: np.ndarray, a: np.ndarray, power: float) -> np.ndarray:
    """Exact projection onto the capped simplex, independent of the bisection.

    The power-slack case reduces to an exact box-simplex projection; when
    the cap binds, the power multiplier is isolated by bisection with exact
    inner solves, which is exact to rounding because a^T p(lambda) is
    continuous, piecewise linear and non-increasing.
    """
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    if power < a.min() * (1.0 - 1e-12):
        raise InfeasiblePowerError(f"power budget {power} below min symbol energy {a.min()}")
    p = _box_simplex_exact(q)
    if a @ p <= power * (1.0 + 1e-12):
        return p
    lo, hi = 0.0, 1.0
    for _ in range(200):
        if a @ _box_simplex_exact(q - hi * a) <= power:
            break
        lo, hi = hi, hi * 4.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if a @ _box_simplex_exact(q - mid * a) > power:
            lo = mid
        else:
            hi = mid
    return _box_simplex_exact(q - hi * a)


def project_enumerate(q: np.ndarray, a: np.ndarray, power: float) -> np.ndarray:
    """Brute-force projection via all 3^M clamp patterns (tiny M only)."""
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    m = len(q)
    if m > 10:
        raise ValueError(f"pattern enumeration is exponential; M={m} is too large")
    tol = 1e-9
    best, best_obj = None, np.inf

    def consider(p: np.ndarray) -> None:
        nonlocal best, best_obj
        if np.any(p < -tol) or np.any(p > 1 + tol):
            return
        if abs(p.sum() - 1.0) > tol or a @ p > power * (1 + 1e-9) + tol:
            return
        obj = float(((p - q) ** 2).sum())
        if obj < best_obj - 1e-15:
            best, best_obj = np.clip(p, 0.0, 1.0), obj

    for pattern in itertools.product((0, 1, 2), repeat=m):
        state = np.array(pattern)
        free = state == 2
        p = np.where(state == 1, 1.0, 0.0)
        f = int(free.sum())
        u = float(p.sum())
        if f == 0:
            consider(p)
            continue
        qf, af = q[free], a[free]
        # power cap slack: lambda = 0, nu from the sum constraint
        nu = (qf.sum() + u - 1.0) / f
        cand = p.copy()
        cand[free] = qf - nu
        consider(cand)
        # power cap active: solve the 2x2 stationarity system for (lambda, nu)
        s_a, s_aa = af.sum(), (af * af).sum()
        det = f * s_aa - s_a * s_a
        rhs1 = qf.sum() + u - 1.0
        rhs2 = af @ qf + (a[state == 1].sum() - power)
        if det > 1e-12 * max(1.0, s_aa):
            lam = (f * rhs2 - s_a * rhs1) / det
            nu = (rhs1 - lam * s_a) / f
            if lam >= -tol:
                cand = p.copy()
                cand[free] = qf - lam * af - nu
                consider(cand)
        else:
            # energies constant on the free set: only the combined shift is
            # identified; the power equality must hold by itself
            shift = rhs1 / f
            cand = p.copy()
            cand[free] = qf - shift
            if abs(a @ cand - power) <= tol * max(1.0, power):
                consider(cand)
    if best is None:
        raise InfeasiblePowerError("no feasible clamp pattern found")
    return best


# ---------------------------------------------------------------------------
# projected gradient ascent
# ---------------------------------------------------------------------------


def optimize(
    c: Constellation,
    cfg_ofdm: OfdmConfig,
    sp: SystemParams,
    opt_cfg: OptimizerConfig,
    start: SymbolDistribution,
    nodes: int = DEFAULT_NODES,
    objective=None,
) -> OptimizerTrace:
    """Maximize the shaped capacity over the capped simplex by PGD.

    The ascent step uses the gradient of the per-frame capacity, i.e. the
    per-subcarrier capacity times the N/2 - 1 data subcarriers; with the
    per-subcarrier objective the stated default step size stalls the
    iteration below its own stopping threshold. Reported capacities remain
    bits per subcarrier symbol. The returned distribution is the
    best-capacity iterate encountered, so the trace never regresses below
    its starting value.
    """
    a = c.symbol_energies
    p = np.asarray(start.probs, dtype=float)
    budget = opt_cfg.power_budget
    if a @ p > budget * (1.0 + 1e-6):
        raise ValueError(f"starting point violates the power budget: {a @ p} > {budget}")
    if objective is None:
        objective = CapacityObjective(c, cfg_ofdm, sp, nodes)
        gradient_scale = float(cfg_ofdm.n_data_symbols)
    else:
        gradient_scale = 1.0

    capacities = [float(objective(p))]
    step_norms: list[float] = []
    proj_seconds: list[float] = []
    iterates = [p.copy()]
    best_value, best_p = capacities[0], p.copy()
    converged = False
    iterations = 0

    for _ in range(opt_cfg.max_iters):
        grad = numerical_gradient(objective, p, opt_cfg.gradient_step)
        target = p + opt_cfg.step_size * gradient_scale * grad
        t0 = time.perf_counter()
        p_next = _project_vector(target, a, budget, opt_cfg)
        proj_seconds.append(time.perf_counter() - t0)
        rel_step = float(np.linalg.norm(p_next - p) / np.linalg.norm(p))
        p = p_next
        iterations += 1
        value = float(objective(p))
        capacities.append(value)
        step_norms.append(rel_step)
        iterates.append(p.copy())
        if value > best_value:
            best_value, best_p = value, p.copy()
        if rel_step <= opt_cfg.tolerance:
            converged = True
            break

    return OptimizerTrace(
        iterations=iterations,
        capacities=capacities,
        step_norms=step_norms,
        converged=converged,
        final_distribution=SymbolDistribution(best_p),
        distributions=iterates,
        projection_seconds=proj_seconds,
    )
