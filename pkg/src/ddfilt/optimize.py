"""Derivative-free minimization of filter area and chi over pulse positions.

Sequences are optimized in a symmetric half-parametrization: only the first
floor(n/2) pulse centers are free, the rest mirror around 0.5 (odd n pins
the center pulse at 0.5).  A bounded Nelder-Mead simplex search with a
graded penalty for ordering/non-overlap violations minimizes either the
closed-form filter area (building spectrum-independent 'ofdd' sets) or the
spectrum-dependent chi ('lodd').

Sets are built by continuation: a sweep ascending in dimensionless duration
where each point is seeded by the previous solution and the first point by
the sin^2-spaced sequence, whose fixed relative locations are the natural
short-duration starting branch.  Everything here is deterministic: no
unseeded randomness anywhere, so identical inputs rebuild identical sets.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize as _simplex_minimize

from .errors import BranchJumpWarning
from .filters import FilterEvalContext, area_analytic, filter_at_cutoff
from .sequences import SequenceSet, spacing_feasible, udd_deltas
from .spectra import NoiseSpectrum

#: Largest supported pulse count; the optimization becomes numerically
#: challenging beyond this and the set builder refuses.
MAX_PULSES = 20

# Strict-ordering floor so penalty-feasible points are also constructible.
_TINY_GAP = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings for one duration point and for continuation sweeps.

    ``grid`` is (tau_min, tau_max, points) for set building; a ``tau_max``
    of None resolves to 2 * n * pi, past the crossover into the dephased
    regime.
    """

    max_iterations: int = 2000
    objective_rtol: float = 1e-9
    initial_step: float = 0.02
    penalty_weight: float = 1e6
    restarts: int = 1
    grid: tuple[float, float | None, int] = (0.01, None, 3000)

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.objective_rtol > 0.0 or not self.initial_step > 0.0:
            raise ValueError("tolerances must be positive")
        tau_min, tau_max, points = self.grid
        if not tau_min > 0.0:
            raise ValueError("grid tau_min must be positive")
        if tau_max is not None and tau_max <= tau_min:
            raise ValueError("grid tau_max must exceed tau_min")
        if points < 2:
            raise ValueError("grid needs at least 2 points")


@dataclass(frozen=True)
class ConvergenceReport:
    tau_prime: float
    objective: float
    iterations: int
    converged: bool
    message: str = ""


def _mirror(n: int, free: np.ndarray) -> np.ndarray:
    if n % 2:
        return np.concatenate([free, [0.5], 1.0 - free[::-1]])
    return np.concatenate([free, 1.0 - free[::-1]])


def _violation(n: int, free: np.ndarray, gap: float) -> float:
    """Total constraint violation of a half-parameter vector (0 if feasible)."""
    floor = max(gap / 2.0, _TINY_GAP)
    need = max(gap, _TINY_GAP)
    viol = max(0.0, floor - free[0])
    for a, b in zip(free, free[1:]):
        viol += max(0.0, need - (b - a))
    if n % 2:
        viol += max(0.0, need - (0.5 - free[-1]))
    else:
        viol += max(0.0, need - (1.0 - 2.0 * free[-1]))
    return viol


def _initial_simplex(x0: np.ndarray, step: float, gap: float) -> np.ndarray:
    """Axis-aligned simplex around x0, stepping into the roomier direction."""
    m = len(x0)
    simplex = np.tile(x0, (m + 1, 1))
    lo_bound = max(gap / 2.0, _TINY_GAP)
    for k in range(m):
        above = (x0[k + 1] if k + 1 < m else 0.5) - x0[k]
        below = x0[k] - (x0[k - 1] if k > 0 else lo_bound)
        direction = 1.0 if above >= below else -1.0
        room = max(above if direction > 0 else below, _TINY_GAP)
        simplex[k + 1, k] += direction * min(step, 0.4 * room)
    return simplex


def _search(
    objective: Callable[[np.ndarray], float],
    n: int,
    tau_prime: float,
    gap: float,
    initial_deltas: Sequence[float],
    cfg: OptimizerConfig,
) -> tuple[tuple[float, ...], float, ConvergenceReport]:
    """Penalized simplex search shared by the area and chi objectives."""
    deltas0 = np.array([float(d) for d in initial_deltas])
    if len(deltas0) != n:
        raise ValueError(f"seed has {len(deltas0)} pulses, expected {n}")
    m = n // 2
    x0 = deltas0[:m].copy()
    if np.max(np.abs(_mirror(n, x0) - deltas0)) > 1e-9:
        raise ValueError("seed pulse positions must be symmetric around 0.5")
    if m and _violation(n, x0, gap) > 0.0:
        raise ValueError(
            f"constraint-infeasible start at tau_prime={tau_prime}: {tuple(deltas0)}"
        )

    def full_objective(x: np.ndarray) -> float:
        return objective(tuple(_mirror(n, x)))

    f_seed = full_objective(x0)
    if m == 0:
        # n = 1 has no free parameters: the lone symmetric pulse sits at 0.5.
        return tuple(deltas0), f_seed, ConvergenceReport(
            tau_prime=tau_prime, objective=f_seed, iterations=0, converged=True
        )

    ceiling = abs(f_seed) + 1.0
    weight = cfg.penalty_weight

    def penalized(x: np.ndarray) -> float:
        viol = _violation(n, x, gap)
        if viol > 0.0:
            return ceiling + weight * viol * (1.0 + viol)
        return full_objective(x)

    fatol = max(1e-16, cfg.objective_rtol * abs(f_seed))
    candidates = [(f_seed, x0)]
    total_fev = 0
    converged = True
    message = ""
    x_start, step = x0, cfg.initial_step
    best_so_far = f_seed
    for _attempt in range(1 + cfg.restarts):
        res = _simplex_minimize(
            penalized,
            x_start,
            method="Nelder-Mead",
            options=dict(
                maxfev=cfg.max_iterations,
                xatol=1e-7,
                fatol=fatol,
                initial_simplex=_initial_simplex(x_start, step, gap),
                disp=False,
            ),
        )
        total_fev += res.nfev
        if not res.success:
            converged = False
            message = str(res.message)
        x_res = np.asarray(res.x, dtype=float)
        if _violation(n, x_res, gap) > 0.0:
            break
        f_res = full_objective(x_res)
        candidates.append((f_res, x_res))
        if f_res >= best_so_far - fatol:
            break
        best_so_far = f_res
        x_start, step = x_res, cfg.initial_step / 4.0

    f_best = min(f for f, _ in candidates)
    tol = cfg.objective_rtol * max(abs(f_best), 1e-300)
    tied = [(f, x) for f, x in candidates if f <= f_best + tol]
    _, x_pick = min(tied, key=lambda c: float(np.linalg.norm(c[1] - x0)))
    f_pick = full_objective(x_pick)
    if np.array_equal(x_pick, x0):
        deltas = tuple(deltas0)
    else:
        deltas = tuple(_mirror(n, x_pick))
    return deltas, f_pick, ConvergenceReport(
        tau_prime=tau_prime,
        objective=f_pick,
        iterations=total_fev,
        converged=converged,
        message=message,
    )


def minimize_area(
    n: int,
    tau_prime: float,
    tau_pi_prime: float,
    initial_deltas: Sequence[float],
    config: OptimizerConfig | None = None,
) -> tuple[tuple[float, ...], float, ConvergenceReport]:
    """Minimize the filter area over symmetric pulse positions at one duration.

    Returns ``(deltas, area, report)``.  The result never has a larger area
    than the seed: if the search finds nothing better, the seed is returned
    unchanged.
    """
    cfg = config or OptimizerConfig()
    gap = tau_pi_prime / tau_prime if tau_pi_prime > 0.0 else 0.0

    def objective(deltas: tuple[float, ...]) -> float:
        return area_analytic(FilterEvalContext(deltas, tau_prime, tau_pi_prime))

    return _search(objective, n, tau_prime, gap, initial_deltas, cfg)


def lodd_optimize(
    spectrum: NoiseSpectrum,
    n: int,
    tau_prime: float,
    tau_pi_prime: float,
    initial_deltas: Sequence[float],
    config: OptimizerConfig | None = None,
    *,
    chi_rtol: float = 1e-9,
) -> tuple[tuple[float, ...], float, ConvergenceReport]:
    """Minimize chi directly for a known spectrum ('locally optimized' route).

    Same parametrization and guarantees as :func:`minimize_area`, with the
    spectrum-dependent overlap integral as the objective.
    """
    from .coherence import chi

    cfg = config or OptimizerConfig()
    gap = tau_pi_prime / tau_prime if tau_pi_prime > 0.0 else 0.0

    def objective(deltas: tuple[float, ...]) -> float:
        ctx = FilterEvalContext(deltas, tau_prime, tau_pi_prime)
        return chi(spectrum, ctx, rtol=chi_rtol).chi

    return _search(objective, n, tau_prime, gap, initial_deltas, cfg)


def _continuation(
    objective_at: Callable[[float], Callable[[tuple[float, ...]], float]],
    n: int,
    tau_pi_prime: float,
    cfg: OptimizerConfig,
    generator: str,
    log: list | None,
    extra_meta: dict[str, str] | None = None,
) -> SequenceSet:
    if not 1 <= n <= MAX_PULSES:
        raise ValueError(
            f"n={n} unsupported: the set builder handles 1..{MAX_PULSES} pulses"
        )
    tau_min, tau_max, points = cfg.grid
    if tau_max is None:
        tau_max = 2.0 * n * math.pi
    taus = np.linspace(tau_min, tau_max, points)
    step = (tau_max - tau_min) / (points - 1)

    baseline = udd_deltas(n)
    usable = [tp for tp in taus if spacing_feasible(baseline, tau_pi_prime / tp)]
    if not usable:
        raise ValueError(
            f"no grid point in [{tau_min}, {tau_max}] admits n={n} pulses of "
            f"duration tau_pi_prime={tau_pi_prime}"
        )
    skipped = len(taus) - len(usable)

    entries = []
    seed = baseline
    crossover = None
    f_udd_tol = cfg.objective_rtol
    for tp in usable:
        gap = tau_pi_prime / tp if tau_pi_prime > 0.0 else 0.0
        obj = objective_at(tp)
        deltas, value, report = _search(obj, n, tp, gap, seed, cfg)
        # keep every entry at or below the fixed-position baseline
        f_udd = obj(baseline)
        if value > f_udd * (1.0 + f_udd_tol) + 1e-300:
            deltas2, value2, report2 = _search(obj, n, tp, gap, baseline, cfg)
            if value2 < value:
                deltas, value, report = deltas2, value2, report2
        if entries:
            jump = max(abs(a - b) for a, b in zip(deltas, entries[-1][1]))
            if jump > 5.0 * step:
                warnings.warn(
                    f"pulse-position jump of {jump:.3g} between tau_prime="
                    f"{entries[-1][0]:.4g} and {tp:.4g} (grid step {step:.3g}); "
                    "the continuation may have lost its local branch",
                    BranchJumpWarning,
                )
        entries.append((float(tp), deltas))
        if log is not None:
            log.append((float(tp), value, report.iterations, report.converged))
        seed = deltas
        if crossover is None and filter_at_cutoff(deltas, tp, tau_pi_prime) >= 1.0:
            crossover = tp
        if crossover is not None and tp >= 2.0 * crossover:
            break

    meta = {
        "generator": generator,
        "grid": f"{tau_min:g},{tau_max:g},{points}",
        "objective_rtol": f"{cfg.objective_rtol:g}",
        "initial_step": f"{cfg.initial_step:g}",
        "max_iterations": str(cfg.max_iterations),
        "restarts": str(cfg.restarts),
    }
    if skipped:
        meta["skipped_points"] = str(skipped)
    if extra_meta:
        meta.update(extra_meta)
    return SequenceSet(n=n, tau_pi_prime=tau_pi_prime, entries=tuple(entries), meta=meta)


def build_ofdd_set(
    n: int,
    tau_pi_prime: float = 0.0,
    config: OptimizerConfig | None = None,
    *,
    log: list | None = None,
) -> SequenceSet:
    """Continuation sweep minimizing the filter area over the config grid.

    Each duration point is seeded by the previous solution (the first by
    the sin^2-spaced sequence); per-entry areas never exceed that baseline
    at the same duration.  The sweep stops once the duration passes twice
    the crossover where the filter at the cutoff reaches one, which bounds
    the useful range of the set.  Pass a list as ``log`` to collect
    ``(tau_prime, area, iterations, converged)`` rows.
    """
    cfg = config or OptimizerConfig()

    def objective_at(tau_prime: float):
        def objective(deltas: tuple[float, ...]) -> float:
            return area_analytic(FilterEvalContext(deltas, tau_prime, tau_pi_prime))

        return objective

    return _continuation(objective_at, n, tau_pi_prime, cfg, "ofdd", log)


def build_lodd_set(
    spectrum: NoiseSpectrum,
    n: int,
    tau_pi_prime: float = 0.0,
    config: OptimizerConfig | None = None,
    *,
    chi_rtol: float = 1e-8,
    log: list | None = None,
) -> SequenceSet:
    """Continuation sweep minimizing chi for a known spectrum."""
    from .coherence import chi

    cfg = config or OptimizerConfig()

    def objective_at(tau_prime: float):
        def objective(deltas: tuple[float, ...]) -> float:
            ctx = FilterEvalContext(deltas, tau_prime, tau_pi_prime)
            return chi(spectrum, ctx, rtol=chi_rtol).chi

        return objective

    return _continuation(
        objective_at, n, tau_pi_prime, cfg, "lodd", log,
        extra_meta={"spectrum": spectrum.describe()},
    )
