"""Coherence under classical dephasing noise: the overlap integral and oracles.

For a qubit initially along y, coherence after a decoupling sequence of
duration tau is W(tau) = e^(-chi(tau)) with the overlap integral

    chi(tau) = (2 / pi) * integral_0^inf S(omega) F_n(omega tau) / omega^2 domega.

In dimensionless units (omega' = omega/omega_d, tau' = omega_d tau,
S' = S/omega_d) the integrand is S'(omega') F(omega' tau') / omega'^2 and
the value of chi is unchanged, so everything here works dimensionless.
The observable error is (1 - W) / 2, saturating at 0.5 when fully dephased.

An independent time-domain Monte Carlo oracle synthesizes noise
trajectories as random-phase cosine sums and accumulates the toggled phase
integral directly; it validates the frequency-domain route end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CoverageError, NoCrossingError
from .filters import FilterEvalContext, filter_value
from .quadrature import integrate_oscillatory
from .sequences import PulseSequence, SequenceSet, cpmg_deltas, udd_deltas, check_spacing
from .spectra import NoiseSpectrum

#: Error threshold defining the coherence time: 1/e of the asymptotic 0.5.
COHERENCE_THRESHOLD = 0.5 / math.e

STRATEGIES = ("free", "cpmg", "udd", "ofdd", "lodd")


@dataclass(frozen=True)
class CoherenceResult:
    """chi, coherence W = e^-chi, and error (1 - W) / 2 for one evaluation."""

    chi: float
    w: float
    error: float

    @classmethod
    def from_chi(cls, chi: float) -> "CoherenceResult":
        w = math.exp(-chi)
        return cls(chi=chi, w=w, error=0.5 * (1.0 - w))


def chi(spectrum: NoiseSpectrum, ctx: FilterEvalContext, *, rtol: float = 1e-9,
        atol: float = 1e-18) -> CoherenceResult:
    """Overlap integral of the noise spectrum with the sequence's filter.

    Integration runs over the spectrum's support, split at its kinks, with
    panel density following the filter's oscillation rate tau'.  The
    omega' -> 0 end is regular: the filter's quadratic zero cancels the
    1/omega'^2 pole.  The absolute floor ``atol`` keeps vanishing chi
    values (very short sequences) from chasing an unreachable relative
    tolerance.
    """
    def integrand(w):
        return spectrum.evaluate(w) * filter_value(ctx, w) / (w * w)

    total = 0.0
    pts = spectrum.breakpoints
    for a, b in zip(pts, pts[1:]):
        total += integrate_oscillatory(
            integrand, a, b, omega_scale=ctx.tau_prime, rtol=rtol, atol=atol
        )
    return CoherenceResult.from_chi((2.0 / math.pi) * total)


def chi_physical(spectrum: NoiseSpectrum, seq: PulseSequence, *, rtol: float = 1e-9
                 ) -> CoherenceResult:
    """chi for a physical sequence, scaled by the spectrum's cutoff frequency."""
    ctx = FilterEvalContext(
        seq.deltas, spectrum.omega_d * seq.tau, spectrum.omega_d * seq.tau_pi
    )
    return chi(spectrum, ctx, rtol=rtol)


@dataclass(frozen=True)
class DecoherenceCurve:
    """Sampled error (1 - W)/2 versus duration for one decoupling strategy."""

    strategy: str
    n: int
    points: tuple[tuple[float, float], ...]
    spectrum_id: str = ""

    def __post_init__(self):
        pts = tuple((float(t), float(e)) for t, e in self.points)
        object.__setattr__(self, "points", pts)
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not b > a:
                raise ValueError("curve durations must be strictly increasing")
        for t, e in pts:
            if not (-1e-12 <= e <= 0.5 + 1e-12):
                raise ValueError(f"error {e} at duration {t} outside [0, 0.5]")

    @property
    def durations(self) -> np.ndarray:
        return np.array([t for t, _ in self.points])

    @property
    def errors(self) -> np.ndarray:
        return np.array([e for _, e in self.points])

    def write_csv(self, path: str | Path) -> None:
        lines = [
            f"# strategy={self.strategy}",
            f"# n={self.n}",
            f"# spectrum={self.spectrum_id}",
            "duration,error",
        ]
        lines += [f"{t:.16e},{e:.16e}" for t, e in self.points]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def strategy_deltas(strategy: str, n: int, tau_prime: float, tau_pi_prime: float,
                    sset: SequenceSet | None) -> tuple[float, ...]:
    """Pulse centers used by ``strategy`` at the given dimensionless duration."""
    if strategy == "free":
        return ()
    if strategy == "cpmg":
        deltas = cpmg_deltas(n)
    elif strategy == "udd":
        deltas = udd_deltas(n)
    elif strategy in ("ofdd", "lodd"):
        if sset is None:
            raise ValueError(f"strategy {strategy!r} needs a sequence set")
        deltas = sset.deltas_at(tau_prime)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if tau_pi_prime > 0.0:
        check_spacing(deltas, tau_pi_prime / tau_prime)
    return deltas


def decoherence_curve(
    spectrum: NoiseSpectrum,
    strategy: str,
    n: int,
    tau_grid: Sequence[float],
    sset: SequenceSet | None = None,
    *,
    tau_pi_prime: float = 0.0,
    rtol: float = 1e-9,
    optimizer_config=None,
) -> DecoherenceCurve:
    """Error versus dimensionless duration for one decoupling strategy.

    cpmg/udd sequences are generated per grid point; ofdd looks up the
    supplied set (interpolating pulse positions in tau'); lodd re-optimizes
    chi at every grid point, seeded from the set entry there.
    """
    taus = [float(t) for t in tau_grid]
    if strategy in ("ofdd", "lodd"):
        if sset is None:
            raise ValueError(f"strategy {strategy!r} needs a sequence set")
        lo, hi = sset.tau_range
        if taus[0] < lo - 1e-12 or taus[-1] > hi + 1e-12:
            raise CoverageError(
                f"tau grid [{taus[0]}, {taus[-1]}] outside set coverage [{lo}, {hi}]"
            )
        tau_pi_prime = sset.tau_pi_prime
    points = []
    for tp in taus:
        deltas = strategy_deltas(strategy, n, tp, tau_pi_prime, sset)
        if strategy == "lodd":
            from .optimize import lodd_optimize

            deltas, _, _ = lodd_optimize(
                spectrum, n, tp, tau_pi_prime, deltas, optimizer_config
            )
        ctx = FilterEvalContext(deltas, tp, tau_pi_prime)
        points.append((tp, chi(spectrum, ctx, rtol=rtol).error))
    return DecoherenceCurve(
        strategy=strategy, n=n, points=tuple(points), spectrum_id=spectrum.describe()
    )


def coherence_time(curve: DecoherenceCurve, *, threshold: float = COHERENCE_THRESHOLD
                   ) -> float:
    """Duration at which the error first reaches 1/e of its asymptotic 0.5.

    Located by linear interpolation between the bracketing grid points of
    the first upward crossing; small numerical ripple before the crossing
    is tolerated.
    """
    ts, es = curve.durations, curve.errors
    if es[0] >= threshold:
        raise NoCrossingError(
            f"curve already at error {es[0]:.4g} >= threshold at its first point; "
            "extend the grid toward shorter durations"
        )
    above = np.nonzero(es >= threshold)[0]
    if above.size == 0:
        raise NoCrossingError(
            f"error never reaches {threshold:.5g} on the sampled grid (max {es.max():.4g})"
        )
    i = int(above[0])
    t0, e0 = ts[i - 1], es[i - 1]
    t1, e1 = ts[i], es[i]
    return float(t0 + (threshold - e0) * (t1 - t0) / (e1 - e0))


def monte_carlo_error(
    spectrum: NoiseSpectrum,
    deltas: Sequence[float],
    tau_prime: float,
    *,
    tau_pi_prime: float = 0.0,
    realizations: int = 10_000,
    seed: int = 0,
    bins: int = 2048,
    bootstrap: int = 200,
) -> tuple[float, float]:
    """Time-domain Monte Carlo estimate of the error, with standard error.

    Noise trajectories are synthesized as beta(t) = sum_k a_k cos(omega_k t
    + phi_k) with phases uniform on [0, 2pi) and amplitudes chosen so the
    ensemble autocorrelation reproduces the spectral convention of the chi
    integral.  The toggled phase integral phi = int y(t) beta(t) dt, with
    y(t) = +-1 flipping at each pulse center, is evaluated segment-exactly
    (no time discretization).  Defined for instantaneous pulses only.

    Returns ``(error, stderr)`` where error = (1 - |<cos phi>|) / 2 and the
    standard error comes from a bootstrap over realizations.
    """
    if tau_pi_prime != 0.0:
        raise ValueError("the time-domain oracle is defined for instantaneous pulses only")
    if realizations < 2:
        raise ValueError("need at least 2 realizations")
    deltas = tuple(float(d) for d in deltas)
    if tau_prime <= 0.0:
        raise ValueError("tau_prime must be positive")

    lo, hi = spectrum.support
    log_spaced = spectrum.kind == "power_law" and spectrum.gamma < 0.0
    if log_spaced:
        edges = np.geomspace(lo, hi, bins + 1)
    else:
        edges = np.linspace(lo, hi, bins + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    widths = np.diff(edges)
    s_vals = spectrum.evaluate(centers)
    amps = np.sqrt((8.0 / math.pi) * s_vals * widths)

    # Per-bin quadrature components of the switched phase integral:
    #   C_k = int_0^tau y(t) cos(omega_k t) dt,  D_k likewise with sin.
    t_edges = np.concatenate(([0.0], np.array(deltas) * tau_prime, [tau_prime]))
    seg_signs = (-1.0) ** np.arange(len(t_edges) - 1)
    wt = np.multiply.outer(centers, t_edges)        # (bins, n_edges)
    sin_wt, cos_wt = np.sin(wt), np.cos(wt)
    c_comp = ((sin_wt[:, 1:] - sin_wt[:, :-1]) @ seg_signs) / centers
    d_comp = ((cos_wt[:, :-1] - cos_wt[:, 1:]) @ seg_signs) / centers

    ac = amps * c_comp
    ad = amps * d_comp
    cos_phi = np.empty(realizations)
    for i in range(realizations):
        rng = np.random.default_rng([seed, 0, i])
        phases = rng.uniform(0.0, 2.0 * math.pi, size=bins)
        phi = np.cos(phases) @ ac - np.sin(phases) @ ad
        cos_phi[i] = math.cos(phi)

    error = 0.5 * (1.0 - abs(float(np.mean(cos_phi))))
    boot_rng = np.random.default_rng([seed, 1])
    idx = boot_rng.integers(0, realizations, size=(bootstrap, realizations))
    boot_errors = 0.5 * (1.0 - np.abs(cos_phi[idx].mean(axis=1)))
    stderr = float(np.std(boot_errors, ddof=1))
    return error, stderr
