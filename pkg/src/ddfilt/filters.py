"""Dephasing filter function of a pulse sequence and its frequency-domain area.

The filter function of an n-pulse sequence with relative pulse centers
delta_j, total duration tau and pulse duration tau_pi, evaluated at angular
frequency omega, is

    F_n(omega tau) = | 1 + (-1)^(n+1) e^(i omega tau)
                        + 2 sum_j (-1)^j e^(i omega delta_j tau) cos(omega tau_pi / 2) |^2

Everything here works in dimensionless units: frequencies are omega' =
omega / omega_d for a cutoff omega_d, durations are tau' = omega_d * tau,
so the phase argument is omega' * tau' and the pulse-duration factor is
cos(omega' * tau_pi' / 2).

The area under the filter over the band omega' in [0, 1],

    A_F(tau') = integral_0^1 F_n(omega' tau') d omega',

is the objective minimized to build noise-filtration-optimized sequence
sets.  The constant omega_d prefactor of the dimensional area is dropped
throughout: it rescales the objective uniformly and cannot change a
minimizer.  A closed form (term-by-term integration of the expanded
squared modulus) is used in optimization loops; adaptive quadrature of the
same integral is kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoCrossingError
from .quadrature import integrate_oscillatory
from .sequences import SequenceSet, _check_ordering


@dataclass(frozen=True)
class FilterEvalContext:
    """A sequence in dimensionless units, ready for filter evaluation."""

    deltas: tuple[float, ...]
    tau_prime: float
    tau_pi_prime: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))
        if self.tau_prime < 0.0:
            raise ValueError("tau_prime must be non-negative")
        if self.tau_pi_prime < 0.0:
            raise ValueError("tau_pi_prime must be non-negative")
        _check_ordering(self.deltas)

    @property
    def n(self) -> int:
        return len(self.deltas)


def filter_value(ctx: FilterEvalContext, omega_prime):
    """Filter value at dimensionless frequency omega_prime (scalar or array).

    Non-negative everywhere; exactly zero at omega_prime = 0.
    """
    omega = np.asarray(omega_prime, dtype=float)
    theta = omega * ctx.tau_prime
    n = ctx.n
    val = 1.0 + (-1.0) ** (n + 1) * np.exp(1j * theta)
    if n:
        deltas = np.array(ctx.deltas)
        signs = (-1.0) ** np.arange(1, n + 1)
        phases = np.exp(1j * np.multiply.outer(theta, deltas))
        val = val + 2.0 * np.cos(omega * ctx.tau_pi_prime / 2.0) * (phases @ signs)
    out = np.abs(np.asarray(val)) ** 2
    return float(out) if out.ndim == 0 else out


def filter_value_symmetric(ctx: FilterEvalContext, omega_prime):
    """Filter value via the reduced real form valid for symmetric sequences.

    For pulse centers mirrored around 0.5 the bracketed sum is, up to a
    global phase, purely real (odd n) or purely imaginary (even n); this
    evaluates that single real amplitude and squares it.  Agrees with
    :func:`filter_value` to roundoff and serves as a cross-check of the
    complex evaluation.
    """
    omega = np.asarray(omega_prime, dtype=float)
    theta = omega * ctx.tau_prime
    n = ctx.n
    c = np.cos(omega * ctx.tau_pi_prime / 2.0)
    half = n // 2
    deltas = np.array(ctx.deltas[:half]) if half else np.zeros(0)
    signs = (-1.0) ** np.arange(1, half + 1)
    u = np.multiply.outer(theta, deltas - 0.5)
    if n % 2 == 1:
        # center pulse contributes (-1)^((n+1)/2); mirrored pairs give cosines
        amp = 2.0 * np.cos(theta / 2.0)
        pair = 2.0 * np.cos(u) @ signs if half else 0.0
        amp = amp + 2.0 * c * (pair + (-1.0) ** ((n + 1) // 2))
    else:
        amp = -2.0 * np.sin(theta / 2.0)
        if half:
            amp = amp + 4.0 * c * (np.sin(u) @ signs)
    out = np.asarray(amp) ** 2
    return float(out) if out.ndim == 0 else out


def _expansion_terms(ctx: FilterEvalContext) -> tuple[np.ndarray, np.ndarray]:
    """Phase offsets y_m and (+-1) coefficients a_m of the expanded filter.

    Writing the pulse-duration cosine as a pair of half-shifted exponentials
    turns the bracketed sum into sum_m a_m e^(i omega' y_m) with constant
    coefficients, so F = sum_{m,l} a_m a_l cos(omega' (y_m - y_l)).  The
    coefficients always sum to zero, which is why F vanishes at zero
    frequency.
    """
    n = ctx.n
    deltas = np.array(ctx.deltas)
    tp = ctx.tau_prime
    if ctx.tau_pi_prime == 0.0:
        y = np.concatenate(([0.0], deltas * tp, [tp]))
        a = np.concatenate(([1.0], 2.0 * (-1.0) ** np.arange(1, n + 1), [(-1.0) ** (n + 1)]))
    else:
        shift = ctx.tau_pi_prime / 2.0
        y = np.concatenate(([0.0], deltas * tp - shift, deltas * tp + shift, [tp]))
        signs = (-1.0) ** np.arange(1, n + 1)
        a = np.concatenate(([1.0], signs, signs, [(-1.0) ** (n + 1)]))
    return y, a


def _sinc_minus_one(x: np.ndarray) -> np.ndarray:
    """sin(x)/x - 1, evaluated without cancellation for small |x|."""
    out = np.sinc(x / np.pi) - 1.0
    small = np.abs(x) < 1e-4
    if np.any(small):
        xs = x[small]
        x2 = xs * xs
        out[small] = x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 - x2 / 5040.0))
    return out


def area_analytic(ctx: FilterEvalContext) -> float:
    """Closed-form area under the filter over omega' in [0, 1].

    Each cosine pair in the expanded squared modulus integrates to a sinc;
    since the coefficients sum to zero exactly, the sinc values are reduced
    by one before summing, which removes the large cancellation that would
    otherwise swamp the tiny areas at short durations.
    """
    y, a = _expansion_terms(ctx)
    diff = y[:, None] - y[None, :]
    return float(a @ _sinc_minus_one(diff) @ a)


def area_quadrature(ctx: FilterEvalContext, *, rtol: float = 1e-10) -> float:
    """Area under the filter over omega' in [0, 1] by adaptive quadrature.

    Independent of :func:`area_analytic`; kept as a cross-check oracle.
    Raises :class:`ddfilt.errors.QuadratureError` on non-convergence.
    """
    return integrate_oscillatory(
        lambda w: filter_value(ctx, w),
        0.0,
        1.0,
        omega_scale=ctx.tau_prime,
        rtol=rtol,
    )


def filter_at_cutoff(deltas: Sequence[float], tau_prime: float, tau_pi_prime: float = 0.0) -> float:
    """Filter value at the band edge omega' = 1 for the given sequence."""
    ctx = FilterEvalContext(tuple(deltas), tau_prime, tau_pi_prime)
    return filter_value(ctx, 1.0)


def tau_crossover(sset: SequenceSet, *, level: float = 1.0, xtol: float = 1e-10) -> float:
    """Smallest dimensionless duration where the filter at the cutoff reaches ``level``.

    Scans the set's grid for the first upward crossing of
    F(omega' = 1; tau') = level, then bisects between the bracketing
    entries using per-coordinate interpolated pulse positions.
    """
    taus = sset.tau_primes
    values = np.array([
        filter_at_cutoff(deltas, tp, sset.tau_pi_prime) for tp, deltas in sset.entries
    ])
    above = values >= level
    if not np.any(above):
        raise NoCrossingError(
            f"filter at the cutoff stays below {level} over tau_prime in "
            f"[{taus[0]}, {taus[-1]}] (max {values.max():.3g})"
        )
    i = int(np.argmax(above))
    if i == 0:
        return float(taus[0])

    def g(tp: float) -> float:
        return filter_at_cutoff(sset.deltas_at(tp), tp, sset.tau_pi_prime) - level

    lo, hi = float(taus[i - 1]), float(taus[i])
    glo = g(lo)
    if glo >= 0.0:
        return lo
    while hi - lo > xtol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
