"""Classical noise power spectral densities in dimensionless units.

A spectrum is evaluated as S(omega') / omega_d, where omega' = omega /
omega_d and omega_d is the (single) dimensional scale: the angular cutoff
frequency.  Power-law spectra follow alpha * omega'^gamma inside
[omega_low', 1]; above the cutoff the density either drops to zero (sharp)
or continues as alpha * omega'^-2, matched continuously at omega' = 1
(soft).  A gamma <= 0 power law requires a positive low-frequency cutoff to
keep the spectrum integrable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .quadrature import integrate_oscillatory

KINDS = ("power_law", "ambient_inverse_quartic", "tabulated")
CUTOFF_KINDS = ("sharp", "soft_inverse_square")


@dataclass(frozen=True)
class NoiseSpectrum:
    """One-sided noise power spectral density with cutoff structure.

    Parameters
    ----------
    kind : str
        'power_law', 'ambient_inverse_quartic' (~ omega'^-4, describing a
        typical ambient trap environment), or 'tabulated'.
    alpha : float
        Dimensionless noise strength.
    gamma : float
        Power-law exponent (1 = Ohmic, -1 = 1/f).  Ignored for the other kinds.
    omega_low_prime : float
        Sharp low-frequency cutoff; the density is zero below it.
    cutoff_kind : str
        High-frequency behavior of a power law above omega' = 1.
    omega_d : float
        Cutoff angular frequency in rad/s; the only dimensional scale.
    table : tuple of (omega', S') pairs
        Samples for the tabulated kind; linear interpolation, zero outside.
    omega_max_prime : float
        Integration ceiling for soft-tailed spectra.  The neglected tail
        beyond contributes < 1% for an omega'^-2 decay at the default 100.
    """

    kind: str = "power_law"
    alpha: float = 1.0
    gamma: float = 1.0
    omega_low_prime: float = 0.0
    cutoff_kind: str = "sharp"
    omega_d: float = 1.0
    table: tuple[tuple[float, float], ...] | None = None
    omega_max_prime: float = 100.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        if self.cutoff_kind not in CUTOFF_KINDS:
            raise ValueError(f"unknown cutoff kind {self.cutoff_kind!r}")
        if not self.alpha > 0.0:
            raise ValueError("noise strength alpha must be positive")
        if not self.omega_d > 0.0:
            raise ValueError("cutoff frequency omega_d must be positive")
        if self.omega_low_prime < 0.0:
            raise ValueError("low-frequency cutoff must be non-negative")
        if self.kind == "power_law" and self.gamma <= 0.0 and self.omega_low_prime <= 0.0:
            raise ValueError(
                "a power law with gamma <= 0 needs omega_low_prime > 0 to stay integrable"
            )
        if self.kind == "ambient_inverse_quartic" and self.omega_low_prime <= 0.0:
            raise ValueError("the ~omega'^-4 ambient spectrum needs omega_low_prime > 0")
        if self.omega_max_prime <= max(1.0, self.omega_low_prime):
            raise ValueError("omega_max_prime must exceed 1 and the low cutoff")
        if self.kind == "tabulated":
            if not self.table:
                raise ValueError("tabulated spectrum needs samples")
            table = tuple((float(w), float(s)) for w, s in self.table)
            object.__setattr__(self, "table", table)
            ws = [w for w, _ in table]
            if any(b <= a for a, b in zip(ws, ws[1:])):
                raise ValueError("tabulated frequencies must be strictly increasing")
            if any(w < 0.0 for w in ws) or any(s < 0.0 for _, s in table):
                raise ValueError("tabulated samples must be non-negative")

    # -- evaluation ----------------------------------------------------

    def evaluate(self, omega_prime):
        """S(omega') / omega_d at one or many dimensionless frequencies."""
        w = np.asarray(omega_prime, dtype=float)
        out = np.zeros_like(w)
        if self.kind == "power_law":
            body = (w >= self.omega_low_prime) & (w <= 1.0)
            with np.errstate(divide="ignore"):
                out[body] = self.alpha * w[body] ** self.gamma
            if self.cutoff_kind == "soft_inverse_square":
                tail = w > 1.0
                # matched continuously: alpha * 1^gamma at omega' = 1
                out[tail] = self.alpha * w[tail] ** -2.0
        elif self.kind == "ambient_inverse_quartic":
            body = w >= self.omega_low_prime
            out[body] = self.alpha * w[body] ** -4.0
        else:
            ws = np.array([p[0] for p in self.table])
            ss = np.array([p[1] for p in self.table])
            inside = (w >= ws[0]) & (w <= ws[-1])
            out[inside] = np.interp(w[inside], ws, ss)
        return float(out) if out.ndim == 0 else out

    def evaluate_dimensional(self, omega):
        """S(omega) in its dimensional form, omega in rad/s."""
        return self.omega_d * self.evaluate(np.asarray(omega, dtype=float) / self.omega_d)

    # -- integration support -------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        """Dimensionless frequency range holding all the spectral power."""
        if self.kind == "tabulated":
            return self.table[0][0], self.table[-1][0]
        lo = self.omega_low_prime
        if self.kind == "power_law" and self.cutoff_kind == "sharp":
            return lo, 1.0
        return lo, self.omega_max_prime

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the density has kinks; quadrature splits here."""
        lo, hi = self.support
        pts = {lo, hi}
        if lo < 1.0 < hi:
            pts.add(1.0)
        return tuple(sorted(pts))

    def integrated_power(self, lo: float, hi: float) -> float:
        """integral of S' over [lo, hi] intersected with the support."""
        a, b = self.support
        lo, hi = max(lo, a), min(hi, b)
        if hi <= lo:
            return 0.0
        cuts = [lo] + [p for p in self.breakpoints if lo < p < hi] + [hi]
        total = 0.0
        for x0, x1 in zip(cuts, cuts[1:]):
            total += integrate_oscillatory(
                self.evaluate, x0, x1, omega_scale=0.0, rtol=1e-10, min_panels=8
            )
        return total

    def describe(self) -> str:
        """Short stable identifier used in output-file headers."""
        if self.kind == "power_law":
            return (
                f"power_law(alpha={self.alpha:g},gamma={self.gamma:g},"
                f"cutoff={self.cutoff_kind},omega_low={self.omega_low_prime:g})"
            )
        if self.kind == "ambient_inverse_quartic":
            return f"ambient(alpha={self.alpha:g},omega_low={self.omega_low_prime:g})"
        return f"tabulated({len(self.table)} samples)"


def ohmic(alpha: float = 1.0, *, cutoff_kind: str = "sharp", omega_low_prime: float = 0.0,
          omega_d: float = 1.0) -> NoiseSpectrum:
    """Ohmic spectrum: S'/omega_d = alpha * omega' with a high-frequency cutoff."""
    return NoiseSpectrum(
        kind="power_law", alpha=alpha, gamma=1.0, omega_low_prime=omega_low_prime,
        cutoff_kind=cutoff_kind, omega_d=omega_d,
    )


def one_over_f(alpha: float = 1.0, *, omega_low_prime: float = 1e-3,
               cutoff_kind: str = "soft_inverse_square", omega_d: float = 1.0) -> NoiseSpectrum:
    """1/f spectrum with a sharp low cutoff and (by default) a soft ~omega'^-2 tail."""
    return NoiseSpectrum(
        kind="power_law", alpha=alpha, gamma=-1.0, omega_low_prime=omega_low_prime,
        cutoff_kind=cutoff_kind, omega_d=omega_d,
    )


def ambient(alpha: float = 1.0, *, omega_low_prime: float = 1e-3,
            omega_d: float = 1.0) -> NoiseSpectrum:
    """Ambient-style spectrum falling off as ~omega'^-4 above a low cutoff."""
    return NoiseSpectrum(
        kind="ambient_inverse_quartic", alpha=alpha, omega_low_prime=omega_low_prime,
        omega_d=omega_d,
    )


def load_tabulated(path: str | Path, *, omega_d: float = 1.0) -> NoiseSpectrum:
    """Read a two-column CSV 'omega_prime,s_prime' (ascending, '#' comments)."""
    rows = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        w, _, s = line.partition(",")
        rows.append((float(w), float(s)))
    return NoiseSpectrum(kind="tabulated", table=tuple(rows), omega_d=omega_d)


def sharpness_metric(spectrum: NoiseSpectrum, *, tail_share: float = 0.9
                     ) -> tuple[float, float, bool]:
    """Diagnose whether a spectrum has a sharp high-frequency cutoff.

    Returns ``(tail_fraction, tail_width_fraction, is_sharp)``: the fraction
    of total power above omega' = 1, the width (relative to omega_d)
    containing ``tail_share`` of that tail power, and the empirical
    sharp-cutoff verdict: both at most 0.10.  Sequence sets optimized for
    the band below the cutoff pay off most when that verdict holds.
    """
    lo, hi = spectrum.support
    total = spectrum.integrated_power(lo, hi)
    if total <= 0.0:
        raise ValueError("spectrum carries no integrable power")
    tail = spectrum.integrated_power(1.0, hi) if hi > 1.0 else 0.0
    tail_fraction = tail / total
    if tail <= 0.0:
        return 0.0, 0.0, True
    target = tail_share * tail
    w_lo, w_hi = 0.0, hi - 1.0
    for _ in range(200):
        mid = 0.5 * (w_lo + w_hi)
        if spectrum.integrated_power(1.0, 1.0 + mid) < target:
            w_lo = mid
        else:
            w_hi = mid
        if w_hi - w_lo < 1e-9 * max(1.0, w_hi):
            break
    tail_width_fraction = 0.5 * (w_lo + w_hi)
    is_sharp = tail_fraction <= 0.10 and tail_width_fraction <= 0.10
    return tail_fraction, tail_width_fraction, is_sharp
