"""Pulse sequences for multipulse spin-echo dynamical decoupling.

A sequence of n pi-pulses is described by its relative pulse-center times
``deltas`` (fractions of the total duration ``tau``), a total duration in
seconds, and a single pi-pulse duration ``tau_pi``.  The total duration is
the sum of the free-precession delays plus the sum of all pulse durations,
so pulses must fit between each other and inside [0, tau].

All types here are immutable after construction and validated once, at
construction; downstream code may assume the invariants hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

# Closed (>=) gap comparisons get this much absolute slack so that pulses
# which exactly touch are not rejected by floating-point rounding.
GAP_SLACK = 1e-12

#: Generator tags whose sequence sets are symmetric around delta = 0.5.
SYMMETRIC_GENERATORS = ("cpmg", "udd", "ofdd")


def _as_delta_tuple(deltas: Iterable[float]) -> tuple[float, ...]:
    return tuple(float(d) for d in deltas)


def _check_ordering(deltas: Sequence[float]) -> None:
    if any(not (0.0 < d < 1.0) for d in deltas):
        raise ValueError(f"pulse centers must lie strictly inside (0, 1): {deltas}")
    for a, b in zip(deltas, deltas[1:]):
        if not b > a:
            raise ValueError(f"pulse centers must be strictly increasing: {deltas}")


@dataclass(frozen=True)
class PulseSequence:
    """An n pi-pulse echo sequence with relative pulse centers.

    Parameters
    ----------
    n : int
        Pulse count (0 means free evolution).
    deltas : sequence of float
        The n pulse-center times as fractions of ``tau``, strictly
        increasing inside (0, 1).
    tau : float
        Total sequence duration in seconds (> 0).
    tau_pi : float
        Single pi-pulse duration in seconds (0 = instantaneous limit).
    """

    n: int
    deltas: tuple[float, ...]
    tau: float
    tau_pi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "deltas", _as_delta_tuple(self.deltas))
        if self.n != len(self.deltas):
            raise ValueError(f"n={self.n} does not match {len(self.deltas)} pulse centers")
        if self.n < 0:
            raise ValueError("pulse count must be non-negative")
        if not self.tau > 0.0:
            raise ValueError("total duration tau must be positive")
        if self.tau_pi < 0.0:
            raise ValueError("pulse duration tau_pi must be non-negative")
        if self.n * self.tau_pi > self.tau + GAP_SLACK:
            raise ValueError(
                f"{self.n} pulses of duration {self.tau_pi} cannot fit in tau={self.tau}"
            )
        _check_ordering(self.deltas)
        check_spacing(self.deltas, self.tau_pi / self.tau)

    @property
    def half_count(self) -> int:
        return (self.n + 1) // 2


def check_spacing(deltas: Sequence[float], gap: float) -> None:
    """Validate the non-overlap invariant for a relative gap = tau_pi / tau.

    Interior centers must be at least ``gap`` apart; the first and last
    pulses need ``gap / 2`` of clearance to the sequence boundaries so each
    pulse window fits inside [0, tau].
    """
    if gap <= 0.0 or not deltas:
        return
    if deltas[0] < gap / 2.0 - GAP_SLACK:
        raise ValueError(f"first pulse at {deltas[0]} overlaps the sequence start (gap {gap})")
    if 1.0 - deltas[-1] < gap / 2.0 - GAP_SLACK:
        raise ValueError(f"last pulse at {deltas[-1]} overlaps the sequence end (gap {gap})")
    for a, b in zip(deltas, deltas[1:]):
        if b - a < gap - GAP_SLACK:
            raise ValueError(f"pulses at {a} and {b} overlap (need spacing >= {gap})")


def spacing_feasible(deltas: Sequence[float], gap: float) -> bool:
    """True when ``deltas`` satisfies the non-overlap invariant for ``gap``."""
    try:
        check_spacing(deltas, gap)
    except ValueError:
        return False
    return True


def cpmg_deltas(n: int) -> tuple[float, ...]:
    """Evenly spaced pulse centers (2j - 1) / (2n), j = 1..n."""
    if n < 1:
        raise ValueError("CPMG needs at least one pulse")
    return tuple((2 * j - 1) / (2 * n) for j in range(1, n + 1))


def udd_deltas(n: int) -> tuple[float, ...]:
    """Pulse centers sin^2(j pi / (2n + 2)), j = 1..n."""
    if n < 1:
        raise ValueError("UDD needs at least one pulse")
    return tuple(math.sin(j * math.pi / (2 * n + 2)) ** 2 for j in range(1, n + 1))


def make_cpmg(n: int, tau: float, tau_pi: float = 0.0) -> PulseSequence:
    """Evenly spaced multipulse echo sequence of duration ``tau`` seconds."""
    return PulseSequence(n, cpmg_deltas(n), tau, tau_pi)


def make_udd(n: int, tau: float, tau_pi: float = 0.0) -> PulseSequence:
    """Sequence with sin^2 pulse spacing, fixed relative locations for any duration."""
    return PulseSequence(n, udd_deltas(n), tau, tau_pi)


def from_half_parameters(n: int, half: Sequence[float]) -> tuple[float, ...]:
    """Expand the first-half pulse centers of a symmetric sequence.

    The full sequence mirrors the half around 0.5: delta_{n+1-j} = 1 - delta_j.
    For odd n the last half value is the fixed center pulse and must equal 0.5.
    The first ceil(n/2) entries of the result are the input values, unchanged.
    """
    half = [float(h) for h in half]
    expected = (n + 1) // 2
    if len(half) != expected:
        raise ValueError(f"need {expected} half parameters for n={n}, got {len(half)}")
    if any(not (0.0 < h <= 0.5) for h in half):
        raise ValueError(f"half parameters must lie in (0, 0.5]: {half}")
    for a, b in zip(half, half[1:]):
        if not b > a:
            raise ValueError(f"half parameters must be strictly increasing: {half}")
    if n % 2 == 1:
        if half[-1] != 0.5:
            raise ValueError(f"odd n={n} requires the center pulse at exactly 0.5, got {half[-1]}")
        mirrored = [1.0 - h for h in reversed(half[:-1])]
    else:
        mirrored = [1.0 - h for h in reversed(half)]
    full = tuple(half + mirrored)
    _check_ordering(full)
    return full


def absolute_pulse_times(seq: PulseSequence) -> list[tuple[float, float]]:
    """(start, end) of each pulse window in seconds, centered on delta_j * tau."""
    half = seq.tau_pi / 2.0
    return [(d * seq.tau - half, d * seq.tau + half) for d in seq.deltas]


@dataclass(frozen=True)
class SequenceSet:
    """An ordered family of sequences indexed by dimensionless duration.

    Each entry pairs a dimensionless duration tau_prime (= omega_d * tau for
    a cutoff frequency omega_d) with the relative pulse centers to use at
    that duration.  ``tau_pi_prime`` is the dimensionless pulse duration the
    entries were generated for.  ``meta`` records provenance: the generator
    tag (cpmg | udd | ofdd | lodd), grid parameters, optimizer tolerances.
    """

    n: int
    tau_pi_prime: float
    entries: tuple[tuple[float, tuple[float, ...]], ...]
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        entries = tuple(
            (float(tp), _as_delta_tuple(deltas)) for tp, deltas in self.entries
        )
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("a sequence set needs at least one entry")
        for (a, _), (b, _) in zip(entries, entries[1:]):
            if not b > a:
                raise ValueError("set entries must be strictly increasing in tau_prime")
        for tp, deltas in entries:
            if len(deltas) != self.n:
                raise ValueError(f"entry at tau_prime={tp} has {len(deltas)} pulses, expected {self.n}")
            _check_ordering(deltas)
        if self.meta.get("generator") in SYMMETRIC_GENERATORS:
            for tp, deltas in entries:
                for j in range(self.n):
                    if abs(deltas[j] + deltas[self.n - 1 - j] - 1.0) > 1e-9:
                        raise ValueError(
                            f"entry at tau_prime={tp} is not symmetric around 0.5"
                        )

    @property
    def tau_primes(self) -> np.ndarray:
        return np.array([tp for tp, _ in self.entries])

    @property
    def tau_range(self) -> tuple[float, float]:
        return self.entries[0][0], self.entries[-1][0]

    def deltas_at(self, tau_prime: float) -> tuple[float, ...]:
        """Pulse centers at ``tau_prime``, linearly interpolated per coordinate.

        Interpolation between neighboring entries stays valid as long as
        the position traces are continuous; the result is re-validated.
        """
        from .errors import CoverageError

        lo, hi = self.tau_range
        if not (lo - GAP_SLACK <= tau_prime <= hi + GAP_SLACK):
            raise CoverageError(
                f"tau_prime={tau_prime} outside set coverage [{lo}, {hi}]"
            )
        taus = self.tau_primes
        i = int(np.searchsorted(taus, tau_prime))
        if i == 0:
            return self.entries[0][1]
        if i >= len(taus):
            return self.entries[-1][1]
        t0, d0 = self.entries[i - 1]
        t1, d1 = self.entries[i]
        if tau_prime == t1:
            return d1
        w = (tau_prime - t0) / (t1 - t0)
        deltas = tuple((1.0 - w) * a + w * b for a, b in zip(d0, d1))
        _check_ordering(deltas)
        return deltas

    def nearest_entry(self, tau_prime: float) -> tuple[float, tuple[float, ...]]:
        taus = self.tau_primes
        i = int(np.argmin(np.abs(taus - tau_prime)))
        return self.entries[i]

    # ------------------------------------------------------------------
    # File format: '#' header lines carrying key=value metadata, then one
    # record per line 'tau_prime,delta_1,...,delta_n' sorted ascending.
    # Floats are written with 17 significant digits so values round-trip
    # exactly; LF line endings, UTF-8.
    # ------------------------------------------------------------------

    def write(self, path: str | Path) -> None:
        path = Path(path)
        lines = [f"# n={self.n}", f"# tau_pi_prime={self.tau_pi_prime!r}"]
        generator = self.meta.get("generator", "ofdd")
        lines.append(f"# generator={generator}")
        for key in sorted(self.meta):
            if key == "generator":
                continue
            lines.append(f"# {key}={self.meta[key]}")
        for tp, deltas in self.entries:
            fields = [f"{tp:.16e}"] + [f"{d:.16e}" for d in deltas]
            lines.append(",".join(fields))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    @classmethod
    def read(cls, path: str | Path) -> "SequenceSet":
        path = Path(path)
        meta: dict[str, str] = {}
        entries = []
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            parts = line.split(",")
            tau_prime = float(parts[0])
            deltas = tuple(float(p) for p in parts[1:])
            entries.append((tau_prime, deltas))
        if "n" not in meta:
            raise ValueError(f"{path}: missing 'n' header")
        n = int(meta.pop("n"))
        tau_pi_prime = float(meta.pop("tau_pi_prime", "0.0"))
        return cls(n=n, tau_pi_prime=tau_pi_prime, entries=tuple(entries), meta=meta)
