"""Exact evolution of the walk's distribution on Z/pZ and its functionals.

A distribution is a dense float64 array of length p indexed by residue.
One step pushes mass along the three bijections x -> m*x + b (mod p),
b in {-1, 0, 1}; since each map is a permutation of Z/pZ this is exact up
to float rounding, and the uniform vector is stationary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .process import ProcessParams

__all__ = [
    "DEFAULT_MAX_MODULUS",
    "ModulusMismatchError",
    "ModulusTooLargeError",
    "TraceRow",
    "entropy_bits",
    "evolve",
    "evolve_with_trace",
    "initial_dist",
    "step",
    "support_size",
    "tvd_uniform",
    "typical_set_size",
]

#: dense-vector memory guard; override explicitly for larger moduli
DEFAULT_MAX_MODULUS = 1 << 26


class ModulusTooLargeError(ValueError):
    """Modulus exceeds the dense-vector memory guard."""


class ModulusMismatchError(ValueError):
    """Distribution length and parameter modulus disagree."""


def _check_modulus(p: int, max_modulus: int) -> None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"modulus {p} must be an odd integer >= 3")
    if p > max_modulus:
        raise ModulusTooLargeError(
            f"modulus {p} exceeds guard {max_modulus}; raise max_modulus to override"
        )


def initial_dist(p: int, max_modulus: int = DEFAULT_MAX_MODULUS) -> np.ndarray:
    """Point mass at residue 0 (the walk starts at x = 0)."""
    _check_modulus(p, max_modulus)
    mass = np.zeros(p, dtype=np.float64)
    mass[0] = 1.0
    return mass


def _doubling_permutation(p: int, multiplier: int) -> np.ndarray:
    # gather index: new[y] reads old[y * m^-1 mod p]
    inv = pow(multiplier, -1, p)
    return (np.arange(p, dtype=np.int64) * inv) % p


def _apply_step(dist: np.ndarray, params: ProcessParams, perm: np.ndarray) -> np.ndarray:
    q = params.increments
    d = dist[perm]
    out = q.q_zero * d
    out += q.q_plus1 * np.roll(d, 1)
    out += q.q_minus1 * np.roll(d, -1)
    return out


def step(dist: np.ndarray, params: ProcessParams) -> np.ndarray:
    """One exact step of the distribution under the walk."""
    dist = np.asarray(dist, dtype=np.float64)
    p = params.modulus
    if dist.shape != (p,):
        raise ModulusMismatchError(
            f"distribution has length {dist.shape}, parameters have modulus {p}"
        )
    return _apply_step(dist, params, _doubling_permutation(p, params.multiplier))


def evolve(
    params: ProcessParams, n: int, max_modulus: int = DEFAULT_MAX_MODULUS
) -> np.ndarray:
    """Distribution after n steps from the point mass at 0."""
    if n < 0:
        raise ValueError(f"step count {n} is negative")
    dist = initial_dist(params.modulus, max_modulus)
    perm = _doubling_permutation(params.modulus, params.multiplier)
    for _ in range(n):
        dist = _apply_step(dist, params, perm)
    return dist


@dataclass(frozen=True)
class TraceRow:
    """Per-step functionals emitted by evolve_with_trace."""

    step: int
    tvd: float
    entropy_bits: float
    support: int
    typical: int


def evolve_with_trace(
    params: ProcessParams,
    n: int,
    delta: float = 0.01,
    max_modulus: int = DEFAULT_MAX_MODULUS,
) -> tuple[np.ndarray, list[TraceRow]]:
    """Evolve n steps, recording (tvd, entropy, support, typical-set size) per step.

    The trace includes step 0; the typical-set column uses mass 1 - delta.
    """
    if n < 0:
        raise ValueError(f"step count {n} is negative")
    dist = initial_dist(params.modulus, max_modulus)
    perm = _doubling_permutation(params.modulus, params.multiplier)
    rows = [_trace_row(0, dist, delta)]
    for k in range(1, n + 1):
        dist = _apply_step(dist, params, perm)
        rows.append(_trace_row(k, dist, delta))
    return dist, rows


def _trace_row(k: int, dist: np.ndarray, delta: float) -> TraceRow:
    return TraceRow(
        step=k,
        tvd=tvd_uniform(dist),
        entropy_bits=entropy_bits(dist),
        support=support_size(dist),
        typical=typical_set_size(dist, delta),
    )


def tvd_uniform(dist: np.ndarray) -> float:
    """Total variation distance from uniform: 0.5 * sum |mass(s) - 1/p|."""
    dist = np.asarray(dist, dtype=np.float64)
    p = dist.size
    return float(0.5 * np.abs(dist - 1.0 / p).sum())


def entropy_bits(dist: np.ndarray) -> float:
    """Shannon entropy in bits, with 0*log(0) = 0."""
    dist = np.asarray(dist, dtype=np.float64)
    m = dist[dist > 0.0]
    # + 0.0 normalizes the -0.0 a point mass would produce
    return float(-(m * np.log2(m)).sum() + 0.0)


def support_size(dist: np.ndarray, threshold: float = 0.0) -> int:
    """Number of residues with mass strictly above threshold."""
    if threshold < 0:
        raise ValueError(f"threshold {threshold} is negative")
    dist = np.asarray(dist, dtype=np.float64)
    return int((dist > threshold).sum())


def typical_set_size(dist: np.ndarray, delta: float) -> int:
    """Smallest k such that the k largest masses sum to at least 1 - delta."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta {delta} must be in (0, 1)")
    dist = np.asarray(dist, dtype=np.float64)
    ordered = np.sort(dist)[::-1]
    cum = np.cumsum(ordered)
    idx = int(np.searchsorted(cum, 1.0 - delta, side="left"))
    return min(idx, dist.size - 1) + 1
