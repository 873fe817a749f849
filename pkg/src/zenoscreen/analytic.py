"""Closed-form solutions for free decay and for the erasure-screened qubit.

A qubit coupled directly to a zero-temperature reservoir with rate gamma
loses population and coherence exponentially:

    P(t) = p * exp(-gamma t),          V(t) = sqrt(p(1-p)) * exp(-gamma t / 2).

The screening protocol instead couples the qubit to a damped auxiliary
cavity mode (Rabi frequency omega, cavity damping gamma) and resets the
cavity to vacuum N times at intervals t/N.  Between resets the joint
dynamics is exactly solvable in the single-excitation sector, and the
repeated reset turns the solution into an N-th power of a per-segment
growth factor.  With

    lam = sqrt((gamma/4)^2 - omega^2)    (complex in general)

the coefficients after the full protocol are, for omega != gamma/4,

    P_N(t) = p exp(-gamma t/2) [ (gamma/(4 lam)) sinh(2 lam t/N)
             + (((gamma/4)^2 - omega^2/2)/lam^2) cosh(2 lam t/N)
             - omega^2/(2 lam^2) ]^N
    V_N(t) = sqrt(p(1-p)) exp(-gamma t/4) [ cosh(lam t/N)
             + (gamma/(4 lam)) sinh(lam t/N) ]^N

and at the degenerate point omega = gamma/4 (where lam -> 0) the brackets
collapse to polynomials:

    P_N(t) = p exp(-gamma t/2) [ 1 + gamma t/(2N) + gamma^2 t^2/(16 N^2) ]^N
    V_N(t) = sqrt(p(1-p)) exp(-gamma t/4) [ 1 + gamma t/(4N) ]^N.

For 4*omega/gamma < 1 (over-damped) lam is real and the brackets are
hyperbolic; for 4*omega/gamma > 1 (under-damped) lam is imaginary and they
oscillate — V_N may then be negative, meaning the coherence re-emerges
with its sign flipped.  Everything is evaluated in complex arithmetic on
a single code path, so both regimes come out of the same expressions; the
degenerate polynomial branch is used only inside a narrow band around
omega = gamma/4 where the lam -> 0 cancellations are ill-conditioned.

As N grows, the exponential prefactors are cancelled by the N-th powers
and both coefficients return to their initial values: 1 - F_N(t) falls
off as 1/N, so the stored state survives arbitrarily well under
sufficiently frequent erasure, at any coupling and damping.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .quantum import Coefficients, QubitParams

__all__ = [
    "CRITICAL_BAND",
    "IMAG_TOL",
    "BranchKind",
    "FreeDecayParams",
    "ScreenParams",
    "classify_branch",
    "free_decay_coeffs",
    "fidelity",
    "screened_coeffs",
    "screened_fidelity",
    "minimal_erasures",
]

# Half-width (in units of gamma) of the band around omega = gamma/4 in which
# the degenerate polynomial branch replaces the general expression.
CRITICAL_BAND = 1e-8

# Residual imaginary part allowed after assembling the (mathematically real)
# coefficients in complex arithmetic.
IMAG_TOL = 1e-12


@dataclass(frozen=True)
class FreeDecayParams:
    """Direct qubit-reservoir coupling rate."""

    gamma: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class ScreenParams:
    """Screening-protocol parameters: coupling, cavity damping, resets, total time."""

    omega: float
    gamma: float
    n_erasures: int
    total_time: float

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.n_erasures < 1:
            raise ValueError(f"n_erasures must be >= 1, got {self.n_erasures}")
        if self.total_time < 0:
            raise ValueError(f"total_time must be >= 0, got {self.total_time}")


class BranchKind(Enum):
    OVER_DAMPED = "over-damped"
    UNDER_DAMPED = "under-damped"
    CRITICAL = "critical"


def classify_branch(omega: float, gamma: float, band: float = CRITICAL_BAND) -> BranchKind:
    """Regime of the screened solution: hyperbolic, oscillatory, or degenerate.

    The critical classification uses a band |omega - gamma/4| <= band*gamma
    rather than exact equality, matching where the general expression
    becomes numerically ill-conditioned.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if abs(omega - gamma / 4.0) <= band * gamma:
        return BranchKind.CRITICAL
    return BranchKind.OVER_DAMPED if 4.0 * omega / gamma < 1.0 else BranchKind.UNDER_DAMPED


def free_decay_coeffs(q: QubitParams, d: FreeDecayParams, t: float) -> Coefficients:
    """Population and coherence of a free qubit after decay time t."""
    if t < 0:
        raise ValueError("t must be >= 0")
    v0 = math.sqrt(q.p * (1.0 - q.p))
    return Coefficients(q.p * math.exp(-d.gamma * t), v0 * math.exp(-d.gamma * t / 2.0))


def fidelity(initial: Coefficients, now: Coefficients) -> float:
    """Overlap with the initial pure state, expressed through (P, V) pairs:

    F = (1 - P0)(1 - P) + P0 P + 2 V0 V.
    """
    return (1.0 - initial.P) * (1.0 - now.P) + initial.P * now.P + 2.0 * initial.V * now.V


def _ipow(z: complex, n: int) -> complex:
    """z**n by squaring; keeps exactly-real inputs exactly real."""
    result = complex(1.0)
    base = complex(z)
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def _segment_factors(omega: float, gamma: float, tau: float, branch: BranchKind):
    """Per-segment growth factors for the population and coherence."""
    if branch is BranchKind.CRITICAL:
        bp = 1.0 + gamma * tau / 2.0 + gamma**2 * tau**2 / 16.0
        bv = 1.0 + gamma * tau / 4.0
        return complex(bp), complex(bv)
    lam = cmath.sqrt(complex((gamma / 4.0) ** 2 - omega**2))
    bv = cmath.cosh(lam * tau) + (gamma / 4.0) * cmath.sinh(lam * tau) / lam
    bp = (
        (gamma / 4.0) * cmath.sinh(2.0 * lam * tau) / lam
        + (((gamma / 4.0) ** 2 - omega**2 / 2.0) / lam**2) * cmath.cosh(2.0 * lam * tau)
        - omega**2 / (2.0 * lam**2)
    )
    return bp, bv


def screened_coeffs(q: QubitParams, s: ScreenParams) -> Coefficients:
    """Qubit coefficients after N-fold erasure-screened storage.

    Evaluated on the single complex code path described in the module
    docstring; the residual imaginary part must stay below IMAG_TOL, and
    the real parts must be physical, otherwise a transcription or
    conditioning bug is signalled by a ValueError.
    """
    n = s.n_erasures
    tau = s.total_time / n
    branch = classify_branch(s.omega, s.gamma)
    bp, bv = _segment_factors(s.omega, s.gamma, tau, branch)
    v0 = math.sqrt(q.p * (1.0 - q.p))
    population = q.p * math.exp(-s.gamma * s.total_time / 2.0) * _ipow(bp, n)
    coherence = v0 * math.exp(-s.gamma * s.total_time / 4.0) * _ipow(bv, n)
    residue = max(abs(population.imag), abs(coherence.imag))
    if residue > IMAG_TOL:
        raise ValueError(f"imaginary residue {residue:.3e} exceeds {IMAG_TOL:.0e}")
    return Coefficients(population.real, coherence.real)


def screened_fidelity(q: QubitParams, s: ScreenParams) -> float:
    """Fidelity of the screened qubit with its initial state after time t."""
    initial = Coefficients(q.p, math.sqrt(q.p * (1.0 - q.p)))
    return fidelity(initial, screened_coeffs(q, s))


def minimal_erasures(
    q: QubitParams,
    omega: float,
    gamma: float,
    t: float,
    target_fidelity: float,
    n_max: int = 2**24,
) -> int:
    """Smallest erasure count whose screened fidelity reaches the target.

    Found by doubling the count until the target is met and then bisecting
    the bracketing interval; deterministic, and exact wherever the
    fidelity crosses the target once (it approaches 1 like 1 - O(1/N), so
    the crossing is eventually monotone).
    """
    if not 0.0 < target_fidelity < 1.0:
        raise ValueError(f"target fidelity must lie in (0, 1), got {target_fidelity}")

    def value(n: int) -> float:
        return screened_fidelity(q, ScreenParams(omega, gamma, n, t))

    if value(1) >= target_fidelity:
        return 1
    low, high = 1, 2
    while value(high) < target_fidelity:
        low, high = high, high * 2
        if high > n_max:
            raise ValueError(
                f"target fidelity {target_fidelity} not reached below n_max={n_max}"
            )
    while high - low > 1:
        mid = (low + high) // 2
        if value(mid) >= target_fidelity:
            high = mid
        else:
            low = mid
    return high
