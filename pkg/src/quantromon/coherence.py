"""T1 budgets: dielectric loss, asymmetry-induced Purcell decay, and the
equivalent-transmon comparison.

kappa, g, and Delta are all supplied as ordinary frequencies in Hz; the
conversion to angular frequency happens internally so lifetimes come out in
seconds. The Purcell lifetime is Delta**2/(kappa*g**2) in angular-consistent
units, i.e. the inverse of the decay rate kappa*g**2/Delta**2. A vanishing
coupling returns ``math.inf`` ("no Purcell channel").
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError, UnphysicalRegimeError

__all__ = [
    "CoherenceConfig",
    "CoherenceReport",
    "t1_dielectric",
    "t1_purcell",
    "combine",
    "transmon_equivalent_g",
    "coherence_report",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CoherenceConfig:
    """Dielectric quality factor and readout linewidth (kappa/2pi, Hz)."""

    q_diel: float
    kappa: float

    def __post_init__(self):
        if not (self.q_diel > 0.0):
            raise ParameterError(f"q_diel must be > 0, got {self.q_diel!r}")
        if not (self.kappa > 0.0):
            raise ParameterError(f"kappa must be > 0, got {self.kappa!r}")


@dataclass(frozen=True)
class CoherenceReport:
    """Lifetimes in seconds; 1/t1_model = 1/t1_diel + 1/t1_asymm."""

    t1_diel: float
    t1_asymm: float
    t1_model: float
    t1_transmon_purcell: float


def t1_dielectric(omega_q: float, q_diel: float) -> float:
    """Dielectric-loss lifetime Q/(2*pi*f) in seconds."""
    if not (omega_q > 0.0) or not (q_diel > 0.0):
        raise ParameterError(
            f"omega_q and q_diel must be > 0, got {omega_q!r}, {q_diel!r}"
        )
    return q_diel / (_TWO_PI * omega_q)


def t1_purcell(g: float, delta: float, kappa: float) -> float:
    """Purcell lifetime Delta**2/(kappa*g**2), inputs in Hz, output seconds."""
    if delta == 0.0:
        raise ParameterError("delta must be nonzero for a Purcell estimate")
    if not (kappa > 0.0):
        raise ParameterError(f"kappa must be > 0, got {kappa!r}")
    if g == 0.0:
        return math.inf
    return delta**2 / (_TWO_PI * kappa * g**2)


def combine(contributions: list[float]) -> float:
    """Harmonic combination of lifetimes; infinite channels contribute no rate.

    Rates are accumulated with ``math.fsum`` so the result is exactly
    permutation-invariant.
    """
    if not contributions:
        raise ParameterError("at least one T1 contribution required")
    rates = []
    for t1 in contributions:
        if math.isinf(t1):
            continue
        if not (t1 > 0.0):
            raise ParameterError(f"T1 contributions must be > 0, got {t1!r}")
        rates.append(1.0 / t1)
    total = math.fsum(rates)
    return math.inf if total == 0.0 else 1.0 / total


def transmon_equivalent_g(two_chi_target: float, delta: float,
                          alpha_q: float) -> float:
    """Transverse coupling a transmon would need for the same dispersive shift.

    Inverts chi = (g**2/Delta)*(alpha/(Delta+alpha)). Only defined where
    Delta*(Delta+alpha) > 0 for a positive target shift.
    """
    if not (alpha_q > 0.0):
        raise ParameterError(f"alpha_q must be > 0, got {alpha_q!r}")
    chi = two_chi_target / 2.0
    product = delta * (delta + alpha_q)
    g_squared = chi * product / alpha_q
    if product == 0.0 or g_squared <= 0.0:
        raise UnphysicalRegimeError(
            "chi = (g^2/Delta)(alpha/(Delta+alpha)) is not invertible here "
            f"(two_chi={two_chi_target!r}, delta={delta!r}, alpha={alpha_q!r})"
        )
    return math.sqrt(g_squared)


def coherence_report(omega_q_t: float, delta: float, g_asymm: float,
                     two_chi_total: float, alpha_q: float,
                     cfg: CoherenceConfig) -> CoherenceReport:
    """Full budget at one operating point, including the transmon comparison."""
    t1_diel = t1_dielectric(omega_q_t, cfg.q_diel)
    t1_asymm = t1_purcell(g_asymm, delta, cfg.kappa)
    g_equiv = transmon_equivalent_g(two_chi_total, delta, alpha_q)
    return CoherenceReport(
        t1_diel=t1_diel,
        t1_asymm=t1_asymm,
        t1_model=combine([t1_diel, t1_asymm]),
        t1_transmon_purcell=t1_purcell(g_equiv, delta, cfg.kappa),
    )
