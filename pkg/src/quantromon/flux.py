"""Flux tuning of the junction energies and full-pipeline flux sweeps.

Two tunable layouts are modeled: both junctions replaced by (identical)
SQUIDs, so the summed energy scales by |cos(n*pi*a)| with the asymmetry
unchanged, and a single SQUID, where E_Jsigma = E_J1 + E_J2*cos(n*pi*a) and
the asymmetry itself tunes with flux. ``a`` is the SQUID-to-qubit-loop area
ratio and ``n`` the integer number of flux quanta in the qubit loop;
fractional flux bias is rejected rather than extrapolated.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

from .analytic import SpectrumResult, dressed_spectrum
from .coherence import CoherenceConfig, CoherenceReport, coherence_report
from .errors import ParameterError, UnphysicalOperatingPointError
from .params import CircuitParams, ModeEnergies, derive_energies

__all__ = [
    "FluxMode",
    "FluxConfig",
    "SweepRow",
    "FluxPointResult",
    "tuned_junctions",
    "junction_energies_from_circuit",
    "energies_at_flux",
    "evaluate_flux_point",
    "sweep",
    "fit_one_squid",
    "fit_both_squids_area",
]


class FluxMode(enum.Enum):
    BOTH_SQUIDS = "both_squids"
    ONE_SQUID = "one_squid"
    FIXED = "fixed"


@dataclass(frozen=True)
class FluxConfig:
    """Zero-flux junction energies (Hz) plus the flux operating point."""

    mode: FluxMode
    e_j1_zero: float
    e_j2_zero: float
    area_ratio_a: float = 0.0
    n: int = 0

    def __post_init__(self):
        if self.mode is not FluxMode.FIXED and not (0.0 < self.area_ratio_a < 1.0):
            raise ParameterError(
                f"area_ratio_a must lie in (0, 1) for tunable modes, "
                f"got {self.area_ratio_a!r}"
            )
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            raise ParameterError(f"flux bias n must be an integer, got {self.n!r}")


def tuned_junctions(cfg: FluxConfig) -> tuple[float, float]:
    """Summed junction energy E_Jsigma (Hz) and asymmetry d_j at flux bias n."""
    if cfg.mode is FluxMode.FIXED:
        e_jsigma = cfg.e_j1_zero + cfg.e_j2_zero
        d_j = (cfg.e_j1_zero - cfg.e_j2_zero) / e_jsigma
        return e_jsigma, d_j

    phase = cfg.n * math.pi * cfg.area_ratio_a
    if cfg.mode is FluxMode.ONE_SQUID:
        ej2 = cfg.e_j2_zero * math.cos(phase)
        e_jsigma = cfg.e_j1_zero + ej2
        if e_jsigma <= 0.0:
            raise UnphysicalOperatingPointError(
                f"E_Jsigma = {e_jsigma:.4g} Hz <= 0 at n = {cfg.n}: "
                "SQUID tuned through zero"
            )
        return e_jsigma, (cfg.e_j1_zero - ej2) / e_jsigma

    # both SQUIDs, assumed identical: common |cos| scaling, asymmetry fixed
    scale = abs(math.cos(phase))
    e_jsigma = (cfg.e_j1_zero + cfg.e_j2_zero) * scale
    if e_jsigma <= 0.0:
        raise UnphysicalOperatingPointError(
            f"E_Jsigma = 0 at n = {cfg.n}: SQUIDs biased at half flux quantum"
        )
    d_j = (cfg.e_j1_zero - cfg.e_j2_zero) / (cfg.e_j1_zero + cfg.e_j2_zero)
    return e_jsigma, d_j


def junction_energies_from_circuit(params: CircuitParams) -> tuple[float, float]:
    """Split the circuit's zero-flux E_Jsigma = 2*E_J per its asymmetry d_j."""
    en = derive_energies(params)
    return (1.0 + params.d_j) / 2.0 * en.e_jq, (1.0 - params.d_j) / 2.0 * en.e_jq


def energies_at_flux(params: CircuitParams, e_jsigma: float, d_j: float) -> ModeEnergies:
    """Mode energies with the junction energy replaced by its tuned value."""
    base = derive_energies(params)
    e_j = e_jsigma / 2.0
    return replace(
        base,
        e_j=e_j,
        e_jq=e_jsigma,
        e_jr=base.e_lr + (base.b**2 / 2.0) * e_j,
        d_j=d_j,
    )


@dataclass(frozen=True)
class FluxPointResult:
    n: int
    e_jsigma: float
    d_j: float
    spectrum: SpectrumResult
    coherence: CoherenceReport


@dataclass(frozen=True)
class SweepRow:
    """One flux operating point of the sweep; ``error`` is set for failed rows."""

    n: int
    e_jsigma: float = math.nan
    d_j: float = math.nan
    omega_q_t: float = math.nan
    delta: float = math.nan
    two_chi_total: float = math.nan
    t1_model: float = math.nan
    error: str | None = None


def evaluate_flux_point(params: CircuitParams, cfg: FluxConfig, n: int,
                        coherence: CoherenceConfig) -> FluxPointResult:
    """Tuned junctions -> energies -> dressed spectrum -> coherence budget."""
    e_jsigma, d_j = tuned_junctions(replace(cfg, n=n))
    en = energies_at_flux(params, e_jsigma, d_j)
    spec = dressed_spectrum(en)
    report = coherence_report(
        omega_q_t=spec.omega_q_t,
        delta=spec.delta,
        g_asymm=spec.g_asymm,
        two_chi_total=spec.two_chi_total,
        alpha_q=spec.alpha_q,
        cfg=coherence,
    )
    return FluxPointResult(n=n, e_jsigma=e_jsigma, d_j=d_j,
                           spectrum=spec, coherence=report)


def sweep(params: CircuitParams, cfg: FluxConfig, n_list: list[int],
          coherence: CoherenceConfig) -> list[SweepRow]:
    """Evaluate the full pipeline at each flux bias; failed rows are kept.

    Rows are a pure function of the inputs and come back in n_list order.
    """
    rows: list[SweepRow] = []
    for n in n_list:
        try:
            point = evaluate_flux_point(params, cfg, n, coherence)
        except Exception as exc:  # collect, keep sweeping
            rows.append(SweepRow(n=n, error=f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(SweepRow(
            n=n,
            e_jsigma=point.e_jsigma,
            d_j=point.d_j,
            omega_q_t=point.spectrum.omega_q_t,
            delta=point.spectrum.delta,
            two_chi_total=point.spectrum.two_chi_total,
            t1_model=point.coherence.t1_model,
        ))
    return rows


def _qubit_frequency(params: CircuitParams, e_jsigma: float, d_j: float = 0.0) -> float:
    # bracket searches probe regimes where the closed form would warn; the
    # monotone map is all that matters here
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return dressed_spectrum(energies_at_flux(params, e_jsigma, d_j)).omega_q_t


def _solve_e_jsigma(params: CircuitParams, f_target: float,
                    lo: float = 1e6, hi: float = 1e13) -> float:
    # dressed qubit frequency is monotone in E_Jsigma over this bracket
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _qubit_frequency(params, mid) < f_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_grid(a_step: float, a_max: float):
    return (k * a_step for k in range(1, int(a_max / a_step) + 1))


def fit_one_squid(params: CircuitParams, f_q_zero: float, d_j_zero: float,
                  anchor_n: int, d_j_anchor: float, a_step: float = 1e-4,
                  a_max: float | None = None) -> FluxConfig:
    """Reconstruct a one-SQUID flux configuration from measured observables.

    The zero-flux qubit frequency and asymmetry fix the junction split; the
    area ratio is then the grid value (deterministic bounded scan, step
    ``a_step``) whose asymmetry at ``anchor_n`` is closest to the measured
    one. The anchor is the asymmetry rather than the frequency because near
    the zero crossing the sign of d_j is the sharper observable. The scan is
    restricted to the first cosine branch (``a_max`` defaults to
    ``0.5/anchor_n``); aliased larger-area solutions reproduce the anchor but
    not the monotone tuning between the endpoints.
    """
    e_jsigma0 = _solve_e_jsigma(params, f_q_zero)
    e_j1 = (1.0 + d_j_zero) / 2.0 * e_jsigma0
    e_j2 = (1.0 - d_j_zero) / 2.0 * e_jsigma0

    if a_max is None:
        a_max = 0.5 / anchor_n
    best_a, best_err = None, math.inf
    for a in _scan_grid(a_step, a_max):
        ej2 = e_j2 * math.cos(anchor_n * math.pi * a)
        e_jsigma = e_j1 + ej2
        if e_jsigma > 0.0:
            err = abs((e_j1 - ej2) / e_jsigma - d_j_anchor)
            if err < best_err:
                best_a, best_err = a, err
    if best_a is None:
        raise UnphysicalOperatingPointError(
            f"no physical area ratio found in (0, {a_max})"
        )
    return FluxConfig(mode=FluxMode.ONE_SQUID, e_j1_zero=e_j1, e_j2_zero=e_j2,
                      area_ratio_a=best_a, n=0)


def fit_both_squids_area(params: CircuitParams, anchor_n: int,
                         f_q_anchor: float, a_step: float = 1e-4,
                         a_max: float | None = None) -> float:
    """Effective area ratio matching the qubit frequency at one flux anchor.

    The scan is restricted to the first cosine branch (``a_max`` defaults to
    ``0.5/anchor_n``) so the resulting 0..anchor_n sweep is monotone, as the
    measured one is.
    """
    en = derive_energies(params)
    e_jsigma0 = en.e_jq
    if a_max is None:
        a_max = 0.5 / anchor_n
    best_a, best_err = None, math.inf
    for a in _scan_grid(a_step, a_max):
        scale = abs(math.cos(anchor_n * math.pi * a))
        if scale > 0.0:
            err = abs(_qubit_frequency(params, e_jsigma0 * scale) - f_q_anchor)
            if err < best_err:
                best_a, best_err = a, err
    if best_a is None:
        raise UnphysicalOperatingPointError(f"no area ratio found below {a_max}")
    return best_a
