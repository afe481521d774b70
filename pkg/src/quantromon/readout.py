"""Dispersive single-shot readout: steady-state reflection, deterministic shot
simulation with T1 decay, simultaneous double-Gaussian histogram fitting, and
fidelity/error reports.

The shot model is a calibrated one, not a first-principles prediction: the
two cavity pointer states are the steady-state reflection amplitudes scaled
by sqrt(nbar), shots are projected on the line through the two pointers, and
the additive noise is ``noise_scale/sqrt(kappa_ext*tau)`` with ``noise_scale``
calibrated against a measured fidelity. Excited-state shots decay at an
exponential time t and record the time-weighted mixture of the two pointers
(uniform integration weights).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares
from scipy.special import ndtr, ndtri

from . import rng
from .errors import (
    DegenerateMixtureError,
    FitConvergenceError,
    ParameterError,
    ThresholdError,
)

__all__ = [
    "ReadoutParams",
    "ShotSet",
    "GaussianMixtureFit",
    "FidelityReport",
    "IntegrationPoint",
    "reflection_coefficient",
    "phase_separation",
    "pointer_means",
    "simulate_shots",
    "export_shots_csv",
    "import_shots_csv",
    "fit_double_gaussian",
    "threshold",
    "fidelity_report",
    "error_vs_integration",
]

# fields serialized into shot CSV headers, in order
_PARAM_FIELDS = ("omega_r", "two_chi", "kappa_ext", "kappa_int", "nbar",
                 "tau", "t1", "readout_freq", "noise_scale", "thermal_pop")


@dataclass(frozen=True)
class ReadoutParams:
    """Readout operating point.

    ``omega_r`` is the resonator frequency with the qubit in state 0; state 1
    pulls it down by ``two_chi``. ``readout_freq`` defaults to the midpoint of
    the two pulled frequencies. ``noise_scale`` is the calibrated
    SNR-per-sqrt(tau) factor described in the module docstring;
    ``thermal_pop`` is the probability that a nominally-ground shot starts
    excited.
    """

    omega_r: float
    two_chi: float
    kappa_ext: float
    kappa_int: float
    nbar: float
    tau: float
    t1: float
    readout_freq: float | None = None
    noise_scale: float = 2.05
    thermal_pop: float = 0.0

    def __post_init__(self):
        if self.kappa_ext < 0.0 or self.kappa_int < 0.0:
            raise ParameterError("kappa_ext and kappa_int must be >= 0")
        if self.kappa_ext + self.kappa_int <= 0.0:
            raise ParameterError("kappa_ext + kappa_int must be > 0")
        if not (self.tau > 0.0):
            raise ParameterError(f"tau must be > 0, got {self.tau!r}")
        if not (self.nbar > 0.0):
            raise ParameterError(f"nbar must be > 0, got {self.nbar!r}")
        if not (self.t1 > 0.0):
            raise ParameterError(f"t1 must be > 0, got {self.t1!r}")
        if not (0.0 <= self.thermal_pop < 1.0):
            raise ParameterError(f"thermal_pop must lie in [0, 1), got {self.thermal_pop!r}")


def reflection_coefficient(omega: float, omega_r_pulled: float,
                           kappa_ext: float, kappa_int: float) -> complex:
    """One-port reflection S11 off a resonator at its pulled frequency.

    S11 = (i(w - w_r) + (k_int - k_ext)/2) / (i(w - w_r) + (k_int + k_ext)/2),
    so |S11| <= 1, with full phase wrap through resonance when over-coupled.
    """
    detuning = omega - omega_r_pulled
    return ((1j * detuning + (kappa_int - kappa_ext) / 2.0)
            / (1j * detuning + (kappa_int + kappa_ext) / 2.0))


def phase_separation(two_chi: float, kappa_ext: float, kappa_int: float) -> float:
    """Reflected-phase separation (degrees) between the two qubit states.

    Readout is taken at the midpoint of the two pulled resonator frequencies,
    so the detunings are +-chi. Over-coupled resonators wrap the phase through
    +-180 deg at resonance; the separation then follows the continuous branch,
    i.e. 360 deg minus the principal-branch gap.
    """
    if kappa_ext + kappa_int <= 0.0:
        raise ParameterError("total linewidth must be > 0")
    chi = two_chi / 2.0
    s_plus = reflection_coefficient(chi, 0.0, kappa_ext, kappa_int)
    gap = 2.0 * math.degrees(np.angle(s_plus))  # principal-branch gap, symmetric
    if kappa_ext > kappa_int:
        return 360.0 - gap
    return gap


def pointer_means(p: ReadoutParams) -> tuple[float, float]:
    """1-D pointer means (a.u.) for qubit states 0 and 1.

    Complex reflection amplitudes sqrt(nbar)*S11(state), projected on the
    line through the two means, with the origin at their midpoint.
    """
    f_ro = p.readout_freq if p.readout_freq is not None else p.omega_r - p.two_chi / 2.0
    r0 = reflection_coefficient(f_ro, p.omega_r, p.kappa_ext, p.kappa_int)
    r1 = reflection_coefficient(f_ro, p.omega_r - p.two_chi, p.kappa_ext, p.kappa_int)
    separation = math.sqrt(p.nbar) * abs(r1 - r0)
    return -separation / 2.0, separation / 2.0


@dataclass(frozen=True)
class ShotSet:
    """Projected quadrature values for shots prepared in one qubit state."""

    prepared_state: int
    values: np.ndarray = field(repr=False)
    seed: int
    params: ReadoutParams

    def __post_init__(self):
        if self.prepared_state not in (0, 1):
            raise ParameterError(f"prepared_state must be 0 or 1, got {self.prepared_state!r}")


def _noise_sigma(p: ReadoutParams) -> float:
    if p.kappa_ext <= 0.0:
        raise ParameterError("shot simulation requires kappa_ext > 0")
    return p.noise_scale / math.sqrt(p.kappa_ext * p.tau)


def simulate_shots(p: ReadoutParams, prepared: int, n_shots: int, seed: int) -> ShotSet:
    """Generate a deterministic ShotSet.

    Shot i draws its randoms from the counter-based stream keyed by
    ``(seed, prepared)`` at counter i, so any evaluation order (or a
    concurrent split over index ranges) is bit-identical. Excited shots that
    decay at t < tau record the uniform-weight mixture
    ``(t*m1 + (tau - t)*m0)/tau``.
    """
    if prepared not in (0, 1):
        raise ParameterError(f"prepared must be 0 or 1, got {prepared!r}")
    if n_shots < 1:
        raise ParameterError(f"n_shots must be >= 1, got {n_shots!r}")

    m0, m1 = pointer_means(p)
    sigma = _noise_sigma(p)
    u = rng.uniforms(seed, prepared, np.arange(n_shots, dtype=np.uint64))
    noise = ndtri(u[:, 0]) * sigma

    if prepared == 1:
        excited = np.ones(n_shots, dtype=bool)
    else:
        excited = u[:, 2] < p.thermal_pop

    base = np.full(n_shots, m0)
    if np.any(excited):
        t_decay = -p.t1 * np.log(u[:, 1][excited])
        weight = np.minimum(t_decay / p.tau, 1.0)
        base[excited] = weight * m1 + (1.0 - weight) * m0
    values = base + noise
    return ShotSet(prepared_state=prepared, values=values, seed=seed, params=p)


# ---------------------------------------------------------------------------
# CSV import/export (one value per line; params and seed in the header)
# ---------------------------------------------------------------------------

def _format(x: float) -> str:
    return repr(float(x))


def export_shots_csv(shots: ShotSet, path) -> None:
    """Write a ShotSet with full round-trip precision, LF line endings."""
    buf = io.StringIO()
    buf.write(f"# prepared_state={shots.prepared_state}\n")
    buf.write(f"# seed={shots.seed}\n")
    for name in _PARAM_FIELDS:
        value = getattr(shots.params, name)
        buf.write(f"# {name}={'' if value is None else _format(value)}\n")
    buf.write("value\n")
    for v in shots.values:
        buf.write(_format(v) + "\n")
    with open(path, "w", newline="") as f:
        f.write(buf.getvalue())


def import_shots_csv(path) -> ShotSet:
    """Parse a ShotSet written by :func:`export_shots_csv` (or a compatible
    real measurement record)."""
    header: dict[str, str] = {}
    values: list[float] = []
    with open(path, "r", newline="") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line.lstrip("# ").partition("=")
                header[key.strip()] = val.strip()
            elif line != "value":
                values.append(float(line))
    try:
        kwargs = {}
        for name in _PARAM_FIELDS:
            raw = header.get(name, "")
            if name == "readout_freq" and raw == "":
                kwargs[name] = None
            else:
                kwargs[name] = float(raw)
        params = ReadoutParams(**kwargs)
        prepared = int(header["prepared_state"])
        seed = int(header["seed"])
    except (KeyError, ValueError) as exc:
        raise ParameterError(f"malformed shot CSV header in {path}: {exc}") from exc
    return ShotSet(prepared_state=prepared, values=np.asarray(values, dtype=float),
                   seed=seed, params=params)


# ---------------------------------------------------------------------------
# Double-Gaussian fitting, thresholding, and error reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianMixtureFit:
    """Simultaneous two-histogram mixture fit.

    State-0 counts are modeled as a0*N(mu0, sigma0) + (1-a0)*N(mu1, sigma1)
    and state-1 counts as (1-a1)*N(mu0, sigma0) + a1*N(mu1, sigma1).
    """

    mu0: float
    mu1: float
    sigma0: float
    sigma1: float
    a0: float
    a1: float
    residual_norm: float


def _normal_pdf(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    z = (x - mu) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def _fd_bin_edges(pooled: np.ndarray) -> np.ndarray:
    """Freedman-Diaconis bin edges over the pooled data (shared by both states)."""
    lo, hi = float(np.min(pooled)), float(np.max(pooled))
    if hi <= lo:
        hi = lo + 1.0
    q75, q25 = np.percentile(pooled, [75.0, 25.0])
    width = 2.0 * (q75 - q25) * pooled.size ** (-1.0 / 3.0)
    if width <= 0.0:
        n_bins = 10
    else:
        n_bins = int(np.clip(math.ceil((hi - lo) / width), 10, 512))
    return np.linspace(lo, hi, n_bins + 1)


def fit_double_gaussian(shots0: ShotSet, shots1: ShotSet,
                        max_nfev: int = 2000) -> GaussianMixtureFit:
    """Simultaneous least-squares fit of both state histograms.

    Histograms are density-normalized on shared Freedman-Diaconis bins.
    Initial means come from the 25th/75th percentiles of the pooled data,
    initial widths from the per-side deviations about the pooled median, and
    both dominant weights start at 0.95. Convergence: relative parameter step
    below 1e-8 or residual stagnation; hitting the evaluation cap raises
    :class:`FitConvergenceError`, an indistinguishable pair of shot sets
    raises :class:`DegenerateMixtureError`.
    """
    x0v = np.asarray(shots0.values, dtype=float)
    x1v = np.asarray(shots1.values, dtype=float)
    if x0v.size == 0 or x1v.size == 0:
        raise ParameterError("both shot sets must be nonempty")
    if x0v.size + x1v.size < 8:  # fewer samples than fit parameters
        raise DegenerateMixtureError(
            f"{x0v.size + x1v.size} shots cannot constrain a six-parameter mixture"
        )
    pooled = np.concatenate([x0v, x1v])
    edges = _fd_bin_edges(pooled)
    centers = 0.5 * (edges[:-1] + edges[1:])
    hist0 = np.histogram(x0v, bins=edges, density=True)[0]
    hist1 = np.histogram(x1v, bins=edges, density=True)[0]

    mu0_init, mu1_init = np.percentile(pooled, [25.0, 75.0])
    med = np.median(pooled)
    lo_side = pooled[pooled <= med]
    hi_side = pooled[pooled > med]
    scale = max(float(np.std(pooled)), 1e-12)
    s0_init = float(np.std(lo_side)) or scale
    s1_init = float(np.std(hi_side)) or scale
    p_init = np.array([mu0_init, mu1_init, s0_init, s1_init, 0.95, 0.95])

    def residuals(p):
        mu0, mu1, s0, s1, a0, a1 = p
        g0 = _normal_pdf(centers, mu0, s0)
        g1 = _normal_pdf(centers, mu1, s1)
        model0 = a0 * g0 + (1.0 - a0) * g1
        model1 = (1.0 - a1) * g0 + a1 * g1
        return np.concatenate([model0 - hist0, model1 - hist1])

    lower = [-np.inf, -np.inf, 1e-12 * scale, 1e-12 * scale, 0.0, 0.0]
    upper = [np.inf, np.inf, np.inf, np.inf, 1.0, 1.0]
    result = least_squares(residuals, p_init, bounds=(lower, upper),
                           xtol=1e-8, ftol=1e-12, gtol=None, max_nfev=max_nfev)
    if result.status == 0:
        raise FitConvergenceError(
            f"mixture fit hit the evaluation cap ({max_nfev}) "
            f"with residual norm {np.linalg.norm(result.fun):.3e}"
        )

    mu0, mu1, s0, s1, a0, a1 = result.x
    if a0 < 0.5:  # relabeling symmetry: make component 0 the state-0 majority
        mu0, mu1, s0, s1 = mu1, mu0, s1, s0
        a0, a1 = 1.0 - a0, 1.0 - a1

    sigma_mean = 0.5 * (s0 + s1)
    if abs(mu1 - mu0) < 0.1 * sigma_mean or (a0 + a1) < 1.2:
        raise DegenerateMixtureError(
            "fitted means collapse: the two shot sets are not bimodal "
            f"(|mu1-mu0|={abs(mu1 - mu0):.3g}, sigmas=({s0:.3g}, {s1:.3g}), "
            f"a0={a0:.3f}, a1={a1:.3f})"
        )
    return GaussianMixtureFit(
        mu0=float(mu0), mu1=float(mu1), sigma0=float(s0), sigma1=float(s1),
        a0=float(a0), a1=float(a1),
        residual_norm=float(np.linalg.norm(result.fun)),
    )


def threshold(fit: GaussianMixtureFit) -> float:
    """Intersection of the two unit-weight fitted normal densities.

    Solves N(x; mu0, sigma0) = N(x; mu1, sigma1) and returns the root strictly
    between the means; equal widths give the midpoint exactly.
    """
    mu0, mu1, s0, s1 = fit.mu0, fit.mu1, fit.sigma0, fit.sigma1
    if mu0 == mu1:
        raise ThresholdError("mu0 == mu1: no demarcation exists")
    if abs(s0 - s1) <= 1e-12 * (s0 + s1):
        return 0.5 * (mu0 + mu1)
    a = 1.0 / s1**2 - 1.0 / s0**2
    b = -2.0 * (mu1 / s1**2 - mu0 / s0**2)
    c = mu1**2 / s1**2 - mu0**2 / s0**2 - 2.0 * math.log(s0 / s1)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise ThresholdError("density intersection has no real solution")
    lo, hi = min(mu0, mu1), max(mu0, mu1)
    for root in ((-b + math.sqrt(disc)) / (2.0 * a), (-b - math.sqrt(disc)) / (2.0 * a)):
        if lo < root < hi:
            return root
    raise ThresholdError(
        f"no density intersection strictly between the means ({lo:.4g}, {hi:.4g})"
    )


@dataclass(frozen=True)
class FidelityReport:
    """Assignment-error decomposition at a fixed threshold.

    ``eps_id`` is the overlap error of the two fitted unit Gaussians across
    the threshold (sum of both tails); ``eps_01``/``eps_10`` are the residual
    empirical errors beyond that overlap, floored at zero.
    """

    threshold: float
    p01: float
    p10: float
    fidelity: float
    eps_id: float
    eps_01: float
    eps_10: float


def fidelity_report(shots0: ShotSet, shots1: ShotSet, fit: GaussianMixtureFit,
                    thr: float) -> FidelityReport:
    """Empirical P(0|1), P(1|0) and the fidelity 1 - (P(0|1)+P(1|0))/2."""
    sign = 1.0 if fit.mu1 >= fit.mu0 else -1.0
    assign1_0 = sign * (np.asarray(shots0.values) - thr) > 0.0
    assign1_1 = sign * (np.asarray(shots1.values) - thr) > 0.0
    p10 = float(np.mean(assign1_0))
    p01 = float(np.mean(~assign1_1))

    # single-Gaussian tails across the threshold
    z0 = sign * (thr - fit.mu0) / fit.sigma0
    z1 = sign * (fit.mu1 - thr) / fit.sigma1
    tail0 = float(ndtr(-z0))  # fitted state-0 density beyond the threshold
    tail1 = float(ndtr(-z1))  # fitted state-1 density below the threshold
    return FidelityReport(
        threshold=thr,
        p01=p01,
        p10=p10,
        fidelity=1.0 - (p01 + p10) / 2.0,
        eps_id=tail0 + tail1,
        eps_01=max(p01 - tail1, 0.0),
        eps_10=max(p10 - tail0, 0.0),
    )


@dataclass(frozen=True)
class IntegrationPoint:
    """Error budget at one integration time; ``degenerate`` flags rows whose
    mixture fit collapsed (statistics too poor to decompose errors)."""

    tau: float
    fidelity: float
    eps_id: float
    eps_01: float
    eps_10: float
    degenerate: bool = False


def _row_seed(seed: int, index: int) -> int:
    return (seed * 1000003 + index) & 0xFFFFFFFFFFFFFFFF


def error_vs_integration(p: ReadoutParams, tau_list: list[float], n_shots: int,
                         seed: int) -> list[IntegrationPoint]:
    """Simulate -> fit -> report for each integration time; deterministic."""
    points: list[IntegrationPoint] = []
    for i, tau in enumerate(tau_list):
        p_tau = replace(p, tau=tau)
        row_seed = _row_seed(seed, i)
        s0 = simulate_shots(p_tau, 0, n_shots, row_seed)
        s1 = simulate_shots(p_tau, 1, n_shots, row_seed)
        try:
            fit = fit_double_gaussian(s0, s1)
            thr = threshold(fit)
            report = fidelity_report(s0, s1, fit, thr)
        except (DegenerateMixtureError, FitConvergenceError, ThresholdError):
            # too few/indistinct shots: fall back to an empirical midpoint split
            m0 = float(np.mean(s0.values))
            m1 = float(np.mean(s1.values))
            thr = 0.5 * (m0 + m1)
            sign = 1.0 if m1 >= m0 else -1.0
            p10 = float(np.mean(sign * (s0.values - thr) > 0.0))
            p01 = float(np.mean(~(sign * (s1.values - thr) > 0.0)))
            points.append(IntegrationPoint(
                tau=tau, fidelity=1.0 - (p01 + p10) / 2.0,
                eps_id=math.nan, eps_01=math.nan, eps_10=math.nan,
                degenerate=True,
            ))
            continue
        points.append(IntegrationPoint(
            tau=tau, fidelity=report.fidelity, eps_id=report.eps_id,
            eps_01=report.eps_01, eps_10=report.eps_10,
        ))
    return points
