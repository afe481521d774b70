"""Command-line interface: strict JSON configs in, CSV/JSON tables out.

Subcommands: energies, spectrum, chi-sweep, t1-model, readout-sim,
readout-fit, phase. Exit codes: 0 success, 1 validation/config error,
2 numerical failure. Numeric output is written with full round-trip decimal
precision and LF line endings so reruns with identical config and seed are
byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .analytic import dressed_spectrum
from .coherence import CoherenceConfig
from .errors import ConfigError, NumericalError, ParameterError
from .flux import (
    FluxConfig,
    FluxMode,
    evaluate_flux_point,
    junction_energies_from_circuit,
    sweep,
)
from .numeric import Truncation, numeric_spectrum
from .params import CircuitParams, derive_energies, validate
from .readout import (
    ReadoutParams,
    error_vs_integration,
    export_shots_csv,
    fidelity_report,
    fit_double_gaussian,
    import_shots_csv,
    phase_separation,
    simulate_shots,
    threshold,
)

__all__ = ["main", "run", "load_config", "normalize_config", "RunConfig"]

_CIRCUIT_KEYS = {"l_j", "c_j", "l_r", "c_r", "b", "d_j"}
_FLUX_KEYS = {"mode", "e_j1_zero", "e_j2_zero", "area_ratio_a", "n"}
_COHERENCE_KEYS = {"q_diel", "kappa"}
_READOUT_KEYS = {"omega_r", "two_chi", "kappa_ext", "kappa_int", "nbar", "tau",
                 "t1", "readout_freq", "noise_scale", "thermal_pop"}
_SWEEP_KEYS = {"n_list"}
_SIM_KEYS = {"n_shots", "seed", "tau_list"}
_SECTIONS = {
    "description": None,
    "circuit": _CIRCUIT_KEYS,
    "flux": _FLUX_KEYS,
    "coherence": _COHERENCE_KEYS,
    "readout": _READOUT_KEYS,
    "sweep": _SWEEP_KEYS,
    "readout_sim": _SIM_KEYS,
}


@dataclass(frozen=True)
class SimOptions:
    n_shots: int = 20000
    seed: int = 0
    tau_list: tuple[float, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    circuit: CircuitParams | None = None
    flux: FluxConfig | None = None
    coherence: CoherenceConfig | None = None
    readout: ReadoutParams | None = None
    n_list: tuple[int, ...] = ()
    sim: SimOptions = SimOptions()


def _require_number(section: str, key: str, value, allow_none: bool = False):
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    return float(value)


def normalize_config(raw: dict) -> dict:
    """Validate a raw config dict: reject unknown keys, check basic types.

    Returns a normalized copy (same content, canonical key order); feeding the
    result back through is the identity.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    out: dict = {}
    for section, content in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section {section!r}")
        if section == "description":
            if not isinstance(content, str):
                raise ConfigError("description must be a string")
            out[section] = content
            continue
        if not isinstance(content, dict):
            raise ConfigError(f"section {section!r} must be a JSON object")
        allowed = _SECTIONS[section]
        for key in content:
            if key not in allowed:
                raise ConfigError(f"unknown key {section}.{key}")
        out[section] = {k: content[k] for k in sorted(content)}
    return out


def _parse_circuit(section: dict) -> CircuitParams:
    missing = {"l_j", "c_j", "l_r", "c_r", "b"} - set(section)
    if missing:
        raise ConfigError(f"circuit section missing keys: {sorted(missing)}")
    return CircuitParams(
        l_j=_require_number("circuit", "l_j", section["l_j"]),
        c_j=_require_number("circuit", "c_j", section["c_j"]),
        l_r=_require_number("circuit", "l_r", section["l_r"]),
        c_r=_require_number("circuit", "c_r", section["c_r"]),
        b=_require_number("circuit", "b", section["b"]),
        d_j=_require_number("circuit", "d_j", section.get("d_j", 0.0)),
    )


def _parse_flux(section: dict, circuit: CircuitParams | None) -> FluxConfig:
    mode_raw = section.get("mode", "fixed")
    try:
        mode = FluxMode(mode_raw)
    except ValueError:
        raise ConfigError(
            f"flux.mode must be one of {[m.value for m in FluxMode]}, got {mode_raw!r}"
        ) from None
    e_j1 = _require_number("flux", "e_j1_zero", section.get("e_j1_zero"), allow_none=True)
    e_j2 = _require_number("flux", "e_j2_zero", section.get("e_j2_zero"), allow_none=True)
    if e_j1 is None or e_j2 is None:
        if circuit is None:
            raise ConfigError(
                "flux.e_j1_zero/e_j2_zero are null and no circuit section is "
                "present to derive them from"
            )
        derived = junction_energies_from_circuit(circuit)
        e_j1 = derived[0] if e_j1 is None else e_j1
        e_j2 = derived[1] if e_j2 is None else e_j2
    n = section.get("n", 0)
    if isinstance(n, bool) or not isinstance(n, int):
        raise ConfigError(f"flux.n must be an integer, got {n!r}")
    return FluxConfig(
        mode=mode, e_j1_zero=e_j1, e_j2_zero=e_j2,
        area_ratio_a=_require_number("flux", "area_ratio_a",
                                     section.get("area_ratio_a", 0.0)),
        n=n,
    )


def _parse_readout(section: dict) -> ReadoutParams:
    missing = {"omega_r", "two_chi", "kappa_ext", "kappa_int", "nbar", "tau", "t1"} - set(section)
    if missing:
        raise ConfigError(f"readout section missing keys: {sorted(missing)}")
    kwargs = {key: _require_number("readout", key, section[key])
              for key in ("omega_r", "two_chi", "kappa_ext", "kappa_int",
                          "nbar", "tau", "t1")}
    kwargs["readout_freq"] = _require_number(
        "readout", "readout_freq", section.get("readout_freq"), allow_none=True)
    kwargs["noise_scale"] = _require_number(
        "readout", "noise_scale", section.get("noise_scale", 2.05))
    kwargs["thermal_pop"] = _require_number(
        "readout", "thermal_pop", section.get("thermal_pop", 0.0))
    return ReadoutParams(**kwargs)


def _parse_n_list(section: dict) -> tuple[int, ...]:
    n_list = section.get("n_list", [])
    if not isinstance(n_list, list) or any(
            isinstance(n, bool) or not isinstance(n, int) for n in n_list):
        raise ConfigError("sweep.n_list must be a list of integers")
    return tuple(n_list)


def _parse_sim(section: dict) -> SimOptions:
    n_shots = section.get("n_shots", 20000)
    seed = section.get("seed", 0)
    if isinstance(n_shots, bool) or not isinstance(n_shots, int) or n_shots < 1:
        raise ConfigError(f"readout_sim.n_shots must be a positive integer, got {n_shots!r}")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"readout_sim.seed must be a non-negative integer, got {seed!r}")
    tau_list = section.get("tau_list", [])
    if not isinstance(tau_list, list):
        raise ConfigError("readout_sim.tau_list must be a list of numbers")
    taus = tuple(_require_number("readout_sim", "tau_list", t) for t in tau_list)
    return SimOptions(n_shots=n_shots, seed=seed, tau_list=taus)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    data = normalize_config(raw)
    circuit = _parse_circuit(data["circuit"]) if "circuit" in data else None
    return RunConfig(
        circuit=circuit,
        flux=_parse_flux(data["flux"], circuit) if "flux" in data else None,
        coherence=(CoherenceConfig(
            q_diel=_require_number("coherence", "q_diel", data["coherence"].get("q_diel")),
            kappa=_require_number("coherence", "kappa", data["coherence"].get("kappa")),
        ) if "coherence" in data else None),
        readout=_parse_readout(data["readout"]) if "readout" in data else None,
        n_list=_parse_n_list(data["sweep"]) if "sweep" in data else (),
        sim=_parse_sim(data["readout_sim"]) if "readout_sim" in data else SimOptions(),
    )


def _need(cfg: RunConfig, attr: str, command: str):
    value = getattr(cfg, attr)
    if value is None:
        section = {"circuit": "circuit", "flux": "flux", "coherence": "coherence",
                   "readout": "readout"}[attr]
        raise ConfigError(f"command {command!r} requires a {section!r} config section")
    return value


# ---------------------------------------------------------------------------
# Output emission
# ---------------------------------------------------------------------------

def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def _emit(rows: list[dict], out: str | None, fmt: str) -> None:
    if fmt == "json":
        payload = [{k: _json_safe(v) for k, v in row.items()} for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    else:
        writer_rows = [list(rows[0].keys())] + [
            [_cell(v) for v in row.values()] for row in rows
        ]
        sio = io.StringIO()
        writer = csv.writer(sio, lineterminator="\n")
        writer.writerows(writer_rows)
        text = sio.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as f:
            f.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_energies(cfg: RunConfig, args) -> list[dict]:
    circuit = _need(cfg, "circuit", "energies")
    report = validate(circuit)
    if not report.ok:
        raise ParameterError("; ".join(report.violations))
    en = derive_energies(circuit)
    row = dataclasses.asdict(en)
    row["warnings"] = " | ".join(report.warnings)
    return [row]


def _parse_trunc(spec: str | None) -> Truncation:
    if spec is None:
        return Truncation()
    try:
        n_q, n_r = (int(part) for part in spec.lower().split("x"))
    except ValueError:
        raise ConfigError(f"--trunc must look like '12x12', got {spec!r}") from None
    return Truncation(n_q=n_q, n_r=n_r)


def _cmd_spectrum(cfg: RunConfig, args) -> list[dict]:
    circuit = _need(cfg, "circuit", "spectrum")
    en = derive_energies(circuit)
    ana = dressed_spectrum(en)
    num = numeric_spectrum(en, _parse_trunc(args.trunc))
    rows = []
    for name in ("omega_q_t", "omega_r_t", "alpha_q", "two_chi", "g_asymm",
                 "two_chi_total"):
        a = getattr(ana, name)
        n = getattr(num, name)
        rel = abs(n - a) / abs(a) if a != 0.0 else (0.0 if n == a else math.inf)
        rows.append({"quantity": name, "analytic": a, "numeric": n,
                     "rel_delta": rel})
    return rows


def _cmd_chi_sweep(cfg: RunConfig, args) -> list[dict]:
    circuit = _need(cfg, "circuit", "chi-sweep")
    flux_cfg = _need(cfg, "flux", "chi-sweep")
    coherence = _need(cfg, "coherence", "chi-sweep")
    if not cfg.n_list:
        raise ConfigError("command 'chi-sweep' requires sweep.n_list")
    rows = sweep(circuit, flux_cfg, list(cfg.n_list), coherence)
    return [dataclasses.asdict(r) for r in rows]


def _cmd_t1_model(cfg: RunConfig, args) -> list[dict]:
    circuit = _need(cfg, "circuit", "t1-model")
    flux_cfg = _need(cfg, "flux", "t1-model")
    coherence = _need(cfg, "coherence", "t1-model")
    if not cfg.n_list:
        raise ConfigError("command 't1-model' requires sweep.n_list")
    rows = []
    for n in cfg.n_list:
        try:
            point = evaluate_flux_point(circuit, flux_cfg, n, coherence)
        except Exception as exc:
            rows.append({"n": n, "omega_q_t": math.nan, "delta": math.nan,
                         "t1_diel": math.nan, "t1_asymm": math.nan,
                         "t1_model": math.nan, "t1_transmon_purcell": math.nan,
                         "error": f"{type(exc).__name__}: {exc}"})
            continue
        rows.append({
            "n": n,
            "omega_q_t": point.spectrum.omega_q_t,
            "delta": point.spectrum.delta,
            "t1_diel": point.coherence.t1_diel,
            "t1_asymm": point.coherence.t1_asymm,
            "t1_model": point.coherence.t1_model,
            "t1_transmon_purcell": point.coherence.t1_transmon_purcell,
            "error": None,
        })
    return rows


def _cmd_readout_sim(cfg: RunConfig, args) -> list[dict]:
    """Simulated shots (written next to --out) plus either the single-point
    fidelity report or, when readout_sim.tau_list is set, the per-tau error
    table."""
    p = _need(cfg, "readout", "readout-sim")
    n_shots = args.shots if args.shots is not None else cfg.sim.n_shots
    seed = args.seed if args.seed is not None else cfg.sim.seed
    shots0 = simulate_shots(p, 0, n_shots, seed)
    shots1 = simulate_shots(p, 1, n_shots, seed)
    if args.out is not None:
        out_dir = Path(args.out).parent
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.out).stem
        export_shots_csv(shots0, out_dir / f"{stem}_shots0.csv")
        export_shots_csv(shots1, out_dir / f"{stem}_shots1.csv")
    if cfg.sim.tau_list:
        rows = []
        for point in error_vs_integration(p, list(cfg.sim.tau_list), n_shots, seed):
            row = {"n_shots": n_shots, "seed": seed}
            row.update(dataclasses.asdict(point))
            rows.append(row)
        return rows
    fit = fit_double_gaussian(shots0, shots1)
    thr = threshold(fit)
    report = fidelity_report(shots0, shots1, fit, thr)
    row = {"n_shots": n_shots, "seed": seed, "tau": p.tau}
    row.update(dataclasses.asdict(fit))
    row.update(dataclasses.asdict(report))
    return [row]


def _cmd_readout_fit(cfg: RunConfig, args) -> list[dict]:
    if args.shots0 is None or args.shots1 is None:
        raise ConfigError("command 'readout-fit' requires --shots0 and --shots1")
    for path in (args.shots0, args.shots1):
        if not Path(path).is_file():
            raise ConfigError(f"shot file not found: {path}")
    shots0 = import_shots_csv(args.shots0)
    shots1 = import_shots_csv(args.shots1)
    fit = fit_double_gaussian(shots0, shots1)
    thr = threshold(fit)
    report = fidelity_report(shots0, shots1, fit, thr)
    row = {}
    row.update(dataclasses.asdict(fit))
    row.update(dataclasses.asdict(report))
    return [row]


def _cmd_phase(cfg: RunConfig, args) -> list[dict]:
    p = _need(cfg, "readout", "phase")
    sep = phase_separation(p.two_chi, p.kappa_ext, p.kappa_int)
    return [{"two_chi": p.two_chi, "kappa_ext": p.kappa_ext,
             "kappa_int": p.kappa_int, "separation_deg": sep}]


_COMMANDS = {
    "energies": _cmd_energies,
    "spectrum": _cmd_spectrum,
    "chi-sweep": _cmd_chi_sweep,
    "t1-model": _cmd_t1_model,
    "readout-sim": _cmd_readout_sim,
    "readout-fit": _cmd_readout_fit,
    "phase": _cmd_phase,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantromon",
        description="Spectrum, coherence, and readout pipelines for the "
                    "quantromon qubit-resonator circuit.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=False, help="JSON run configuration")
    parser.add_argument("--out", default=None, help="output file (stdout when omitted)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--seed", type=int, default=None, help="override readout_sim.seed")
    parser.add_argument("--trunc", default=None, help="Fock truncation as <nq>x<nr>")
    parser.add_argument("--shots", type=int, default=None, help="override readout_sim.n_shots")
    parser.add_argument("--shots0", default=None, help="state-0 shot CSV (readout-fit)")
    parser.add_argument("--shots1", default=None, help="state-1 shot CSV (readout-fit)")
    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap
        return 0 if exc.code == 0 else 1
    try:
        if args.command == "readout-fit" and args.config is None:
            cfg = RunConfig()
        else:
            if args.config is None:
                raise ConfigError(f"command {args.command!r} requires --config")
            cfg = load_config(args.config)
        rows = _COMMANDS[args.command](cfg, args)
        _emit(rows, args.out, args.format)
    except (ConfigError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
