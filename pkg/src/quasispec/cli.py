"""Command-line entry point: reproducible experiments with CSV/JSON artifacts.

Subcommands: dos, decay, average, tensor-check, report. All numeric output
uses shortest round-trip float formatting, UTF-8, LF line endings, mandatory
CSV headers; identical configurations produce byte-identical artifacts on
one platform.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(eigensolver, size cap, light cone), 4 input/output failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import decay_pipeline, l2_growth_diagnostic, min_power_for_l2
from .dynamics import AmplitudeSeries, StateVector, escape_block_maxima, phase_averaged_amplitude
from .exceptions import CapExceededError, ConfigError, NumericalError, OutputError
from .kernels import bessel_sum_eval, truncation_order
from .measures import FourierTrace
from .operator import ModelParams, phase_partition
from .spectral import density_of_states, dos_fourier_trace, dos_moments, tensor_spectral_check

THREADS_ENV_VAR = "QUASISPEC_THREADS"

# cmd_dos materializes atoms only below this (matrix dim x interval count)
DOS_MATERIALIZE_CAP = 2_000_000

TENSOR_CHECK_TOL = 1e-9

TENSOR_RANDOM_CASES = 20


@dataclass(frozen=True)
class RunConfig:
    """One reproducible run: everything that determines the artifacts."""

    subcommand: str
    coupling: float
    half_width: int
    phase: float
    t_max: float | None
    xi_max: float
    xi_points: int
    t_points: int
    blocks_per_decade: int
    bin_width: float | None
    psi: str
    phi: str
    out: str
    format: str
    threads: int
    seed: int

    def params(self) -> ModelParams:
        return ModelParams(
            coupling=self.coupling, half_width=self.half_width, phase=self.phase
        )


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _write_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _measure_csv(m) -> str:
    lines = ["position,weight"]
    lines += [f"{_fmt(p)},{_fmt(w)}" for p, w in zip(m.positions, m.weights)]
    return "\n".join(lines) + "\n"


def _trace_csv(tr: FourierTrace) -> str:
    lines = ["xi,re,im,abs"]
    lines += [
        f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v))}"
        for x, v in zip(tr.xi_grid, tr.values)
    ]
    return "\n".join(lines) + "\n"


def _amplitude_csv(series: AmplitudeSeries) -> str:
    lines = ["t,re,im,abs"]
    lines += [
        f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v))}"
        for t, v in zip(series.t_grid, series.values)
    ]
    return "\n".join(lines) + "\n"


def parse_state(spec: str) -> dict[int, complex]:
    """Parse 'site:amplitude,...' or '@file.json' into a site dict.

    Amplitudes use Python complex syntax ('1', '0.5+0.5j'); the JSON form
    maps site strings to [re, im] pairs.
    """
    if spec.startswith("@"):
        path = Path(spec[1:])
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as err:
            raise OutputError(f"cannot read state file {path}: {err}") from err
        except json.JSONDecodeError as err:
            raise ConfigError(f"state file {path} is not valid JSON: {err}") from err
        out: dict[int, complex] = {}
        if not isinstance(raw, dict):
            raise ConfigError(f"state file {path} must hold an object of site: [re, im]")
        for key, val in raw.items():
            try:
                site = int(key)
                re_part, im_part = float(val[0]), float(val[1])
            except (ValueError, TypeError, IndexError) as err:
                raise ConfigError(f"bad state entry {key!r}: {val!r} in {path}") from err
            out[site] = complex(re_part, im_part)
        if not out:
            raise ConfigError(f"state file {path} holds no sites")
        return out
    out = {}
    for item in spec.split(","):
        if ":" not in item:
            raise ConfigError(f"bad state entry {item!r}: expected site:amplitude")
        site_str, amp_str = item.split(":", 1)
        try:
            site = int(site_str)
            amp = complex(amp_str)
        except ValueError as err:
            raise ConfigError(f"bad state entry {item!r}: {err}") from err
        out[site] = amp
    return out


def _outdir(config: RunConfig) -> Path:
    path = Path(config.out)
    if not path.is_dir():
        raise OutputError(f"output directory does not exist: {path}")
    return path


def _fit_payload(fit) -> dict:
    return {
        "epsilon": fit.epsilon,
        "intercept": fit.intercept,
        "stderr": fit.stderr,
        "window": [fit.fit_window[0], fit.fit_window[1]],
    }


def cmd_dos(config: RunConfig) -> int:
    out = _outdir(config)
    params = config.params()
    part = phase_partition(params)
    load = params.dim * len(part)
    if load > DOS_MATERIALIZE_CAP:
        raise CapExceededError(
            f"materializing {len(part)} intervals x {params.dim} atoms exceeds "
            f"the cap ({DOS_MATERIALIZE_CAP}); use 'decay' or 'report' at this size"
        )
    dos = density_of_states(params, threads=config.threads)
    summary = {
        "mass": dos.total_mass,
        "atom_count": len(dos),
        "breakpoint_count": len(part),
        "dropped_mass": dos.dropped_mass,
    }
    if config.format == "json":
        _write_json(out / "dos.json", {"summary": summary, "atoms": [[p, w] for p, w in dos.atoms]})
    else:
        _write_text(out / "dos.csv", _measure_csv(dos))
        _write_json(out / "dos_summary.json", summary)
    return 0


def _xi_grid(config: RunConfig) -> np.ndarray:
    if config.xi_points < 2:
        raise ConfigError("grid too short: need at least 2 frequency points")
    if config.xi_max <= 0.0:
        raise ConfigError(f"xi_max must be positive, got {config.xi_max}")
    return np.linspace(0.0, config.xi_max, config.xi_points)


def cmd_decay(config: RunConfig) -> int:
    out = _outdir(config)
    params = config.params()
    xi = _xi_grid(config)
    trace = dos_fourier_trace(params, xi)
    fit = decay_pipeline(trace, blocks_per_decade=config.blocks_per_decade)
    if config.format == "json":
        _write_json(out / "decay.json", {
            "fit": _fit_payload(fit),
            "trace": {
                "xi": trace.xi_grid.tolist(),
                "re": trace.values.real.tolist(),
                "im": trace.values.imag.tolist(),
                "abs": np.abs(trace.values).tolist(),
            },
        })
    else:
        _write_text(out / "trace.csv", _trace_csv(trace))
        _write_json(out / "fit.json", _fit_payload(fit))
    return 0


def cmd_average(config: RunConfig) -> int:
    out = _outdir(config)
    params = config.params()
    if config.t_points < 2:
        raise ConfigError("grid too short: need at least 2 time points")
    t_max = config.t_max if config.t_max is not None else 100.0
    if t_max <= 0.0:
        raise ConfigError(f"t_max must be positive, got {t_max}")
    # linear grid including t=0, where A(0) = <psi, phi>
    t = np.linspace(0.0, t_max, config.t_points)
    psi = StateVector.from_sites(parse_state(config.psi), params.half_width)
    phi = StateVector.from_sites(parse_state(config.phi), params.half_width)
    series = phase_averaged_amplitude(psi, phi, t, params)
    if config.format == "json":
        _write_json(out / "average.json", {
            "t": series.t_grid.tolist(),
            "re": series.values.real.tolist(),
            "im": series.values.imag.tolist(),
            "abs": np.abs(series.values).tolist(),
        })
    else:
        _write_text(out / "amplitude.csv", _amplitude_csv(series))
    return 0


def _random_tensor_case(rng: np.random.Generator, bin_width: float | None) -> dict:
    n_factors = int(rng.integers(1, 4))
    dims = [int(rng.integers(2, 9)) for _ in range(n_factors)]
    factors, states = [], []
    for d in dims:
        raw = rng.standard_normal((d, d))
        factors.append((raw + raw.T) / 2.0)
        vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        states.append(vec / np.linalg.norm(vec))
    disc = tensor_spectral_check(factors, states, bin_width=bin_width)
    return {"kind": "random", "dims": dims, "discrepancy": disc}


def cmd_tensor_check(config: RunConfig) -> int:
    out = _outdir(config)
    free2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    delta = np.array([1.0, 0.0])
    cases = [
        {
            "kind": "single-factor",
            "dims": [2],
            "discrepancy": tensor_spectral_check([free2], [delta]),
        },
        {
            "kind": "free-pair",
            "dims": [2, 2],
            "discrepancy": tensor_spectral_check([free2, free2], [delta, delta]),
        },
    ]
    rng = np.random.default_rng(config.seed)
    for _ in range(TENSOR_RANDOM_CASES):
        cases.append(_random_tensor_case(rng, config.bin_width))
    worst = max(c["discrepancy"] for c in cases)
    payload = {
        "cases": cases,
        "max_discrepancy": worst,
        "tolerance": TENSOR_CHECK_TOL,
        "pass": bool(worst <= TENSOR_CHECK_TOL),
    }
    _write_json(out / "tensor_check.json", payload)
    return 0 if payload["pass"] else 3


def _report_t_max(config: RunConfig) -> float:
    if config.t_max is not None:
        return config.t_max
    # largest power of 2 inside the round-trip light cone 2L >= 2t + 50
    ceiling = config.half_width - 25
    if ceiling < 8:
        raise ConfigError(f"half_width {config.half_width} too small for an escape profile")
    return float(2 ** int(np.floor(np.log2(ceiling))))


def cmd_report(config: RunConfig) -> int:
    out = _outdir(config)
    params = config.params()
    xi = _xi_grid(config)
    t_max = _report_t_max(config)
    if config.t_points < 2:
        raise ConfigError("grid too short: need at least 2 time points")
    t = np.geomspace(1.0, t_max, config.t_points)
    a = 2.0 + params.coupling
    order = truncation_order(a * max(config.xi_max, t_max))
    moments = dos_moments(params, order)
    trace = dos_fourier_trace(params, xi, moments=moments)
    fit = decay_pipeline(trace, blocks_per_decade=config.blocks_per_decade)
    n_power = min_power_for_l2(fit.epsilon)
    cutoffs = [config.xi_max / 4.0, config.xi_max / 2.0, config.xi_max]
    integrals = l2_growth_diagnostic(trace, n_power, cutoffs)
    # psi = phi = delta_0: the averaged amplitude is the trace at t
    series = AmplitudeSeries(t, bessel_sum_eval(moments, a, t))
    j_hi = int(np.floor(np.log2(t_max))) - 1
    blocks = escape_block_maxima(series, 2, j_hi)
    part = phase_partition(params)
    load = params.dim * len(part)
    if load <= DOS_MATERIALIZE_CAP:
        dos = density_of_states(params, threads=config.threads)
        dos_section = {
            "mode": "materialized",
            "mass": dos.total_mass,
            "atom_count": len(dos),
            "breakpoint_count": len(part),
        }
    else:
        dos = None
        dos_section = {
            "mode": "trace",
            "mass": float(np.sum(part.lengths)),
            "atom_count": None,
            "breakpoint_count": len(part),
        }
    report = {
        "params": {
            "coupling": params.coupling,
            "half_width": params.half_width,
            "phase": params.phase,
            "alpha": params.alpha,
        },
        "dos": dos_section,
        "decay_fit": _fit_payload(fit),
        "min_power_for_l2": n_power,
        "l2_diagnostic": {
            "power": n_power,
            "cutoffs": cutoffs,
            "integrals": integrals,
            "final_ratio": integrals[-1] / integrals[-2],
        },
        "escape": {
            "t_max": t_max,
            "blocks": [{"j": j, "max_abs": v} for j, v in blocks],
        },
    }
    _write_json(out / "report.json", report)
    if config.format == "csv":
        _write_text(out / "trace.csv", _trace_csv(trace))
        _write_text(out / "amplitude.csv", _amplitude_csv(series))
        _write_text(out / "escape_blocks.csv", "\n".join(
            ["j,max_abs"] + [f"{j},{_fmt(v)}" for j, v in blocks]) + "\n")
        _write_text(out / "l2.csv", "\n".join(
            ["cutoff,integral"]
            + [f"{_fmt(c)},{_fmt(v)}" for c, v in zip(cutoffs, integrals)]) + "\n")
        if dos is not None:
            _write_text(out / "dos.csv", _measure_csv(dos))
    return 0


_COMMANDS = {
    "dos": cmd_dos,
    "decay": cmd_decay,
    "average": cmd_average,
    "tensor-check": cmd_tensor_check,
    "report": cmd_report,
}


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasispec",
        description="Spectral measures and phase-averaged dynamics of the "
        "Fibonacci Hamiltonian",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--coupling", type=float, default=0.5, help="potential strength V")
        p.add_argument("--half-width", type=int, default=200, help="lattice window [-L, L]")
        p.add_argument("--phase", type=float, default=0.0, help="torus phase in [0, 1)")
        p.add_argument("--out", default=".", help="existing output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default: ${THREADS_ENV_VAR} or 1)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    def frequency(p: argparse.ArgumentParser) -> None:
        p.add_argument("--xi-max", type=float, default=1000.0, help="largest frequency")
        p.add_argument("--xi-points", type=int, default=20001, help="frequency samples")
        p.add_argument("--blocks-per-decade", type=int, default=8)

    p_dos = sub.add_parser("dos", help="density of states atoms and summary")
    common(p_dos)

    p_decay = sub.add_parser("decay", help="Fourier trace of the DOS and decay fit")
    common(p_decay)
    frequency(p_decay)

    p_avg = sub.add_parser("average", help="phase-averaged transition amplitudes")
    common(p_avg)
    p_avg.add_argument("--t-max", type=float, default=100.0, help="largest time")
    p_avg.add_argument("--t-points", type=int, default=1001, help="time samples (linear grid)")
    p_avg.add_argument("--psi", default="0:1", help="state: 'site:amp,...' or @file.json")
    p_avg.add_argument("--phi", default="0:1", help="state: 'site:amp,...' or @file.json")

    p_tensor = sub.add_parser("tensor-check", help="tensor vs convolution identity battery")
    common(p_tensor)
    p_tensor.add_argument("--bin-width", type=float, default=None,
                          help="use binned convolution with this width (default: exact)")

    p_report = sub.add_parser("report", help="bundled decay / L2 / escape report")
    common(p_report)
    frequency(p_report)
    p_report.add_argument("--t-max", type=float, default=None,
                          help="escape profile horizon (default: from half-width)")
    p_report.add_argument("--t-points", type=int, default=4097,
                          help="time samples (log grid)")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    threads = args.threads if args.threads is not None else _default_threads()
    if threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    return RunConfig(
        subcommand=args.subcommand,
        coupling=args.coupling,
        half_width=args.half_width,
        phase=args.phase,
        t_max=getattr(args, "t_max", None),
        xi_max=getattr(args, "xi_max", 1000.0),
        xi_points=getattr(args, "xi_points", 20001),
        t_points=getattr(args, "t_points", 1001),
        blocks_per_decade=getattr(args, "blocks_per_decade", 8),
        bin_width=getattr(args, "bin_width", None),
        psi=getattr(args, "psi", "0:1"),
        phi=getattr(args, "phi", "0:1"),
        out=args.out,
        format=args.format,
        threads=threads,
        seed=args.seed,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.subcommand](config)
    except ConfigError as err:
        print(f"quasispec: configuration error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        print(f"quasispec: numerical failure: {err}", file=sys.stderr)
        return 3
    except OutputError as err:
        print(f"quasispec: output error: {err}", file=sys.stderr)
        return 4
    except OSError as err:
        print(f"quasispec: i/o error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
