"""Command-line front end writing reproducible CSV files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O error.
"""
from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .config import PARAM_KEYS, RunConfig, build_config, parse_grid, split_lines
from .errors import ConfigError, DomainError, NumericalError
from .fitting import FitResult, fit_exponential_convergence, fit_linear_slope, fit_linewidth
from .hamiltonian import assemble_with_spin_orbit
from .observables import (
    StrainTensorDiag,
    linewidth_model,
    temperature_grid,
    zfs_vs_temperature,
    zpl_strain_shift,
)
from .phonons import enumerate_basis
from .spectrum import diagonalize, polaronic_gap, polaronic_spectrum, so_doublet_structure

COMMANDS = (
    "spectrum",
    "zfs-curve",
    "linewidth-eval",
    "linewidth-fit",
    "strain-fit",
    "strain-shift",
    "soc-spectrum",
    "convergence-fit",
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(x)
    if isinstance(x, str):
        return x
    return format(float(x), ".9g")


def read_xy(path: str) -> np.ndarray:
    """Two-column CSV; ``#`` lines and a leading text header are skipped."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except (ValueError, IndexError):
                if rows:
                    raise ConfigError(f"{path}:{lineno}: expected two numeric columns") from None
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return np.array(rows)


def _spectrum_rows(cfg: RunConfig):
    spec = polaronic_spectrum(cfg.params, cfg.n_max, cfg.degeneracy_tol)
    meta = [("polaronic_gap_meV", fmt(polaronic_gap(spec)))]
    header = ["multiplet_id", "energy_meV", "multiplicity", "c_a1", "c_e_sum", "converged_flag"]
    rows = []
    for group in spec.multiplets():
        rows.append(
            [
                group[0].multiplet_id,
                float(np.mean([s.energy_rel for s in group])),
                len(group),
                float(np.mean([s.c_a1 for s in group])),
                float(np.mean([s.c_e for s in group])),
                all(s.converged for s in group),
            ]
        )
    return meta, header, rows


def _zfs_rows(cfg: RunConfig):
    spec = polaronic_spectrum(cfg.params, cfg.n_max, cfg.degeneracy_tol)
    curve = zfs_vs_temperature(
        spec, cfg.params, temperature_grid(*cfg.temperatures), cfg.energy_cutoff, cfg.offset_mhz
    )
    return [("offset_applied_MHz", fmt(curve.offset_applied))], ["T_K", "zfs_2D_MHz"], curve.points


def _delta_p(cfg: RunConfig) -> float:
    if cfg.params.delta_p is not None:
        return cfg.params.delta_p
    return polaronic_gap(polaronic_spectrum(cfg.params, cfg.n_max, cfg.degeneracy_tol))


def _linewidth_eval_rows(cfg: RunConfig):
    p = cfg.params
    if p.linewidth_a is None or p.gamma_1 is None:
        raise ConfigError("linewidth-eval needs linewidth_a and gamma_1")
    dp = _delta_p(cfg)
    t = temperature_grid(*cfg.temperatures)
    gamma = linewidth_model(t, p.linewidth_a, dp, p.gamma_r, p.gamma_1)
    return [("delta_p_meV", fmt(dp))], ["T_K", "linewidth_GHz"], list(zip(t, np.atleast_1d(gamma)))


def _fit_rows(fit: FitResult):
    if not fit.converged:
        raise NumericalError(f"fit did not converge: {fit.message}")
    meta = [
        ("residual_rms", fmt(fit.residual_rms)),
        ("n_points", str(fit.n_points)),
        ("converged", str(fit.converged)),
        ("iterations", str(fit.iterations)),
        ("message", fit.message),
    ]
    rows = [[k, v, fit.std_errors[k], fit.units[k]] for k, v in fit.params.items()]
    return meta, ["parameter", "value", "std_error", "unit"], rows


def _require_data(cfg: RunConfig) -> np.ndarray:
    if not cfg.data:
        raise ConfigError("this command needs --data FILE")
    return read_xy(cfg.data)


def _soc_rows(cfg: RunConfig):
    if cfg.params.lambda_par == 0:
        raise ConfigError("soc-spectrum needs a non-zero lambda_par")
    h = assemble_with_spin_orbit(cfg.params, enumerate_basis(cfg.n_max))
    branches = so_doublet_structure(h, diagonalize(h))
    cutoff = cfg.energy_cutoff
    if cutoff is None:
        cutoff = cfg.n_max * cfg.params.hbar_omega / 2.0
    header = ["branch_id", "doublet_index", "energy_meV", "abs_ms", "branch_delta_GHz", "branch_d_so_MHz"]
    rows = []
    for b in branches:
        if b.energy > cutoff:
            break
        for k, (e, ms) in enumerate(zip(b.doublet_energies, b.abs_ms)):
            rows.append([b.branch_id, k, float(e), float(ms), b.delta_ghz, b.d_so_mhz])
    return [], header, rows


def _strain_shift_rows(cfg: RunConfig):
    strain = StrainTensorDiag(*cfg.strain)
    shift = zpl_strain_shift(cfg.params.strain_coeffs, strain)
    return [], ["eps_xx", "eps_yy", "eps_zz", "shift_meV"], [[*cfg.strain, shift]]


def compute(cfg: RunConfig, command: str):
    """Return ``(metadata, header, rows)`` for one subcommand."""
    if command == "spectrum":
        return _spectrum_rows(cfg)
    if command == "zfs-curve":
        return _zfs_rows(cfg)
    if command == "linewidth-eval":
        return _linewidth_eval_rows(cfg)
    if command == "linewidth-fit":
        data = _require_data(cfg)
        return _fit_rows(fit_linewidth(data, _delta_p(cfg), cfg.params.gamma_r))
    if command == "strain-fit":
        return _fit_rows(fit_linear_slope(_require_data(cfg)))
    if command == "strain-shift":
        return _strain_shift_rows(cfg)
    if command == "soc-spectrum":
        return _soc_rows(cfg)
    if command == "convergence-fit":
        return _fit_rows(fit_exponential_convergence(_require_data(cfg)))
    raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")


def render(cfg: RunConfig, command: str, meta, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# sivpolaron {__version__} {command}\n")
    buf.write("# resolved configuration (feed this file back with --config to reproduce):\n")
    for key, value in cfg.resolved_items():
        buf.write(f"#= {key} = {value}\n")
    for key, value in meta:
        buf.write(f"# {key}: {value}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sivpolaron-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def run_subcommand(config: RunConfig, command: str, stdout=None) -> int:
    """Run one subcommand and write its CSV; return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    try:
        meta, header, rows = compute(config, command)
        text = render(config, command, meta, header, rows)
        if config.output:
            write_atomic(config.output, text)
        else:
            stdout.write(text)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--center", help="preset name (V1, V2) or 'none'")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--n-max", help="phonon truncation order (default 8)")
    common.add_argument("--t", dest="temperatures", metavar="START:STOP:STEP", help="temperature grid in K")
    common.add_argument("--out", dest="output", help="output CSV path (default stdout)")
    common.add_argument("--offset-mhz", help="constant added to the 2D(T) curve")
    common.add_argument("--cutoff-mev", dest="energy_cutoff", help="Boltzmann-sum energy cutoff")
    common.add_argument("--data", help="two-column CSV input for fits")
    common.add_argument("--strain", metavar="EXX,EYY,EZZ", help="normal strain components")

    parser = argparse.ArgumentParser(prog="sivpolaron", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args) -> RunConfig:
    entries = []
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            entries = split_lines(fh.read())
    flags = {
        "center": args.center,
        "n_max": args.n_max,
        "temperatures": args.temperatures,
        "output": args.output,
        "offset_mhz": args.offset_mhz,
        "energy_cutoff": args.energy_cutoff,
        "data": args.data,
        "strain": args.strain,
    }
    if args.temperatures is not None:
        parse_grid(args.temperatures)
    entries += [(None, k, v) for k, v in flags.items() if v is not None]
    # a preset chosen on the command line replaces parameters inherited from the file
    if args.center is not None:
        entries = [e for e in entries if e[1] not in PARAM_KEYS + ("label",) or e[0] is None]
    cfg = build_config(entries)
    if cfg.data and not os.path.exists(cfg.data):
        raise FileNotFoundError(f"data file not found: {cfg.data}")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return run_subcommand(cfg, args.command)


if __name__ == "__main__":
    sys.exit(main())
