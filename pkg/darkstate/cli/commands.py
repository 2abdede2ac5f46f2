"""
One function per subcommand: RunConfig in, files and a summary out.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from darkstate.cli.output import write_json, write_table
from darkstate.errors import DomainError
from darkstate.ladder import (
    LEG_NAMES,
    band_sweep,
    critical_gamma,
    numeric_edge_states,
    phase_scan,
    spectrum_report,
    transition_gamma,
)
from darkstate.lambda_system import (
    bloch_trajectory,
    compensate,
    compensated_field,
    dark_bright,
    dark_energy,
    verify_dark,
)
from darkstate.manybody import build_manybody, ground_manifold, verify_cdw
from darkstate.models.config import RunConfig, grid
from darkstate.models.params import ComplexField, RabiPair


@dataclass
class CommandResult:
    files: List[Path] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    stdout: Optional[Dict[str, Any]] = None


def _rabi(cfg: RunConfig) -> RabiPair:
    section = cfg.lambda_
    if section.omega1 is not None:
        return RabiPair(omega1=section.omega1, omega2=section.omega2)
    theta = np.pi / 2 if section.theta is None else section.theta
    try:
        return RabiPair.from_theta(theta)
    except ValueError as e:
        raise DomainError(str(e))


# ------------------------------------------------------------------
# Lambda system
# ------------------------------------------------------------------

def cmd_compensate(cfg: RunConfig) -> CommandResult:
    rabi = _rabi(cfg)
    b_real = np.asarray(cfg.lambda_.b_real, dtype=float)

    b_imag = compensate(b_real, rabi.theta)
    residual, _ = verify_dark(rabi, compensated_field(b_real, rabi.theta))

    record = {
        "theta": rabi.theta,
        "B_R": b_real,
        "B_I": b_imag,
        "lambda_D": dark_energy(b_real, rabi.theta),
        "residual": residual,
        "tol": cfg.tolerance,
    }
    return CommandResult(summary=record, stdout=record)


def _initial_state(cfg: RunConfig, rabi: RabiPair) -> np.ndarray:
    _, dark, bright = dark_bright(rabi)
    states = {
        "dark": np.append(dark, 0.0),
        "bright": np.append(bright, 0.0),
        "up": np.array([1.0, 0.0, 0.0]),
        "down": np.array([0.0, 1.0, 0.0]),
        "excited": np.array([0.0, 0.0, 1.0]),
    }
    return states[cfg.lambda_.initial].astype(complex)


def cmd_lambda_evolve(cfg: RunConfig) -> CommandResult:
    section = cfg.lambda_
    rabi = _rabi(cfg)
    if section.compensate:
        fld = compensated_field(section.b_real, rabi.theta)
    else:
        fld = ComplexField(b_real=section.b_real, b_imag=section.b_imag)

    t_grid = np.linspace(0.0, section.t_max, section.n_t)
    points = bloch_trajectory(rabi, fld, _initial_state(cfg, rabi), t_grid)

    rows = [(pt.t, *pt.bloch, pt.dark_fidelity) for pt in points]
    fidelity = np.array([pt.dark_fidelity for pt in points])

    files = [
        write_table(cfg.output_dir, "evolve", ("t", "sx", "sy", "sz", "dark_fidelity"), rows, cfg.format),
    ]
    summary = {
        "theta": rabi.theta,
        "field": fld.vector,
        "min_dark_fidelity": float(fidelity.min()),
        "max_dark_fidelity": float(fidelity.max()),
        "tol": cfg.tolerance,
    }
    files.append(write_json(cfg.output_dir / "evolve_summary.json", summary))
    return CommandResult(files=files, summary=summary)


# ------------------------------------------------------------------
# Ladder
# ------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> CommandResult:
    spectrum = spectrum_report(cfg.ladder, cfg.tolerance)
    E = spectrum.eigenvalues
    rows = [(i, e.real, e.imag) for i, e in enumerate(E)]

    files = [write_table(cfg.output_dir, "spectrum", ("index", "re_E", "im_E"), rows, cfg.format)]
    summary = {
        "ladder": cfg.ladder.model_dump(),
        "dim": spectrum.dim,
        "max_imag": spectrum.max_imag,
        "n_defective": int(np.count_nonzero(spectrum.defect_flags)),
        "max_residual": float(spectrum.residuals.max()),
        "tol": cfg.tolerance,
    }
    files.append(write_json(cfg.output_dir / "spectrum_summary.json", summary))
    return CommandResult(files=files, summary=summary)


def cmd_bands(cfg: RunConfig) -> CommandResult:
    sweep = band_sweep(cfg.ladder, cfg.bands.n_k, cfg.tolerance)
    rows = [
        (k, band, e.real, e.imag)
        for k, energies in zip(sweep.k_grid, sweep.bands)
        for band, e in enumerate(energies)
    ]

    files = [write_table(cfg.output_dir, "bands", ("k", "band", "re_E", "im_E"), rows, cfg.format)]
    summary = {
        "ladder": cfg.ladder.model_dump(),
        "n_k": cfg.bands.n_k,
        "flatness_re": sweep.flatness[:, 0],
        "flatness_im": sweep.flatness[:, 1],
        "tol": cfg.tolerance,
    }
    files.append(write_json(cfg.output_dir / "bands_summary.json", summary))
    return CommandResult(files=files, summary=summary)


def cmd_edges(cfg: RunConfig) -> CommandResult:
    p = cfg.ladder
    report = numeric_edge_states(p, cfg.edges.e_window, cfg.tolerance)

    files = []
    for i, state in enumerate(report.states):
        rows = [
            (n, LEG_NAMES[leg], a.real, a.imag, abs(a) ** 2)
            for n in range(p.L)
            for leg in (0, 1)
            for a in [state.vector[2 * n + leg]]
        ]
        files.append(
            write_table(cfg.output_dir, f"edges_{i}", ("n", "leg", "re_psi", "im_psi", "abs2"), rows, cfg.format)
        )

    summary = {
        "ladder": p.model_dump(),
        "energies": [s.energy for s in report.states],
        "sides": [s.side for s in report.states],
        "support_sizes": [s.support_size for s in report.states],
        "kappas": [s.kappa for s in report.states],
        "fitted_kappa": report.fitted_kappa,
        "fitted_sigma": report.fitted_sigma,
        "predicted_sigma": report.predicted_sigma,
        "e_window": report.e_window,
        "tol": cfg.tolerance,
    }
    files.append(write_json(cfg.output_dir / "edges.json", summary))
    return CommandResult(files=files, summary=summary)


def cmd_scan(cfg: RunConfig) -> CommandResult:
    p, s = cfg.ladder, cfg.scan
    gammas = grid(s.gamma_min, s.gamma_max, s.gamma_step)
    omega_ys = grid(s.omega_y_min, s.omega_y_max, s.omega_y_step)

    scan = phase_scan(
        p.t, p.omega_x, p.L, gammas, omega_ys,
        tol_edge=s.tol_edge, n_jobs=s.n_jobs, tol=cfg.tolerance,
    )
    points = list(scan.values())
    rows = [(pt.gamma, pt.omega_y, pt.n_edge_states, pt.max_bulk_im) for pt in points]

    files = [write_table(cfg.output_dir, "scan", ("gamma", "omega_y", "n_edge", "max_im"), rows, cfg.format)]
    summary = {
        "t": p.t,
        "omega_x": p.omega_x,
        "L": p.L,
        "winding": [pt.winding for pt in points],
        "spectral_real": [pt.spectral_real for pt in points],
        "transitions": [
            {
                "omega_y": oy,
                "critical_gamma": critical_gamma(oy, p.t),
                "winding_threshold": transition_gamma(scan, oy, "winding"),
                "zero_mode_threshold": transition_gamma(scan, oy, "zero_modes"),
            }
            for oy in omega_ys
        ],
        "tol_edge": s.tol_edge,
        "tol": cfg.tolerance,
    }
    files.append(write_json(cfg.output_dir / "scan_summary.json", summary))
    return CommandResult(files=files, summary=summary)


# ------------------------------------------------------------------
# Many-body
# ------------------------------------------------------------------

def _cdw_applicable(cfg: RunConfig) -> bool:
    p = cfg.ladder
    return p.is_flat_band and p.boundary == "periodic" and p.L % 4 == 0


def cmd_manybody(cfg: RunConfig) -> CommandResult:
    p, mb = cfg.ladder, cfg.manybody
    n_particles = p.L // 4 if mb.n_particles is None else mb.n_particles

    op = build_manybody(p, mb.u, n_particles, mb.cap, mb.basis_limit)
    ground = ground_manifold(op, min(mb.k, op.dim), cfg.tolerance)

    cdw = None
    if _cdw_applicable(cfg) and n_particles == p.L // 4 and mb.cap is None:
        cdw = verify_cdw(p, mb.u, cfg.tolerance).to_dict()

    summary = {
        "ladder": p.model_dump(),
        "U": mb.u,
        "n_particles": n_particles,
        "basis_size": op.dim,
        "ground_energies": list(ground.energies),
        "ground_degeneracy": ground.degeneracy,
        "cdw": cdw,
        "tol": cfg.tolerance,
        "seed": cfg.seed,
    }
    files = [write_json(cfg.output_dir / "manybody.json", summary)]
    return CommandResult(files=files, summary=summary)


COMMANDS = {
    "compensate": cmd_compensate,
    "lambda-evolve": cmd_lambda_evolve,
    "spectrum": cmd_spectrum,
    "bands": cmd_bands,
    "edges": cmd_edges,
    "scan": cmd_scan,
    "manybody": cmd_manybody,
}
