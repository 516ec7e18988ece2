"""Command-line front end.

Every run writes CSV files plus a ``manifest.json`` into the output
directory.  The manifest records the full parameter set and a sha256 over
it; each CSV repeats that hash in its first line, so a result file can
always be traced back to the exact run that produced it.  Energies in the
CSVs are given in units of J.

Exit codes: 0 success, 2 invalid parameters or config, 3 solver did not
converge or grid too coarse, 4 topological obstruction (gap closing,
degenerate link), 5 input/output failure.
"""

import argparse
import hashlib
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .config import COMMANDS, build_run, parse_angle, parse_config
from .deform import gap_trace
from .effective import compare_bound_band, presentation_shift
from .errors import (ConvergenceError, GapClosingError,
                     TopologicalObstructionError, ValidationError)
from .spectra import bound_band, butterfly, delta_sweep, find_edge_states
from . import __version__

__all__ = ["main", "run"]


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _manifest(cfg):
    core = {
        "version": __version__,
        "command": cfg.command,
        "params": asdict(cfg.params),
        "N_delta": cfg.n_delta,
        "n_eta": cfg.n_eta,
        "max_q": cfg.max_q,
        "edge_window": cfg.edge_window,
        "threshold": cfg.threshold,
        "gap_floor": cfg.gap_floor,
        "long_run": cfg.long_run,
    }
    digest = hashlib.sha256(
        json.dumps(core, sort_keys=True).encode()).hexdigest()
    core["manifest"] = digest
    return core, digest


class _Writer:
    """Collects output files so a failed run leaves no partial results."""

    def __init__(self, outdir, digest):
        self.outdir = Path(outdir)
        self.digest = digest
        self.written = []

    def csv(self, name, columns, rows, comments=()):
        lines = [f"# manifest={self.digest}"]
        lines.extend(f"# {c}" for c in comments)
        lines.append(",".join(columns))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        path = self.outdir / name
        path.write_text("\n".join(lines) + "\n")
        self.written.append(path)
        return path

    def json(self, name, payload):
        path = self.outdir / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        self.written.append(path)
        return path

    def cleanup(self):
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass


def _run_spectrum(cfg, writer, manifest):
    band = bound_band(cfg.params, gap_floor=cfg.gap_floor)
    J = cfg.params.J
    rows = [(a + 1, float(k), n + 1, band.energies[a, n] / J)
            for a, k in enumerate(band.k_grid)
            for n in range(band.energies.shape[1])]
    manifest["continuum_gap"] = band.continuum_gap / J
    writer.csv("spectrum.csv", ("k_index", "k", "band", "energy"), rows)


def _run_chern(cfg, writer, manifest):
    from .chern import chern_numbers
    solver = "lowest" if (cfg.long_run and cfg.params.beta_q >= 7) else None
    result = chern_numbers(cfg.params, n_delta=cfg.n_delta, solver=solver)
    rows = [(n + 1, c) for n, c in enumerate(result.cherns)]
    manifest["max_residual"] = float(result.residuals.max())
    writer.csv("chern.csv", ("band", "chern"), rows)


def _run_table1(cfg, writer, manifest):
    from .chern import chern_table
    q_list = (3, 5, 7, 9) if cfg.long_run else (3, 5)
    table = chern_table(cfg.params, q_list=q_list, n_delta=cfg.n_delta)
    rows = []
    for entry in table:
        for n, c in enumerate(entry["cherns"]):
            rows.append((entry["beta_p"], entry["beta_q"], entry["L"],
                         n + 1, c, entry["converged"]))
    manifest["q_list"] = list(q_list)
    writer.csv("table1.csv",
               ("beta_p", "beta_q", "L", "band", "chern", "converged"), rows)


def _run_butterfly(cfg, writer, manifest):
    data = butterfly(cfg.params, max_q=cfg.max_q, gap_floor=cfg.gap_floor)
    J = cfg.params.J
    shift = (cfg.params.Delta + 2.0 * cfg.params.J ** 2 / cfg.params.Delta) / J
    rows = [(p, q, e / J) for p, q, energies in data for e in energies]
    manifest["energy_shift"] = shift
    writer.csv("butterfly.csv", ("beta_p", "beta_q", "energy_shifted"), rows,
               comments=[f"energy_shift={_fmt(shift)}"])


def _run_edges(cfg, writer, manifest):
    states = find_edge_states(cfg.params, edge_window=cfg.edge_window,
                              threshold=cfg.threshold, gap_floor=cfg.gap_floor)
    J = cfg.params.J
    rows = [(s.energy / J, s.side, s.localization) for s in states]
    manifest["n_edge_states"] = len(states)
    writer.csv("edges.csv", ("energy", "side", "localization"), rows)


def _run_effective(cfg, writer, manifest):
    comp = compare_bound_band(cfg.params)
    J = cfg.params.J
    shift = presentation_shift(cfg.params)
    rows = [(i + 1, comp.exact[i] / J + shift, comp.effective[i] / J + shift,
             comp.deviations[i] / J)
            for i in range(len(comp.exact))]
    manifest["max_abs_deviation"] = comp.max_abs_deviation / J
    manifest["energy_shift"] = shift
    writer.csv("effective.csv",
               ("state_index", "energy_exact", "energy_effective", "deviation"),
               rows, comments=[f"energy_shift={_fmt(shift)}"])


def _run_deform(cfg, writer, manifest):
    trace = gap_trace(cfg.params, n_eta=cfg.n_eta, n_delta=cfg.n_delta)
    start = trace.gaps[0]
    for n in range(trace.gaps.shape[1]):
        floor = 0.1 * start[n]
        worst = trace.gaps[:, n].min()
        if worst < floor:
            raise GapClosingError(
                f"subband gap {n + 1}/{n + 2} shrinks to {worst:.3g} "
                f"(below 10% of its eta=0 value {start[n]:.3g})",
                where=(n + 1,))
    J = cfg.params.J
    columns = ["eta"] + [f"gap_{n + 1}_{n + 2}"
                         for n in range(trace.gaps.shape[1])]
    rows = [(trace.eta_grid[i], *(trace.gaps[i] / J))
            for i in range(len(trace.eta_grid))]
    manifest["min_gap"] = trace.min_gap / J
    writer.csv("gaps.csv", tuple(columns), rows)


def _run_dsweep(cfg, writer, manifest):
    deltas, energies = delta_sweep(cfg.params, n_delta=cfg.n_delta)
    J = cfg.params.J
    rows = [(float(d), i + 1, energies[j, i] / J)
            for j, d in enumerate(deltas)
            for i in range(energies.shape[1])]
    manifest["n_states"] = int(energies.shape[1])
    writer.csv("dsweep.csv", ("delta", "state_index", "energy"), rows)


_RUNNERS = {
    "spectrum": _run_spectrum,
    "chern": _run_chern,
    "table1": _run_table1,
    "butterfly": _run_butterfly,
    "edges": _run_edges,
    "effective": _run_effective,
    "deform": _run_deform,
    "dsweep": _run_dsweep,
}


def run(cfg):
    """Execute one configured command, writing outputs to cfg.output_dir."""
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest, digest = _manifest(cfg)
    writer = _Writer(outdir, digest)
    try:
        _RUNNERS[cfg.command](cfg, writer, manifest)
        writer.json("manifest.json", manifest)
    except BaseException:
        writer.cleanup()
        raise
    return 0


def _build_parser():
    p = argparse.ArgumentParser(
        prog="magnonchain",
        description="Two-magnon band structure and topology of a modulated "
                    "XXZ chain")
    p.add_argument("command", nargs="?", choices=sorted(COMMANDS),
                   help="what to compute")
    p.add_argument("--config", metavar="FILE", help="key=value config document")
    p.add_argument("--delta-over-j", type=float, metavar="X",
                   help="anisotropy Delta in units of J")
    p.add_argument("--lambda-over-j", type=float, metavar="X",
                   help="modulation amplitude in units of J")
    p.add_argument("--beta", metavar="P/Q", help="modulation fraction, e.g. 1/3")
    p.add_argument("--phase", metavar="ANGLE",
                   help="modulation phase delta (accepts pi expressions)")
    p.add_argument("--length", type=int, metavar="L", help="number of sites")
    p.add_argument("--bc", choices=("periodic", "open"))
    p.add_argument("--ndelta", type=int, metavar="N",
                   help="phase-grid points for tori and sweeps")
    p.add_argument("--neta", type=int, metavar="N",
                   help="deformation-grid points")
    p.add_argument("--max-q", type=int, metavar="Q",
                   help="largest denominator in the butterfly")
    p.add_argument("--edge-window", type=int, metavar="W")
    p.add_argument("--threshold", type=float, metavar="T",
                   help="edge localization threshold")
    p.add_argument("--gap-floor", type=float, metavar="G",
                   help="minimal continuum gap in units of J")
    p.add_argument("--long-run", action="store_true", default=None,
                   help="enable the expensive q=7,9 table columns")
    p.add_argument("--output", metavar="DIR", help="output directory")
    return p


def _cli_overrides(args):
    over = {}
    if args.delta_over_j is not None:
        over["Delta"] = args.delta_over_j
    if args.lambda_over_j is not None:
        over["lambda"] = args.lambda_over_j
    if args.beta is not None:
        parts = args.beta.split("/")
        if len(parts) != 2:
            raise ValidationError(f"--beta expects P/Q, got {args.beta!r}")
        try:
            over["beta_p"], over["beta_q"] = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"--beta expects integers P/Q, got {args.beta!r}")
    if args.phase is not None:
        over["delta"] = parse_angle(args.phase)
    if args.length is not None:
        over["L"] = args.length
    if args.bc is not None:
        over["bc"] = args.bc
    if args.ndelta is not None:
        over["N_delta"] = args.ndelta
    if args.neta is not None:
        over["n_eta"] = args.neta
    if args.max_q is not None:
        over["max_q"] = args.max_q
    if args.edge_window is not None:
        over["edge_window"] = args.edge_window
    if args.threshold is not None:
        over["threshold"] = args.threshold
    if args.gap_floor is not None:
        over["gap_floor"] = args.gap_floor
    if args.long_run:
        over["long_run"] = True
    if args.output is not None:
        over["output_dir"] = args.output
    return over


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        mapping = {}
        if args.config:
            text = Path(args.config).read_text()
            mapping = parse_config(text, source=args.config)
        mapping.update(_cli_overrides(args))
        cfg = build_run(mapping, command=args.command)
        return run(cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TopologicalObstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
