"""Experiment orchestration and artifact persistence.

Every run writes its artifacts plus a ``manifest.json`` recording the
fully resolved configuration, the seed/stream layout, the library
version, and one checksummed entry per output file.  Numeric cells are
written with shortest round-trip formatting, so identical configs
reproduce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import replace
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .config import RunConfig
from .echo import DiagonalBranchHamiltonian, echo_amplitude, survival_probability
from .ensembles import (
    CouplingDistribution,
    EnsembleSpec,
    realization_model,
    ensemble_average_trace,
    sample_couplings,
    sample_amplitudes,
)
from .errors import ValidationError
from .limits import check_time_average, gaussian_validity_window, summarize
from .model import DecoherenceTrace, decoherence_trace
from .spectrum import default_merge_epsilon, enumerate_walks, ldos, merge_degenerate

#: Stream reserved for figure coupling histograms; realization streams are
#: 2i and 2i+1, so a huge constant cannot collide.
_HIST_STREAM = 1 << 62

_HIST_DRAWS = 10_000


def _cell(value: Any) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    count = 0
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")
            count += 1
    return count


def _write_json(path: Path, payload: dict[str, Any], *, sort_keys: bool = True) -> None:
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=sort_keys)
        fh.write("\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _trace_rows(trace: DecoherenceTrace) -> list[tuple[float, float, float, float]]:
    return [
        (float(t), v.real, v.imag, abs(v))
        for t, v in zip(trace.times, trace.values)
    ]


class _Artifacts:
    """Collects output files and their manifest entries for one run."""

    def __init__(self, out_dir: Path, fmt: str, quiet: bool) -> None:
        self.out_dir = out_dir
        self.fmt = fmt
        self.quiet = quiet
        self.entries: list[dict[str, Any]] = []

    def _register(self, path: Path, role: str, rows: int | None) -> None:
        entry: dict[str, Any] = {"file": path.name, "role": role, "sha256": _sha256(path)}
        if rows is not None:
            entry["rows"] = rows
        self.entries.append(entry)
        if not self.quiet:
            print(f"wrote {path}")

    def table(
        self, name: str, role: str, header: Sequence[str], rows: list[Sequence[Any]]
    ) -> None:
        if self.fmt == "csv":
            path = self.out_dir / f"{name}.csv"
            count = _write_csv(path, header, rows)
        else:
            path = self.out_dir / f"{name}.json"
            payload = {col: [row[i] for row in rows] for i, col in enumerate(header)}
            _write_json(path, payload, sort_keys=False)  # keep column order
            count = len(rows)
        self._register(path, role, count)

    def json_report(self, name: str, role: str, payload: dict[str, Any]) -> None:
        path = self.out_dir / f"{name}.json"
        _write_json(path, payload)
        self._register(path, role, None)


def _trace_table(art: _Artifacts, name: str, role: str, trace: DecoherenceTrace) -> None:
    art.table(name, role, ("t", "re_r", "im_r", "abs_r"), _trace_rows(trace))


def _ensemble_table(
    art: _Artifacts,
    name: str,
    role: str,
    realizations: Sequence[DecoherenceTrace],
    mean: DecoherenceTrace,
    floor: float | None = None,
) -> None:
    header = ["realization", "t", "re_r", "im_r", "abs_r"]
    if floor is not None:
        header.append("floor")
    rows: list[Sequence[Any]] = []
    for index, trace in enumerate(realizations):
        for t, v in zip(trace.times, trace.values):
            row = [index, float(t), v.real, v.imag, abs(v)]
            if floor is not None:
                row.append(floor)
            rows.append(row)
    for t, v in zip(mean.times, mean.values):
        row = [-1, float(t), v.real, v.imag, abs(v)]
        if floor is not None:
            row.append(floor)
        rows.append(row)
    art.table(name, role, header, rows)


def _spectrum_for(cfg: RunConfig):
    couplings = sample_couplings(cfg.distribution, cfg.n, cfg.seed, stream=0)
    amps = sample_amplitudes(cfg.amplitudes, cfg.n, cfg.seed, stream=1)
    spec = enumerate_walks(couplings, amps)
    epsilon = None
    if cfg.merge:
        epsilon = (
            cfg.merge_epsilon
            if cfg.merge_epsilon is not None
            else default_merge_epsilon(couplings)
        )
        spec = merge_degenerate(spec, epsilon)
    return couplings, amps, spec, epsilon


def _histogram_rows(edges: np.ndarray, masses: np.ndarray) -> list[Sequence[Any]]:
    return [
        (float(edges[i]), float(edges[i + 1]), float(masses[i]))
        for i in range(masses.size)
    ]


def _run_trace(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    couplings = sample_couplings(cfg.distribution, cfg.n, cfg.seed, stream=0)
    amps = sample_amplitudes(cfg.amplitudes, cfg.n, cfg.seed, stream=1)
    trace = decoherence_trace(
        couplings, amps, cfg.time_grid(), label=str(cfg.distribution), seed=cfg.seed
    )
    _trace_table(art, "trace", "trace", trace)
    summary = summarize(couplings, amps)
    info: dict[str, Any] = {
        "mean_energy": summary.mean,
        "energy_variance": summary.variance,
    }
    if summary.variance > 0.0:
        info["gaussian_window"] = gaussian_validity_window(summary)
    return info


def _run_spectrum(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    _, _, spec, epsilon = _spectrum_for(cfg)
    rows = [(float(e), float(w)) for e, w in zip(spec.energies, spec.weights)]
    art.table("spectrum", "spectrum", ("energy", "weight"), rows)
    info: dict[str, Any] = {"entries": len(spec), "merged": spec.merged}
    if epsilon is not None:
        info["merge_epsilon"] = epsilon
    return info


def _run_ldos(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    _, _, spec, epsilon = _spectrum_for(cfg)
    hist = ldos(spec, cfg.bins)
    art.table(
        "ldos", "ldos", ("bin_lo", "bin_hi", "mass"), _histogram_rows(hist.edges, hist.masses)
    )
    info: dict[str, Any] = {"bins": hist.masses.size, "merged": spec.merged}
    if epsilon is not None:
        info["merge_epsilon"] = epsilon
    return info


def _run_ensemble(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    spec = EnsembleSpec(
        distribution=cfg.distribution,
        amplitudes=cfg.amplitudes,
        n=cfg.n,
        realizations=cfg.realizations,
        seed=cfg.seed,
    )
    result = ensemble_average_trace(
        spec, cfg.time_grid(), keep_realizations=True, threads=cfg.threads
    )
    _ensemble_table(art, "ensemble", "ensemble-traces", result.realizations, result.mean)
    return {"realizations": cfg.realizations}


def _run_echo(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    couplings = sample_couplings(cfg.distribution, cfg.n, cfg.seed, stream=0)
    amps = sample_amplitudes(cfg.amplitudes, cfg.n, cfg.seed, stream=1)
    h0 = DiagonalBranchHamiltonian.from_couplings(couplings)
    h1 = -h0
    rows = []
    for t in cfg.time_grid().samples:
        v = echo_amplitude(h0, h1, amps, t)
        rows.append((float(t), v.real, v.imag, abs(v), survival_probability(h1, amps, t)))
    art.table("echo", "echo-trace", ("t", "re_r", "im_r", "abs_r", "survival_p"), rows)
    return {"branches": "h0 = (+g, -g); h1 = -h0"}


def _run_average_check(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    couplings = sample_couplings(cfg.distribution, cfg.n, cfg.seed, stream=0)
    amps = sample_amplitudes(cfg.amplitudes, cfg.n, cfg.seed, stream=1)
    check = check_time_average(couplings, amps, horizon=cfg.horizon, samples=cfg.samples)
    art.json_report(
        "average_check",
        "average-check",
        {
            "analytic": check.analytic,
            "empirical": check.empirical,
            "stderr": check.stderr,
            "n_sigma": check.n_sigma,
            "horizon": check.horizon,
            "samples": check.samples,
        },
    )
    return {"horizon": check.horizon, "samples": check.samples}


def _coupling_histogram(cfg: RunConfig, art: _Artifacts, name: str, dist) -> None:
    draws = sample_couplings(dist, _HIST_DRAWS, cfg.seed, stream=_HIST_STREAM).couplings
    bins = math.ceil(math.sqrt(_HIST_DRAWS))
    counts, edges = np.histogram(draws, bins=bins)
    art.table(
        name,
        "coupling-histogram",
        ("bin_lo", "bin_hi", "mass"),
        _histogram_rows(edges, counts / draws.size),
    )


def _energy_histogram(cfg: RunConfig, art: _Artifacts, name: str, dist, n: int) -> None:
    couplings = sample_couplings(dist, n, cfg.seed, stream=0)
    amps = sample_amplitudes(cfg.amplitudes, n, cfg.seed, stream=1)
    hist = ldos(enumerate_walks(couplings, amps), cfg.bins)
    art.table(
        name,
        f"energy-histogram-n{n}",
        ("bin_lo", "bin_hi", "mass"),
        _histogram_rows(hist.edges, hist.masses),
    )


def _figure_ensemble(
    cfg: RunConfig, art: _Artifacts, name: str, role: str, dist, n: int, floor: float | None
) -> None:
    spec = EnsembleSpec(
        distribution=dist,
        amplitudes=cfg.amplitudes,
        n=n,
        realizations=cfg.realizations,
        seed=cfg.seed,
    )
    result = ensemble_average_trace(
        spec, cfg.time_grid(), keep_realizations=True, threads=cfg.threads
    )
    _ensemble_table(art, name, role, result.realizations, result.mean, floor=floor)


def _emit_fig1(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    equal_dist = (
        cfg.distribution
        if cfg.distribution.kind == "fixed"
        else CouplingDistribution.fixed(1.0)
    )
    walk_dist = (
        cfg.distribution
        if cfg.distribution.kind != "fixed"
        else CouplingDistribution.gaussian(0.0, 1.0)
    )
    couplings = sample_couplings(equal_dist, cfg.n, cfg.seed, stream=0)
    amps = sample_amplitudes(cfg.amplitudes, cfg.n, cfg.seed, stream=1)
    merged = merge_degenerate(
        enumerate_walks(couplings, amps), default_merge_epsilon(couplings)
    )
    art.table(
        "fig1_equal_spectrum",
        "equal-couplings",
        ("energy", "weight"),
        [(float(e), float(w)) for e, w in zip(merged.energies, merged.weights)],
    )
    walk_couplings = sample_couplings(walk_dist, cfg.n, cfg.seed, stream=0)
    walk_spec = enumerate_walks(walk_couplings, amps)
    art.table(
        "fig1_walk_spectrum",
        "distinct-couplings",
        ("energy", "weight"),
        [(float(e), float(w)) for e, w in zip(walk_spec.energies, walk_spec.weights)],
    )
    return {"equal_distribution": str(equal_dist), "walk_distribution": str(walk_dist)}


def _emit_fig2(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    dist = cfg.distribution
    _coupling_histogram(cfg, art, "fig2_couplings_hist", dist)
    for n in (6, 24):
        _energy_histogram(cfg, art, f"fig2_energy_hist_n{n}", dist, n)
    _figure_ensemble(cfg, art, "fig2_traces_n6", "traces-dashed-n6", dist, 6, None)
    _figure_ensemble(cfg, art, "fig2_traces_n24", "traces-thin-n24", dist, 24, None)
    return {"distribution": str(dist), "mean_role": "rows with realization = -1 (bold)"}


def _emit_fig3(cfg: RunConfig, art: _Artifacts) -> dict[str, Any]:
    dist = (
        cfg.distribution
        if cfg.distribution.kind == "lorentzian"
        else CouplingDistribution.lorentzian(0.0, 0.25)
    )
    _coupling_histogram(cfg, art, "fig3_couplings_hist", dist)
    _energy_histogram(cfg, art, f"fig3_energy_hist_n{cfg.n}", dist, cfg.n)
    floor = 2.0 ** (-cfg.n / 2.0)
    _figure_ensemble(cfg, art, f"fig3_traces_n{cfg.n}", f"traces-n{cfg.n}", dist, cfg.n, floor)
    big_spec = EnsembleSpec(
        distribution=dist, amplitudes=cfg.amplitudes, n=100, realizations=1, seed=cfg.seed
    )
    couplings, amps = realization_model(big_spec, 0)
    trace = decoherence_trace(
        couplings, amps, cfg.time_grid(), label=str(dist), seed=cfg.seed
    )
    rows = [
        (0, float(t), v.real, v.imag, abs(v), 2.0 ** (-50.0))
        for t, v in zip(trace.times, trace.values)
    ]
    art.table(
        "fig3_trace_n100",
        "trace-thin-n100",
        ("realization", "t", "re_r", "im_r", "abs_r", "floor"),
        rows,
    )
    return {"distribution": str(dist), "saturation_floor": floor}


_EXPERIMENT_RUNNERS = {
    "trace": _run_trace,
    "spectrum": _run_spectrum,
    "ldos": _run_ldos,
    "ensemble": _run_ensemble,
    "echo": _run_echo,
    "average-check": _run_average_check,
}

_FIGURE_EMITTERS = {"fig1": _emit_fig1, "fig2": _emit_fig2, "fig3": _emit_fig3}


def _config_dict(cfg: RunConfig) -> dict[str, Any]:
    return {
        "experiment": cfg.experiment,
        "n": cfg.n,
        "couplings": str(cfg.distribution),
        "amplitudes": str(cfg.amplitudes),
        "seed": cfg.seed,
        "realizations": cfg.realizations,
        "grid": {"start": cfg.start, "stop": cfg.stop, "steps": cfg.steps},
        "out_dir": str(cfg.out_dir),
        "format": cfg.format,
        "bins": cfg.bins,
        "merge": cfg.merge,
        "merge_epsilon": cfg.merge_epsilon,
        "horizon": cfg.horizon,
        "samples": cfg.samples,
        "figure": cfg.figure,
        "threads": cfg.threads,
    }


def run(cfg: RunConfig) -> int:
    """Execute one experiment, writing artifacts and a manifest.

    Returns 0 on success; validation, capacity and I/O problems raise and
    are mapped to exit codes by the CLI.
    """
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    art = _Artifacts(out_dir, cfg.format, cfg.quiet)
    if cfg.experiment == "figure":
        info = _FIGURE_EMITTERS[cfg.figure](cfg, art)
    else:
        info = _EXPERIMENT_RUNNERS[cfg.experiment](cfg, art)
    manifest = {
        "version": __version__,
        "config": _config_dict(cfg),
        "seed_streams": "realization i: couplings stream 2i, amplitudes stream 2i+1",
        "details": info,
        "outputs": art.entries,
    }
    _write_json(out_dir / "manifest.json", manifest)
    if not cfg.quiet:
        print(f"wrote {out_dir / 'manifest.json'}")
    return 0


def emit_figure_data(which: str, cfg: RunConfig) -> int:
    """Produce the per-panel data files for one figure tag."""
    if which not in _FIGURE_EMITTERS:
        raise ValidationError(f"unknown figure {which!r}; pick from {sorted(_FIGURE_EMITTERS)}")
    if cfg.experiment != "figure" or cfg.figure != which:
        cfg = replace(cfg, experiment="figure", figure=which)
    return run(cfg)
