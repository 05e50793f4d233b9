"""Figure rendering for the experiment CSV tables.

Everything here consumes the sweep, trajectory, and bound tables written
by the quantmpc command line tool and turns them into SVG panels: error
profiles over word length with interquartile bands, and phase portraits
of closed-loop trajectories. All numbers are read from the CSVs as
written; nothing is re-simulated or re-identified here.

Output is deterministic: the SVG backend is pinned, hash salts and
timestamps are fixed, so rendering the same table twice gives
byte-identical files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("svg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "quantmpc-figures"
matplotlib.rcParams["figure.figsize"] = (5.0, 3.4)
matplotlib.rcParams["figure.dpi"] = 100
matplotlib.rcParams["font.size"] = 9.0
matplotlib.rcParams["axes.grid"] = True
matplotlib.rcParams["grid.alpha"] = 0.3

SAVEFIG_METADATA = {"Date": None}

SWEEP_VALUE_COLUMNS = ("rel_err_A", "rel_err_B", "mpc_cost")


class SchemaMismatch(Exception):
    """A CSV is missing columns the requested figure needs."""


class EmptyInput(Exception):
    """A CSV has no rows usable for the requested figure."""


@dataclass(frozen=True)
class FigureSpec:
    """One panel: where the data comes from, where the image goes.

    ``columns`` lists every column the panel reads, so a spec can be
    checked against a table header before any drawing starts.
    """

    inputs: tuple[str, ...]
    output: str
    panel: str
    columns: tuple[str, ...]
    log_y: bool = False

    def validate(self, header: list[str]) -> None:
        missing = [c for c in self.columns if c not in header]
        if missing:
            raise SchemaMismatch(
                f"{self.inputs[0]} lacks columns {missing} needed for "
                f"panel {self.panel!r}; header is {header}"
            )


def read_table(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Read a CSV into a header list and a list of row dicts.

    Raises SchemaMismatch for a file with no header line and EmptyInput
    for a header with no data rows.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaMismatch(f"{path} has no header line")
        header = list(reader.fieldnames)
        rows = list(reader)
    if not rows:
        raise EmptyInput(f"{path} has a header but no data rows")
    return header, rows


def sweep_profile(
    rows: list[dict[str, str]], column: str
) -> tuple[list[int], list[float], list[float], list[float]]:
    """Per-word-length median and quartiles of one sweep metric.

    Only rows with status ``ok`` and a non-empty value count. Returns
    (bits, median, lower quartile, upper quartile), bits ascending.
    """
    by_b: dict[int, list[float]] = {}
    for row in rows:
        if row["status"] != "ok" or row[column] == "":
            continue
        by_b.setdefault(int(row["b"]), []).append(float(row[column]))
    if not by_b:
        raise EmptyInput(f"no successful rows carry a value for {column!r}")
    bits = sorted(by_b)
    med = [float(np.median(by_b[b])) for b in bits]
    q25 = [float(np.percentile(by_b[b], 25)) for b in bits]
    q75 = [float(np.percentile(by_b[b], 75)) for b in bits]
    return bits, med, q25, q75


def trajectory_curves(
    rows: list[dict[str, str]], b: int, axes: tuple[int, int]
) -> list[tuple[int, list[float], list[float]]]:
    """Extract per-trial planar curves for one word length.

    Returns one (trial, xs, ys) triple per trial, trials ascending,
    samples ordered by time.
    """
    xcol, ycol = f"x_{axes[0]}", f"x_{axes[1]}"
    by_trial: dict[int, list[tuple[int, float, float]]] = {}
    for row in rows:
        if int(row["b"]) != b:
            continue
        by_trial.setdefault(int(row["trial"]), []).append(
            (int(row["t"]), float(row[xcol]), float(row[ycol]))
        )
    if not by_trial:
        raise EmptyInput(f"no trajectory rows for b={b}")
    curves = []
    for trial in sorted(by_trial):
        samples = sorted(by_trial[trial])
        xs = [s[1] for s in samples]
        ys = [s[2] for s in samples]
        curves.append((trial, xs, ys))
    return curves


def _systems_in(rows: list[dict[str, str]]) -> list[str]:
    return sorted({row["system"] for row in rows})


def _render_profile(
    spec: FigureSpec,
    system: str,
    profile: tuple[list[int], list[float], list[float], list[float]],
) -> None:
    bits, med, q25, q75 = profile
    fig, ax = plt.subplots()
    ax.fill_between(bits, q25, q75, alpha=0.25, linewidth=0)
    ax.plot(bits, med, marker="o")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xticks(bits)
    ax.set_xlabel("word length b")
    ax.set_ylabel(spec.panel)
    ax.set_title(f"{system}: {spec.panel} vs word length")
    fig.tight_layout()
    fig.savefig(spec.output, metadata=SAVEFIG_METADATA)
    plt.close(fig)


def _render_portrait(
    spec: FigureSpec,
    system: str,
    b: int,
    axes: tuple[int, int],
    curves: list[tuple[int, list[float], list[float]]],
) -> None:
    fig, ax = plt.subplots()
    for trial, xs, ys in curves:
        if len(xs) == 1:
            ax.plot(xs, ys, marker="o", label=f"trial {trial}")
        else:
            ax.plot(xs, ys, linewidth=1.0, label=f"trial {trial}")
    ax.plot([0.0], [0.0], marker="+", color="black", markersize=8)
    ax.set_xlabel(f"x_{axes[0]}")
    ax.set_ylabel(f"x_{axes[1]}")
    ax.set_title(f"{system}: closed-loop trajectories, b={b}")
    if len(curves) <= 8:
        ax.legend(loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(spec.output, metadata=SAVEFIG_METADATA)
    plt.close(fig)


def plot_error_panels(
    input_path: str | Path,
    out_dir: str | Path,
    columns: tuple[str, ...] = SWEEP_VALUE_COLUMNS,
) -> list[Path]:
    """Render one semilog profile panel per metric from a sweep table.

    Each panel shows the per-word-length median with the interquartile
    band shaded. Files are named ``{system}_{column}.svg``. Returns the
    written paths.
    """
    header, rows = read_table(input_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for system in _systems_in(rows):
        system_rows = [r for r in rows if r["system"] == system]
        for column in columns:
            spec = FigureSpec(
                inputs=(str(input_path),),
                output=str(out / f"{system}_{column}.svg"),
                panel=column,
                columns=("system", "b", "status", column),
                log_y=True,
            )
            spec.validate(header)
            profile = sweep_profile(system_rows, column)
            _render_profile(spec, system, profile)
            written.append(Path(spec.output))
    return written


def plot_phase_portraits(
    input_path: str | Path,
    out_dir: str | Path,
    bits: tuple[int, ...] | None = None,
    axes: tuple[int, int] = (1, 2),
) -> list[Path]:
    """Render one phase portrait per word length from a trajectory table.

    Every trial at that word length is overlaid in the (x_i, x_j) plane
    chosen by ``axes``. Files are named ``{system}_phase_b{b}.svg``.
    Returns the written paths.
    """
    header, rows = read_table(input_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for system in _systems_in(rows):
        system_rows = [r for r in rows if r["system"] == system]
        present = sorted({int(r["b"]) for r in system_rows})
        wanted = present if bits is None else list(bits)
        for b in wanted:
            spec = FigureSpec(
                inputs=(str(input_path),),
                output=str(out / f"{system}_phase_b{b}.svg"),
                panel=f"b={b}",
                columns=(
                    "system",
                    "b",
                    "trial",
                    "t",
                    f"x_{axes[0]}",
                    f"x_{axes[1]}",
                ),
                log_y=False,
            )
            spec.validate(header)
            curves = trajectory_curves(system_rows, b, axes)
            _render_portrait(spec, system, b, axes, curves)
            written.append(Path(spec.output))
    return written


def detect_table_kind(header: list[str]) -> str:
    """Classify a CSV header as ``sweep`` or ``trajectory``."""
    if "rel_err_A" in header and "rel_err_B" in header:
        return "sweep"
    if "t" in header and "x_1" in header:
        return "trajectory"
    raise SchemaMismatch(
        f"header {header} matches neither the sweep nor the trajectory table"
    )
