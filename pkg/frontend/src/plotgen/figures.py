"""Figure specifications and rendering.

A :class:`FigureSpec` is a grid of panels; each panel names its plot kind and
data files (relative to the data directory).  ``build_figure`` validates all
inputs first, then draws; ``render`` additionally saves with deterministic
output settings (fixed style, no timestamps or software tags).

Presets
-------
fig1 / fig3   2x3 grid, one initialization per row (plain Gaussian on top,
              rescaled below): radius histogram | power norms | hidden states.
              fig1 expects real-field data, fig3 complex-field data; the file
              names are the same.
fig4          single panel, overlaid radius histograms of the real and
              complex ensembles.
fig5          single panel, hidden-state mean curves of both fields overlaid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import PlotDataError, read_csv_columns

# fixed style: deterministic output and consistent panels
_STYLE = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "svg.hashsalt": "plotgen",
}

_COLORS = {"glorot": "#c44e52", "rescaled": "#4c72b0", "real": "#c44e52", "complex": "#4c72b0"}


@dataclass(frozen=True)
class PanelSpec:
    kind: str  # "radius-hist" | "norm-curve" | "radius-overlay" | "curve-overlay"
    files: dict[str, str]  # legend label -> file name inside the data dir
    title: str
    ylabel: str = ""


@dataclass(frozen=True)
class FigureSpec:
    name: str
    rows: int
    cols: int
    panels: list[PanelSpec] = field(default_factory=list)
    size: tuple[float, float] = (12.0, 6.0)

    def __post_init__(self) -> None:
        if len(self.panels) != self.rows * self.cols:
            raise ValueError(
                f"{self.name}: {len(self.panels)} panels do not fill the {self.rows}x{self.cols} layout"
            )


def _norms_grid(prefix_to_label: dict[str, str]) -> list[PanelSpec]:
    panels = []
    for prefix, label in prefix_to_label.items():
        panels.extend(
            [
                PanelSpec(
                    kind="radius-hist",
                    files={label: f"{prefix}_radius.csv"},
                    title=f"{label}: spectral radius",
                    ylabel="density",
                ),
                PanelSpec(
                    kind="norm-curve",
                    files={label: f"{prefix}_powers.csv"},
                    title=f"{label}: matrix powers",
                    ylabel=r"log $\|W^k x\|^2$",
                ),
                PanelSpec(
                    kind="norm-curve",
                    files={label: f"{prefix}_hidden.csv"},
                    title=f"{label}: hidden states",
                    ylabel=r"log $\|h_t\|^2$",
                ),
            ]
        )
    return panels


PRESETS: dict[str, FigureSpec] = {
    "fig1": FigureSpec(
        name="fig1", rows=2, cols=3,
        panels=_norms_grid({"glorot": "Glorot", "rescaled": "Rescaled"}),
    ),
    "fig3": FigureSpec(
        name="fig3", rows=2, cols=3,
        panels=_norms_grid({"glorot": "Glorot", "rescaled": "Rescaled"}),
    ),
    "fig4": FigureSpec(
        name="fig4", rows=1, cols=1, size=(6.0, 4.0),
        panels=[
            PanelSpec(
                kind="radius-overlay",
                files={"real": "radius_real.csv", "complex": "radius_complex.csv"},
                title="Largest eigenvalue modulus: real vs complex",
                ylabel="density",
            )
        ],
    ),
    "fig5": FigureSpec(
        name="fig5", rows=1, cols=1, size=(6.0, 4.0),
        panels=[
            PanelSpec(
                kind="curve-overlay",
                files={"real": "hidden_real.csv", "complex": "hidden_complex.csv"},
                title="Hidden-state norms: real vs complex",
                ylabel=r"log $\|h_t\|^2$",
            )
        ],
    ),
}


def _fd_bins(values: np.ndarray) -> int | np.ndarray:
    # Freedman-Diaconis via numpy; degenerate samples fall back to one bar
    if np.ptp(values) == 0.0:
        return 1
    return np.histogram_bin_edges(values, bins="fd")


def _draw_radius_hist(ax, label: str, data: dict[str, np.ndarray]) -> None:
    radii = data["radius"]
    ax.hist(radii, bins=_fd_bins(radii), density=True, alpha=0.75, color=_COLORS.get(label.lower(), None))
    ax.axvline(1.0, color="black", lw=1.0, ls="--")
    ax.set_xlabel("radius")


def _draw_norm_curve(ax, label: str, data: dict[str, np.ndarray]) -> None:
    t, mean, std = data["t"], data["mean"], data["std"]
    color = _COLORS.get(label.lower(), None)
    ax.plot(t, mean, color=color, lw=1.5, label=label)
    ax.fill_between(t, mean - std, mean + std, color=color, alpha=0.25, lw=0)
    if "bound" in data and np.isfinite(data["bound"]).all():
        ax.plot(t, data["bound"], color="black", lw=1.0, ls=":", label="lower bound")
        ax.legend(loc="upper left")
    ax.set_xlabel("step")


def _load_panel(data_dir: Path, panel: PanelSpec) -> dict[str, dict[str, np.ndarray]]:
    loaded = {}
    for label, fname in panel.files.items():
        path = data_dir / fname
        if panel.kind in ("radius-hist", "radius-overlay"):
            cols = read_csv_columns(path, ["trial", "radius"])
            loaded[label] = {"radius": cols["radius"]}
        else:
            axis = "t" if "hidden" in fname else "k"
            wanted = [axis, "mean_log_sq_norm", "std_log_sq_norm"]
            head = open(path, encoding="utf-8").readline().strip().split(",") if path.is_file() else []
            has_bound = "bound_log" in head
            cols = read_csv_columns(path, wanted + (["bound_log"] if has_bound else []))
            loaded[label] = {
                "t": cols[axis],
                "mean": cols["mean_log_sq_norm"],
                "std": cols["std_log_sq_norm"],
            }
            if has_bound:
                loaded[label]["bound"] = cols["bound_log"]
    return loaded


def build_figure(spec: FigureSpec, data_dir: Path) -> plt.Figure:
    """Validate every input file, then draw the panel grid."""
    panel_data = [_load_panel(Path(data_dir), p) for p in spec.panels]  # all-or-nothing
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(spec.rows, spec.cols, figsize=spec.size, squeeze=False)
        for ax, panel, loaded in zip(axes.ravel(), spec.panels, panel_data):
            if panel.kind in ("radius-hist", "radius-overlay"):
                for label, data in loaded.items():
                    _draw_radius_hist(ax, label, data)
                if panel.kind == "radius-overlay":
                    ax.legend(list(loaded))
            else:
                for label, data in loaded.items():
                    _draw_norm_curve(ax, label, data)
                if panel.kind == "curve-overlay":
                    ax.legend(loc="upper left")
            ax.set_title(panel.title)
            ax.set_ylabel(panel.ylabel)
        fig.tight_layout()
    return fig


def render(spec: FigureSpec, data_dir: Path, out_path: Path) -> Path:
    """Render to PNG or SVG; no file is created if any input fails validation."""
    fig = build_figure(spec, data_dir)
    out_path = Path(out_path)
    if out_path.suffix.lower() not in (".png", ".svg"):
        raise PlotDataError(f"unsupported output format {out_path.suffix!r}; use .png or .svg")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    # strip the renderer's software tag so reruns are byte-stable
    metadata = {"Software": None} if out_path.suffix.lower() == ".png" else {"Date": None}
    fig.savefig(out_path, metadata=metadata)
    plt.close(fig)
    return out_path
