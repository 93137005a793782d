"""Report rendering: generator graphs and component structure as
matplotlib figures, closures and decompositions as CSV tables.

``generate_report`` runs the whole pipeline for one language instance
and writes everything into a directory; the CSV output is deterministic
and the figures are rendered with the Agg backend, so the command works
headless.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .decomposition import Decomposition, covering_decompose, verify_emulation
from .semigroupoid import LanguageExtraction, arrow_type, extract_language
from .statespace import PartialTransformation, StateSpace, TypedGeneratorGraph

FIG_SIZE = (6.4, 4.8)
NODE_COLOR = "#dce6f2"
EDGE_COLOR = "#45505e"


def layered_positions(space: StateSpace) -> dict[int, tuple[float, float]]:
    """Place states on rows by stack depth, centered horizontally."""
    by_depth: dict[int, list[int]] = {}
    for i, state in enumerate(space.states):
        by_depth.setdefault(len(state), []).append(i)
    positions = {}
    for depth, row in sorted(by_depth.items()):
        width = len(row) - 1
        for k, i in enumerate(row):
            positions[i] = (k - width / 2.0, -float(depth))
    return positions


def circular_positions(count: int) -> dict[int, tuple[float, float]]:
    if count == 1:
        return {0: (0.0, 0.0)}
    return {i: (math.cos(2 * math.pi * i / count),
                math.sin(2 * math.pi * i / count))
            for i in range(count)}


def _draw_self_loop(ax, x, y, label):
    loop = FancyArrowPatch((x - 0.08, y + 0.12), (x + 0.08, y + 0.12),
                           connectionstyle="arc3,rad=2.4",
                           arrowstyle="-|>", mutation_scale=10,
                           color=EDGE_COLOR, lw=1.0, zorder=1)
    ax.add_patch(loop)
    ax.annotate(label, (x, y + 0.42), ha="center", fontsize=8, color=EDGE_COLOR)


def save_graph_figure(graph: TypedGeneratorGraph, path: Path,
                      positions: dict[int, tuple[float, float]] | None = None,
                      title: str = ""):
    """Render a typed generator graph: one node per object, one labeled
    arrow per edge; parallel edges fan out with growing curvature."""
    if positions is None:
        positions = circular_positions(len(graph.object_names))
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    parallel: dict[tuple[int, int], int] = {}
    for s, label, t in graph.edges:
        if s == t:
            x, y = positions[s]
            _draw_self_loop(ax, x, y, label)
            continue
        k = parallel.get((s, t), 0)
        parallel[(s, t)] = k + 1
        rad = 0.12 + 0.16 * k
        if s > t:
            rad = -rad
        arrow = FancyArrowPatch(positions[s], positions[t],
                                connectionstyle=f"arc3,rad={rad}",
                                arrowstyle="-|>", mutation_scale=12,
                                shrinkA=14, shrinkB=14,
                                color=EDGE_COLOR, lw=1.1, zorder=1)
        ax.add_patch(arrow)
        (x1, y1), (x2, y2) = positions[s], positions[t]
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        # Offset the label toward the arc's bulge.
        nx, ny = -(y2 - y1), (x2 - x1)
        norm = math.hypot(nx, ny) or 1.0
        ax.annotate(label, (mx + rad * nx / norm, my + rad * ny / norm),
                    ha="center", va="center", fontsize=8, color=EDGE_COLOR)
    for i, name in enumerate(graph.object_names):
        x, y = positions[i]
        ax.scatter([x], [y], s=900, color=NODE_COLOR, edgecolors=EDGE_COLOR,
                   zorder=2)
        ax.annotate(name, (x, y), ha="center", va="center", fontsize=9, zorder=3)
    ax.set_title(title)
    ax.set_axis_off()
    ax.margins(0.2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_component_figure(d: Decomposition, path: Path, title: str = ""):
    """Bar chart of component sizes, one bar per top-level arrow, colored
    by isomorphism class."""
    sizes = [len(c.members) for c in d.components]
    labels = [d.top.arrows[c.top_arrow].label for c in d.components]
    class_of = {}
    for k, cls in enumerate(d.classes):
        for member in cls.members:
            class_of[member.component] = k
    cmap = plt.get_cmap("tab10")
    colors = [cmap(class_of[i] % 10) for i in range(len(d.components))]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    ax.bar(range(len(sizes)), sizes, color=colors, edgecolor=EDGE_COLOR)
    ax.set_xticks(range(len(sizes)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("component size")
    ax.set_title(title or "component sizes by isomorphism class")
    ax.yaxis.get_major_locator().set_params(integer=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _image_cell(space: StateSpace, value: int | None) -> str:
    return "_" if value is None else space.names[value]


def write_states_csv(space: StateSpace, path: Path):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["index", "state", "depth"])
        for i, state in enumerate(space.states):
            writer.writerow([i, space.names[i], len(state)])


def write_closure_csv(space: StateSpace,
                      closure: Sequence[PartialTransformation], path: Path):
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["label", *space.names])
        for pt in closure:
            writer.writerow([pt.label, *(_image_cell(space, v) for v in pt.images)])


def write_components_csv(d: Decomposition, path: Path):
    class_of = {}
    for k, cls in enumerate(d.classes):
        for member in cls.members:
            class_of[member.component] = k
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["component", "top_arrow", "size", "class", "members"])
        for i, comp in enumerate(d.components):
            writer.writerow([i, d.top.arrows[comp.top_arrow].label,
                             len(comp.members), class_of[i],
                             " ".join(str(m) for m in comp.members)])


def generate_report(generators: Sequence[str], cap: int, modulus: int,
                    outdir: Path) -> list[Path]:
    """Extract, decompose along the hom-set collapse, and write the full
    report (CSV tables, figures, and a plain-text summary).  Returns the
    paths written, in a fixed order."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    extraction: LanguageExtraction = extract_language(generators, cap, modulus)
    top, phi = arrow_type(extraction.semigroupoid)
    decomposition = covering_decompose(extraction.semigroupoid, phi)
    emulation = verify_emulation(extraction.semigroupoid, decomposition)

    title = (f"generators {{{', '.join(extraction.space.generators)}}} "
             f"cap {cap} mod {modulus}")
    paths = []

    def emit(name: str, writer):
        path = outdir / name
        writer(path)
        paths.append(path)

    emit("states.csv", lambda p: write_states_csv(extraction.space, p))
    emit("closure.csv", lambda p: write_closure_csv(extraction.space,
                                                    extraction.closure, p))
    emit("components.csv", lambda p: write_components_csv(decomposition, p))
    emit("generator_graph.png",
         lambda p: save_graph_figure(extraction.graph, p,
                                     layered_positions(extraction.space), title))
    emit("component_sizes.png",
         lambda p: save_component_figure(decomposition, p, title))

    summary = outdir / "summary.txt"
    sizes = ",".join(str(len(c.members)) for c in decomposition.components)
    summary.write_text(
        f"{title}\n"
        f"states={len(extraction.space)}\n"
        f"closure={len(extraction.closure)}\n"
        f"arrows={len(extraction.semigroupoid.arrows)}\n"
        f"top={len(top.arrows)}\n"
        f"components=[{sizes}]\n"
        f"classes={len(decomposition.classes)}\n"
        f"emulation={'ok' if emulation.ok else 'failed'}\n",
        encoding="utf-8")
    paths.append(summary)
    return paths
