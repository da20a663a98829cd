import matplotlib as mpl
import matplotlib.pyplot as plt
import numpy as np

from quasiminimal.ruler import ruler_window
from quasiminimal.substitution import gap_lengths

PALETTE = {
    "ruler":    "#1f77b4",  # blue
    "gaps":     "#ff7f0e",  # orange
    "expected": "#000000",  # black
    "chain":    "#2ca02c",  # green
    "modular":  "#9467bd",  # purple
    "counting": "#6c6c6c",  # grey
}


def set_mpl_defaults():
    mpl.rcParams.update({
        "font.family": "DejaVu Sans",
        "font.size": 11,
        "axes.titlesize": 13,
        "axes.labelsize": 12,
        "legend.fontsize": 10,
        "xtick.labelsize": 10,
        "ytick.labelsize": 10,
        "lines.linewidth": 2.0,
        "lines.markersize": 6.0,
        "axes.grid": True,
        "grid.alpha": 0.18,
        "grid.linestyle": "-",
        "axes.spines.top": False,
        "axes.spines.right": False,
        "figure.figsize": (7.5, 5.0),
        "figure.autolayout": True,
        "savefig.dpi": 300,
        "savefig.bbox": "tight",
    })


def pro_axes(ax, *, xlabel=None, ylabel=None, title=None, legend=True):
    if xlabel: ax.set_xlabel(xlabel)
    if ylabel: ax.set_ylabel(ylabel)
    if title:  ax.set_title(title)
    ax.minorticks_on()
    ax.tick_params(axis="both", which="major", length=5, width=1.0)
    ax.tick_params(axis="both", which="minor", length=3, width=0.8)
    if legend:
        leg = ax.legend(frameon=True, fancybox=True, framealpha=0.92, borderpad=0.6)
        leg.get_frame().set_linewidth(0)


# ---------- Graph 1: ruler sequence ----------
def figure_ruler(extent):
    phi = ruler_window(0, extent)
    fig, ax = plt.subplots(figsize=(8.5, 3.6))
    ax.stem(np.arange(extent), phi, linefmt=PALETTE["ruler"], markerfmt="o", basefmt=" ")
    pro_axes(ax, xlabel="i", ylabel="phi(i)", title="Ruler sequence (2-adic valuation of i+1)", legend=False)
    ax.grid(axis="x", alpha=0.0)
    return fig


# ---------- Graph 2: gap exponents of an iterate ----------
def figure_gap_exponents(tau, letter, depth):
    """log2 of the marker gaps of tau^depth(letter) against the ruler prefix."""
    word = tau.iterate(letter, depth)
    gaps = np.array(gap_lengths(word, letter), dtype=float)
    fig, ax = plt.subplots(figsize=(8.5, 4.2))
    x = np.arange(len(gaps))
    h_g, = ax.plot(x, np.log2(gaps), "o", color=PALETTE["gaps"], label="log2(gap)")
    h_r, = ax.plot(x, ruler_window(0, len(gaps)), ls="--", lw=1.2, color=PALETTE["expected"], label="ruler")
    pro_axes(ax, xlabel="gap index", ylabel="exponent",
             title=f"Marker gaps of tau^{depth}({letter})", legend=False)
    ax.legend(handles=[h_g, h_r], frameon=True, fancybox=True, framealpha=0.92,
              loc="upper left", bbox_to_anchor=(1.02, 1.0), ncol=1)
    return fig


# ---------- Graph 3: Cantor-Bendixson chains ----------
def figure_cb_chains(chains):
    """chains: name -> list of derivative sizes (templates per stage)."""
    fig, ax = plt.subplots(figsize=(7.5, 5.0))
    names = list(chains)
    width = 0.8 / max(len(names), 1)
    for n, name in enumerate(names):
        sizes = np.array(chains[name], dtype=float)
        x = np.arange(len(sizes)) + n * width
        ax.bar(x, sizes, width=width, label=f"{name} (rank {len(sizes) - 1})")
    pro_axes(ax, xlabel="derivative", ylabel="templates", title="Cantor-Bendixson derivative chains")
    ax.grid(axis="x", alpha=0.0)
    return fig


# ---------- Graph 4: construction gap profiles ----------
def figure_construction_gaps(profiles):
    """profiles: name -> marker gaps of a construction window, drawn on a log scale."""
    fig, ax = plt.subplots(figsize=(8.5, 4.8))
    for name, gaps in profiles.items():
        gaps = np.asarray(gaps, dtype=float) + 1.0
        ax.plot(np.arange(len(gaps)), gaps, ".-", lw=1.0, color=PALETTE.get(name), label=name)
    ax.set_yscale("log")
    pro_axes(ax, xlabel="image index", ylabel="distance between markers",
             title="Construction windows")
    return fig
