"""Figure rendering for the CLI report paths.

Each function takes already-computed table data and writes one figure file
next to the delimited output.  Rendering is optional everywhere: the CSV is
the primary artifact.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["save_bounds_figure", "save_sweep_figure", "save_protocol_figure"]


def save_bounds_figure(rows, path: str) -> None:
    """EMP bounds versus the standard Carnot limit, one curve pair per ratio."""
    by_ratio: dict[float, list] = {}
    for eta_c, ratio, _eta_s, eta_min, eta_max in rows:
        by_ratio.setdefault(ratio, []).append((eta_c, eta_min, eta_max))
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for i, (ratio, pts) in enumerate(sorted(by_ratio.items())):
        pts.sort()
        eta_c = [p[0] for p in pts]
        color = colors[i % len(colors)]
        ax.plot(eta_c, [p[2] for p in pts], "-", color=color,
                label=f"$r_C/r_H$ = {ratio:g}")
        ax.plot(eta_c, [p[1] for p in pts], "--", color=color)
    ax.plot([0, 1], [0, 1], ":", color="0.5", lw=1, label="$\\eta_C$")
    ax.set_xlabel(r"standard Carnot limit $\eta_C$")
    ax.set_ylabel(r"EMP bounds")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def save_sweep_figure(rows, path: str) -> None:
    """EMP against the Carnot limit with its bounds and the gCA curve."""
    good = [r for r in rows if r.report is not None]
    good.sort(key=lambda r: r.report.eta_c)
    eta_c = [r.report.eta_c for r in good]
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    ax.plot(eta_c, [r.report.bounds.eta_max for r in good], "b-", label=r"$\eta_s/(2-\eta_s)$")
    ax.plot(eta_c, [r.report.bounds.eta_min for r in good], "r--", label=r"$\eta_s/2$")
    ax.plot(eta_c, [r.report.bounds.eta_gca for r in good], "k-.",
            label=r"$1-\sqrt{1-\eta_s}$")
    ax.plot(eta_c, [r.report.emp for r in good], "o", mfc="none", color="green",
            label="EMP")
    ax.set_xlabel(r"standard Carnot limit $\eta_C$")
    ax.set_ylabel(r"efficiency at maximum power $\eta^*$")
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)


def save_protocol_figure(trace, path: str) -> None:
    """Gap and population along one optimal branch, jumps included."""
    fig, (ax_gap, ax_pop) = plt.subplots(2, 1, figsize=(6.4, 5.6), sharex=True)
    t = trace.times
    ax_gap.plot(t, trace.gaps, "b-", lw=1.4)
    ax_gap.plot([t[0], t[0]], [trace.jump_start[0], trace.jump_start[1]],
                "b:", lw=1)
    ax_gap.plot([t[-1], t[-1]], [trace.jump_end[0], trace.jump_end[1]],
                "b:", lw=1)
    ax_gap.plot([t[0], t[-1]], [trace.jump_start[0], trace.jump_end[1]],
                "s", color="0.4", ms=4)
    ax_gap.set_ylabel("gap (meV)")
    ax_pop.plot(t, trace.populations, "g-", lw=1.4)
    ax_pop.set_ylabel(r"population $\langle\sigma_z\rangle$")
    ax_pop.set_xlabel(r"time (meV$^{-1}$)")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
