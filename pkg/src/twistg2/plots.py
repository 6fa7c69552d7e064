"""Figure rendering for scan and sweep reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_LABELS = {
    "tau_ps": r"delay $\tau$ (ns)",
    "pump_power_mw": "pump power (mW)",
    "pump_oam_l": "pump OAM order $l$",
}


def plot_report(report: dict, path) -> None:
    """Render one figure for a scan/sweep report; rows with errors are skipped."""
    rows = [r for r in report["rows"] if "error" not in r]
    if not rows:
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        ax.text(0.5, 0.5, "no plottable rows", ha="center", va="center")
        ax.set_axis_off()
        fig.savefig(path, dpi=150)
        plt.close(fig)
        return
    param = rows[0]["param_name"]
    x = [r["param_value"] for r in rows]
    xlabel = _LABELS.get(param, param)
    if param == "tau_ps":
        x = [v / 1000.0 for v in x]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(
        x,
        [r["g2_direct"] for r in rows],
        yerr=[r["g2_direct_err"] for r in rows],
        fmt="o-",
        capsize=3,
        label="direct (triples)",
    )
    if param != "tau_ps":
        ax.errorbar(
            x,
            [r["g2_accidental"] for r in rows],
            yerr=[r["g2_accidental_err"] for r in rows],
            fmt="s--",
            capsize=3,
            label="accidentals only",
        )
    if param == "tau_ps" and min(r["g2_direct"] for r in rows) > 0:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(r"$g^{(2)}(0)$")
    ax.legend(frameon=False)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
