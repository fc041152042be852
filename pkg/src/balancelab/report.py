"""Descriptive balance reports and figure rendering.

A BalanceReport carries per-covariate descriptive summaries and a
correlation matrix, and nothing else. The format deliberately has no
field capable of holding an inferential test result: a p-value on a fixed
stimulus set answers a question nobody asked, so this report cannot emit
one under any option.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import DataError
from .stats import CorrelationMatrix, DescriptiveSummary, correlation_matrix, describe

__all__ = [
    "BalanceReport",
    "build_balance_report",
    "render_text",
    "report_dict",
    "save_balance_figures",
    "save_grid_figures",
]


@dataclass(frozen=True)
class BalanceReport:
    """Descriptive-only balance diagnostics for a two-group table."""

    group_labels: tuple
    summaries: dict  # covariate name -> DescriptiveSummary
    correlations: CorrelationMatrix
    zero_variance: tuple


def build_balance_report(columns: dict, group: list) -> BalanceReport:
    """Summarize every numeric column of a two-group table.

    ``columns`` maps covariate (and optionally outcome) names to equal-length
    value arrays; ``group`` holds exactly two distinct labels.
    """
    group = list(group)
    labels = sorted(set(group), key=str)
    if len(labels) != 2:
        raise DataError(f"expected exactly 2 levels in the group column, got {len(labels)}")
    mask_b = np.array([g == labels[1] for g in group])
    if mask_b.sum() < 2 or (~mask_b).sum() < 2:
        raise DataError("each group needs at least 2 rows")

    summaries = {}
    for name, values in columns.items():
        values = np.asarray(values, dtype=float)
        if len(values) != len(group):
            raise DataError(f"column {name!r} length does not match the group column")
        summaries[name] = describe(values[~mask_b], values[mask_b])
    corr = correlation_matrix(columns)
    zero_variance = tuple(
        name for name, s in summaries.items() if s.sd_a == 0.0 and s.sd_b == 0.0
    )
    return BalanceReport(
        group_labels=tuple(labels),
        summaries=summaries,
        correlations=corr,
        zero_variance=zero_variance,
    )


def report_dict(report: BalanceReport) -> dict:
    """JSON-ready form of a balance report."""
    return {
        "group_labels": list(report.group_labels),
        "covariates": {
            name: {
                "mean_a": s.mean_a, "mean_b": s.mean_b,
                "sd_a": s.sd_a, "sd_b": s.sd_b,
                "pooled_sd": s.pooled_sd,
                "cohens_d": s.cohens_d,
                "n_a": s.n_a, "n_b": s.n_b,
            }
            for name, s in report.summaries.items()
        },
        "correlations": {
            "names": list(report.correlations.names),
            "values": [
                [None if np.isnan(v) else float(v) for v in row]
                for row in report.correlations.values
            ],
        },
        "zero_variance": list(report.zero_variance),
    }


def render_text(report: BalanceReport) -> str:
    """Human-readable table of the balance diagnostics."""
    la, lb = report.group_labels
    lines = [
        f"Balance report: group A = {la}, group B = {lb}",
        "",
        f"{'covariate':<16}{'mean A':>10}{'mean B':>10}{'SD A':>9}{'SD B':>9}"
        f"{'pooled SD':>11}{'Cohen d':>9}",
    ]
    for name, s in report.summaries.items():
        d = "undef" if s.cohens_d is None else f"{s.cohens_d:.3f}"
        lines.append(
            f"{name:<16}{s.mean_a:>10.4f}{s.mean_b:>10.4f}{s.sd_a:>9.4f}{s.sd_b:>9.4f}"
            f"{s.pooled_sd:>11.4f}{d:>9}"
        )
    lines.append("")
    lines.append("Correlation matrix:")
    names = report.correlations.names
    header = f"{'':<16}" + "".join(f"{n[:9]:>10}" for n in names)
    lines.append(header)
    for i, name in enumerate(names):
        cells = "".join(
            f"{'undef':>10}" if np.isnan(v) else f"{v:>10.3f}"
            for v in report.correlations.values[i]
        )
        lines.append(f"{name[:15]:<16}{cells}")
    if report.zero_variance:
        lines.append("")
        lines.append(f"Zero-variance covariates: {', '.join(report.zero_variance)}")
    return "\n".join(lines) + "\n"


def save_balance_figures(report: BalanceReport, outdir) -> list:
    """Render balance figures to ``outdir``; returns written file paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    names = [n for n, s in report.summaries.items() if s.cohens_d is not None]
    ds = [report.summaries[n].cohens_d for n in names]
    fig, ax = plt.subplots(figsize=(6, 0.6 * max(len(names), 3) + 1.5))
    ax.barh(names, ds, color="#4878d0")
    ax.axvline(0, color="black", lw=0.8)
    ax.set_xlabel("standardized mean difference (Cohen's d)")
    ax.set_title("Covariate balance")
    fig.tight_layout()
    path = outdir / "balance_smd.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    corr = report.correlations
    fig, ax = plt.subplots(figsize=(1.0 * len(corr.names) + 2.5, 1.0 * len(corr.names) + 2))
    im = ax.imshow(corr.values, vmin=-1, vmax=1, cmap="RdBu_r")
    ax.set_xticks(range(len(corr.names)), corr.names, rotation=45, ha="right")
    ax.set_yticks(range(len(corr.names)), corr.names)
    for i in range(len(corr.names)):
        for j in range(len(corr.names)):
            v = corr.values[i, j]
            ax.text(j, i, "–" if np.isnan(v) else f"{v:.2f}", ha="center", va="center",
                    fontsize=9)
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title("Cross-correlation matrix")
    fig.tight_layout()
    path = outdir / "correlation_matrix.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def save_grid_figures(summaries, axis: str, outdir) -> list:
    """Line chart of rates over a parameter sweep, with guide lines at the
    balance alpha and at 0.5."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    xs = [getattr(s.config, axis) for s in summaries]
    series = [
        ("flag_rate", "balance flag rate"),
        ("unnecessary_flag_rate", "unnecessary flag rate"),
        ("naive_power_or_type1", "naive rejection rate"),
        ("adjusted_power_or_type1", "adjusted rejection rate"),
    ]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for attr, label in series:
        ax.plot(xs, [getattr(s, attr) for s in summaries], marker="o", label=label)
    alpha = summaries[0].config.alpha_balance
    ax.axhline(alpha, color="gray", ls=":", lw=1, label=f"alpha = {alpha:g}")
    ax.axhline(0.5, color="firebrick", ls="--", lw=1, label="50% guide")
    ax.set_xlabel(axis)
    ax.set_ylabel("rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    ax.set_title(f"Monte Carlo rates vs {axis}")
    fig.tight_layout()
    path = outdir / f"rates_vs_{axis}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]
