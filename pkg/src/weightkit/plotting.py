"""Figures for CLI reports, rendered off-screen to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_analysis(report: dict, path: str) -> str:
    """Term ranks and homology of one analysed complex.

    ``report`` is the JSON form produced by ``weightkit analyze``: the left
    panel shows ranks by cohomological degree, the right one free rank and
    torsion count of ``H_j`` by weight ``j``.
    """
    cx = report["complex"]
    lo, dims = cx["lo"], cx["dims"]
    degs = list(range(lo, lo + len(dims)))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax1.bar(degs, dims, color="#4477aa")
    ax1.set_xlabel("degree")
    ax1.set_ylabel("rank")
    ax1.set_title(f"terms of {report['name']}")
    if degs:
        ax1.set_xticks(degs)

    hom = report["homology"]
    js = sorted(int(j) for j in hom)
    free = [hom[str(j)]["rank"] for j in js]
    tors = [len(hom[str(j)]["torsion"]) for j in js]
    width = 0.4
    ax2.bar([j - width / 2 for j in js], free, width, label="free rank", color="#228833")
    ax2.bar([j + width / 2 for j in js], tors, width, label="torsion summands", color="#ee6677")
    ax2.set_xlabel("weight j")
    ax2.set_title("homology H_j")
    if js:
        ax2.set_xticks(js)
    ax2.legend(frameon=False, fontsize=8)
    for ax in (ax1, ax2):
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_battery(report: dict, path: str) -> str:
    """Checks, failures and counted statistics of a battery run."""
    stats = {k: v for k, v in report.get("stats", {}).items() if isinstance(v, (int, float))}
    labels = ["checks", "failures"] + list(stats)
    values = [report["checks"], len(report["failures"])] + list(stats.values())
    colors = ["#4477aa", "#ee6677"] + ["#bbbbbb"] * len(stats)
    fig, ax = plt.subplots(figsize=(max(5, 1.2 * len(labels)), 3.6))
    ax.bar(range(len(labels)), values, color=colors)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    verdict = "pass" if report["passed"] else "FAIL"
    ax.set_title(f"{report['battery']}: {verdict} ({report['elapsed_seconds']} s)")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
