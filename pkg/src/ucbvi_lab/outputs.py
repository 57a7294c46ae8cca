"""CSV, SVG and metadata emission for experiment results."""
from __future__ import annotations

import csv
import platform
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from . import __version__
from .environments import RNG_ALGORITHM
from .harness import AgentSummary, ExperimentResult, RegretTrace

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def fmt(value: float) -> str:
    return f"{value:.17g}"


def trace_filename(trace: RegretTrace) -> str:
    return f"trace_{trace.agent}_{trace.run}.csv"


def write_trace_csv(trace: RegretTrace, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["episode", "instant_regret", "cum_regret"])
        for k, r, c in zip(trace.episodes, trace.instant_regret, trace.cum_regret):
            w.writerow([int(k), fmt(r), fmt(c)])


def read_trace_csv(path: Path, agent: str = "", run: int = 0) -> RegretTrace:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return RegretTrace(
        agent=agent,
        run=run,
        episodes=np.array([int(r["episode"]) for r in rows]),
        instant_regret=np.array([float(r["instant_regret"]) for r in rows]),
        cum_regret=np.array([float(r["cum_regret"]) for r in rows]),
    )


def write_summary_csv(summary: dict[str, AgentSummary], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["episode", "agent", "mean_cum_regret", "ci_low", "ci_high"])
        for agent, s in summary.items():
            for k, m, lo, hi in zip(s.episodes, s.mean, s.ci_low, s.ci_high):
                w.writerow([int(k), agent, fmt(m), fmt(lo), fmt(hi)])


def regret_svg(summary: dict[str, AgentSummary], title: str = "", max_points: int = 400) -> str:
    """Line chart of mean cumulative regret with shaded 95% bands, linear axes."""
    width, height = 640, 420
    left, right, top, bottom = 70, 150, 40, 50
    pw, ph = width - left - right, height - top - bottom
    x_max = max(float(s.episodes[-1]) for s in summary.values())
    y_max = max(float(np.max(s.ci_high)) for s in summary.values())
    y_max = y_max if y_max > 0 else 1.0

    def sx(v):
        return left + pw * v / x_max

    def sy(v):
        return top + ph * (1.0 - v / y_max)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for i in range(6):
        xv, yv = x_max * i / 5, y_max * i / 5
        out.append(f'<text x="{sx(xv):.1f}" y="{top + ph + 18}" text-anchor="middle">{xv:.4g}</text>')
        out.append(f'<text x="{left - 6}" y="{sy(yv) + 4:.1f}" text-anchor="end">{yv:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">episode</text>')
    out.append(f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {top + ph / 2:.1f})">cumulative regret</text>')

    for j, (agent, s) in enumerate(summary.items()):
        color = _COLORS[j % len(_COLORS)]
        idx = np.unique(np.linspace(0, s.episodes.size - 1, min(max_points, s.episodes.size)).astype(int))
        xs, lo, hi, mean = s.episodes[idx], s.ci_low[idx], s.ci_high[idx], s.mean[idx]
        band = [f"{sx(x):.2f},{sy(v):.2f}" for x, v in zip(xs, hi)]
        band += [f"{sx(x):.2f},{sy(v):.2f}" for x, v in zip(xs[::-1], lo[::-1])]
        out.append(f'<polygon points="{" ".join(band)}" fill="{color}" fill-opacity="0.2" stroke="none"/>')
        line = " ".join(f"{sx(x):.2f},{sy(v):.2f}" for x, v in zip(xs, mean))
        out.append(f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = top + 16 * j + 10
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 35}" y="{ly + 4}">{escape(agent)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def meta_text(result: ExperimentResult) -> str:
    cfg = result.config
    lines = [
        f"ucbvi_lab_version = {__version__}",
        f"rng_algorithm = {RNG_ALGORITHM}",
        "cell_seed = SeedSequence([master_seed, crc32(agent), run])",
        f"numpy_version = {np.__version__}",
        f"python_version = {platform.python_version()}",
        "",
        cfg.to_text().rstrip("\n"),
    ]
    return "\n".join(lines) + "\n"


def emit_outputs(result: ExperimentResult, output_dir: str | Path) -> list[Path]:
    """Write per-cell traces, ``summary.csv``, ``regret.svg`` and ``meta.txt``."""
    if not result.traces:
        raise ValueError("no traces to write")
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    for trace in result.traces:
        p = out / trace_filename(trace)
        try:
            write_trace_csv(trace, p)
        except OSError as exc:
            raise OSError(f"writing trace for agent={trace.agent} run={trace.run}: {exc}") from exc
        written.append(p)
    cfg = result.config
    title = f"{cfg.env.kind} S={cfg.env.S} A={cfg.env.A} H={cfg.env.H} ({cfg.runs} runs, mean ± 95% CI)"
    for name, content in (("regret.svg", regret_svg(result.summary, title)), ("meta.txt", meta_text(result))):
        (out / name).write_text(content, encoding="utf-8")
        written.append(out / name)
    write_summary_csv(result.summary, out / "summary.csv")
    written.append(out / "summary.csv")
    return written
