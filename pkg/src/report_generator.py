# src/report_generator.py
import os
import sys
from datetime import datetime
from html import escape

import pandas as pd

from config import OUTPUT_DIR
from verify import IdentityReport, SweepSummary, reports_frame

MAX_FAILURE_CARDS = 50

STYLE = """
        * { margin: 0; padding: 0; box-sizing: border-box; }
        body { font-family: system-ui, sans-serif; color: #1f2933; background: #eef2f6; padding: 24px; }
        .sheet { max-width: 1100px; margin: 0 auto; background: #fff; border-radius: 12px; overflow: hidden; }
        .banner { background: #102a43; color: #f0f4f8; padding: 36px 40px; }
        .banner h1 { font-size: 2em; }
        .banner p { color: #9fb3c8; margin-top: 6px; }
        .tiles { display: grid; grid-template-columns: repeat(auto-fit, minmax(180px, 1fr)); gap: 16px; padding: 28px 40px; background: #f0f4f8; }
        .tile { background: #fff; border-radius: 10px; padding: 18px; text-align: center; }
        .tile .num { font-size: 2.4em; font-weight: 800; color: #102a43; }
        .tile .num.bad { color: #c62828; }
        .tile .label { color: #627d98; font-weight: 600; }
        .body { padding: 36px 40px; }
        h2 { font-size: 1.5em; color: #102a43; margin: 8px 0 18px; border-bottom: 2px solid #d9e2ec; padding-bottom: 8px; }
        table { width: 100%; border-collapse: collapse; margin-bottom: 36px; }
        th, td { padding: 8px 10px; text-align: left; border-bottom: 1px solid #d9e2ec; font-size: 0.95em; }
        th { color: #627d98; }
        tr.fail td { background: #fdecea; }
        .point { border-left: 5px solid #f0b429; background: #fffbea; border-radius: 8px; padding: 18px 22px; margin-bottom: 16px; }
        .point.error { border-left-color: #c62828; background: #fdecea; }
        .point-head { display: flex; justify-content: space-between; font-weight: 700; margin-bottom: 10px; }
        .badge { border-radius: 12px; padding: 2px 12px; color: #fff; background: #f0b429; font-size: 0.85em; }
        .point.error .badge { background: #c62828; }
        .point dl { display: grid; grid-template-columns: 140px 1fr; gap: 4px 12px; font-family: monospace; word-break: break-all; }
        .point dt { color: #627d98; font-family: system-ui, sans-serif; }
        .ok { color: #2f8132; font-weight: 700; }
        .foot { padding: 18px 40px; color: #829ab1; background: #f0f4f8; font-size: 0.9em; }
"""


def write_reports_csv(reports_by_id, output_dir=OUTPUT_DIR):
    """All sweep points in one CSV, one row per point."""
    os.makedirs(output_dir, exist_ok=True)
    frames = [reports_frame(reports) for reports in reports_by_id.values() if reports]
    df = pd.concat(frames, ignore_index=True) if frames else reports_frame([])
    output_path = os.path.join(output_dir, "sweep_reports.csv")
    df.to_csv(output_path, index=False)
    print(f"   ✓ {len(df)} points → {output_path}", file=sys.stderr)
    return output_path


def _fmt(value, spec=".3e"):
    if value is None or (isinstance(value, float) and pd.isna(value)):
        return "–"
    if isinstance(value, complex):
        return f"{value.real:{spec}} {value.imag:+{spec}}i"
    return f"{value:{spec}}"


def _summary_rows(summary: SweepSummary, reports_by_id) -> str:
    rows = ""
    for row in summary.rows:
        resids = [r.rel_resid for r in reports_by_id.get(row["id"], []) if r.rel_resid is not None]
        worst = max(resids) if resids else None
        css = "fail" if row["failed"] else "pass"
        rows += (
            f'<tr class="{css}"><td>{escape(row["id"])}</td><td>{row["points"]}</td>'
            f'<td>{row["passed"]}</td><td>{row["failed"]}</td><td>{row["errored"]}</td>'
            f"<td>{_fmt(worst)}</td></tr>\n"
        )
    return rows


def _failure_card(report: IdentityReport) -> str:
    params = ", ".join(f"{escape(k)} = {_fmt(complex(v), '.6g')}" for k, v in report.params.items())
    reason = f"<dt>Reason</dt><dd>{escape(report.reason)}</dd>" if report.reason else ""
    return f"""
            <div class="point{' error' if report.reason else ''}">
                <div class="point-head">
                    <span>{escape(report.id)} · point {report.point_index}</span>
                    <span class="badge">{"ERROR" if report.reason else "RESIDUAL"}</span>
                </div>
                <dl>
                    <dt>q</dt><dd>{_fmt(report.q, '.6g') if report.q is not None else "–"}</dd>
                    <dt>Seed</dt><dd>{report.seed}</dd>
                    <dt>Parameters</dt><dd>{params or "–"}</dd>
                    <dt>lhs</dt><dd>{_fmt(report.lhs, '.15g')}</dd>
                    <dt>rhs</dt><dd>{_fmt(report.rhs, '.15g')}</dd>
                    <dt>Rel. residual</dt><dd>{_fmt(report.rel_resid)} (tol {_fmt(report.tolerance, '.0e')})</dd>
                    {reason}
                </dl>
            </div>"""


def _tile(value, label, bad=False) -> str:
    return f'<div class="tile"><div class="num{" bad" if bad else ""}">{value}</div><div class="label">{label}</div></div>'


def generate_html_report(reports_by_id, summary: SweepSummary, output_dir=OUTPUT_DIR):
    """
    Sweep summary table plus one card per failing point.
    Reads nothing from disk; everything comes from the in-memory reports.
    """
    os.makedirs(output_dir, exist_ok=True)

    total_points = sum(row["points"] for row in summary.rows)
    total_passed = sum(row["passed"] for row in summary.rows)
    total_errored = sum(row["errored"] for row in summary.rows)
    failures = [r for reports in reports_by_id.values() for r in reports if not r.passed]

    tiles = "".join([
        _tile(len(summary.rows), "Identities"),
        _tile(f"{total_passed}/{total_points}", "Points passed"),
        _tile(len(failures), "Failing points", bad=bool(failures)),
        _tile(total_errored, "Evaluation errors", bad=bool(total_errored)),
    ])

    cards = "".join(_failure_card(r) for r in failures[:MAX_FAILURE_CARDS])
    if not failures:
        cards = '<p class="ok">Every point passed.</p>'
    elif len(failures) > MAX_FAILURE_CARDS:
        cards += f"<p>{len(failures) - MAX_FAILURE_CARDS} more failing points in sweep_reports.csv</p>"

    html = f"""<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>Identity Verification Report</title>
    <style>{STYLE}</style>
</head>
<body>
    <div class="sheet">
        <div class="banner">
            <h1>Identity Verification Report</h1>
            <p>Both sides of each identity evaluated at seeded random parameters</p>
        </div>
        <div class="tiles">{tiles}</div>
        <div class="body">
            <h2>Per-identity summary</h2>
            <table>
                <tr><th>Identity</th><th>Points</th><th>Passed</th><th>Failed</th><th>Errored</th><th>Worst rel. residual</th></tr>
                {_summary_rows(summary, reports_by_id)}
            </table>
            <h2>Failing points</h2>
            {cards}
        </div>
        <div class="foot">Generated on {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}</div>
    </div>
</body>
</html>
"""

    output_path = os.path.join(output_dir, "verification_report.html")
    with open(output_path, "w", encoding="utf-8") as f:
        f.write(html)

    print(f"✅ Report generated → {output_path}", file=sys.stderr)
    print(f"   📊 {len(failures)} failing points included", file=sys.stderr)
    return output_path
