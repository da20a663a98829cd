import datetime
import json
import os
from dataclasses import asdict


def _pct(x, d=0):
    try:
        return f"{x:.{d}f}%"
    except (TypeError, ValueError):
        return str(x)


def console_summary(metrics, title="=== SELFTEST SUMMARY ===", extras=None):
    """One line per check."""
    width = max((len(k) for k in metrics), default=5)
    lines = [title]
    for name, m in metrics.items():
        lines.append(f"{name:<{width}} : {m['agreements']}/{m['trials']} agree "
                     f"({_pct(m['agreement_pct'], 1)}) | {m['seconds']:.2f}s")
    if extras:
        lines.append(extras)
    print("\n".join(lines))


def _table_rows(metrics):
    return [{
        "Check": name,
        "Trials": m["trials"],
        "Agreements": m["agreements"],
        "Agreement": _pct(m["agreement_pct"], 1),
        "Seconds": f"{m['seconds']:.2f}",
    } for name, m in metrics.items()]


def build_summary_sheet(outdir, metrics, specs=None, figs=None,
                        fname_md="result_sheet.md", fname_html="result_sheet.html"):
    """
    Result sheet for a selftest run: agreement table, parameters as JSON and
    any figures found on disk. figs maps a title to an image path.
    """
    os.makedirs(outdir, exist_ok=True)
    ts = datetime.datetime.now().strftime("%Y-%m-%d %H:%M")
    rows = _table_rows(metrics)
    headers = list(rows[0].keys()) if rows else ["Check"]
    total = sum(m["trials"] for m in metrics.values())
    agreed = sum(m["agreements"] for m in metrics.values())
    params = {name: asdict(spec) for name, spec in (specs or {}).items()}
    images = [(title, path) for title, path in (figs or {}).items() if path and os.path.exists(path)]

    # ===== Markdown =====
    md = ["# Quasiminimal Subshifts - Selftest Result Sheet", f"_Generated: {ts}_\n", "## Summary",
          f"- **{agreed}/{total}** trials agree across {len(metrics)} checks.\n", "## Checks",
          "| " + " | ".join(headers) + " |", "| " + " | ".join(["---"] * len(headers)) + " |"]
    for r in rows:
        md.append("| " + " | ".join(str(r[h]) for h in headers) + " |")
    md.append("")
    if params:
        md += ["## Parameters", "```json", json.dumps(params, indent=2, default=str), "```", ""]
    for title, p in images:
        md.append(f"## {title}")
        md.append(f"![{title}]({os.path.relpath(p, outdir).replace(os.sep, '/')})\n")

    md_path = os.path.join(outdir, fname_md)
    with open(md_path, "w", encoding="utf-8") as f:
        f.write("\n".join(md))

    # ===== HTML =====
    html = ["<!doctype html><html><head><meta charset='utf-8'>",
            "<title>Quasiminimal Subshifts - Selftest Result Sheet</title>",
            "<style>body{font-family:system-ui,Segoe UI,Arial,sans-serif;max-width:900px;margin:32px auto;line-height:1.45}",
            "h1,h2{margin-top:1.1em} table{border-collapse:collapse} th,td{border:1px solid #ddd;padding:6px 8px}",
            "img{max-width:100%;height:auto;border:1px solid #eee;padding:4px;border-radius:6px}",
            "code,pre{background:#f6f8fa;border:1px solid #e1e4e8;padding:8px;border-radius:6px}</style></head><body>",
            f"<h1>Quasiminimal Subshifts - Selftest Result Sheet</h1><p><em>Generated: {ts}</em></p>",
            f"<h2>Summary</h2><p><b>{agreed}/{total}</b> trials agree across {len(metrics)} checks.</p>",
            "<h2>Checks</h2><table><thead><tr>"]
    html += [f"<th>{h}</th>" for h in headers]
    html.append("</tr></thead><tbody>")
    for r in rows:
        html.append("<tr>" + "".join(f"<td>{r[h]}</td>" for h in headers) + "</tr>")
    html.append("</tbody></table>")
    if params:
        html += ["<h2>Parameters</h2><pre><code>", json.dumps(params, indent=2, default=str), "</code></pre>"]
    for title, p in images:
        rel = os.path.relpath(p, outdir).replace(os.sep, "/")
        html.append(f"<h2>{title}</h2><img src='{rel}' alt='{title}'>")
    html.append("</body></html>")

    html_path = os.path.join(outdir, fname_html)
    with open(html_path, "w", encoding="utf-8") as f:
        f.write("\n".join(html))
    return md_path, html_path
