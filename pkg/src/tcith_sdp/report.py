"""Size-table reproduction (text / CSV / JSON) and the matching figures."""

import csv
import io
import json

from . import params

COLUMNS = ("id", "tau", "N", "w", "sym_bits", "wit_bits", "rel_bits",
           "computed", "published", "diff")


def size_rows(table):
    rows = []
    for ps in params.table_sets(table):
        br = params.signature_size(ps)
        diff = None if ps.table_bytes is None else br.total_bytes - ps.table_bytes
        rows.append({
            "id": ps.id, "tau": ps.tau, "N": ps.N, "w": ps.w,
            "sym_bits": round(br.sym_bits, 2), "wit_bits": round(br.wit_bits, 2),
            "rel_bits": round(br.rel_bits, 2),
            "computed": br.total_bytes, "published": ps.table_bytes, "diff": diff,
        })
    return rows


def render(rows, fmt="text"):
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    cells = [[str(c) for c in COLUMNS]]
    for row in rows:
        cells.append(["" if row[c] is None else (f"{row[c]:+d}" if c == "diff" else str(row[c]))
                      for c in COLUMNS])
    widths = [max(len(r[i]) for r in cells) for i in range(len(COLUMNS))]
    lines = []
    for n, r in enumerate(cells):
        lines.append("  ".join(v.ljust(wd) if i == 0 else v.rjust(wd)
                               for i, (v, wd) in enumerate(zip(r, widths))))
        if n == 0:
            lines.append("  ".join("-" * wd for wd in widths))
    return "\n".join(lines) + "\n"


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def size_figure(rows, path, title=None):
    """Stacked bars of the three size components, published totals as markers."""
    plt = _pyplot()
    labels = [r["id"] for r in rows]
    x = range(len(rows))
    sym = [r["sym_bits"] / 8 for r in rows]
    wit = [r["wit_bits"] / 8 for r in rows]
    rel = [r["rel_bits"] / 8 for r in rows]
    fig, ax = plt.subplots(figsize=(9, 4.5))
    ax.bar(x, sym, label="symmetric part", color="#4c72b0")
    ax.bar(x, wit, bottom=sym, label="witness offsets", color="#dd8452")
    ax.bar(x, rel, bottom=[a + b for a, b in zip(sym, wit)], label="relation polynomials",
           color="#55a868")
    pub = [r["published"] for r in rows]
    if all(v is not None for v in pub):
        ax.scatter(list(x), pub, marker="_", s=300, color="black", zorder=3,
                   label="published total")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("signature size (bytes)")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def bench_figure(results, path):
    """Grouped bars of mean sign and verify time per parameter set."""
    plt = _pyplot()
    labels = [r["id"] for r in results]
    x = list(range(len(results)))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - 0.2 for i in x], [r["sign_ms"] for r in results], width=0.4, label="sign")
    ax.bar([i + 0.2 for i in x], [r["verify_ms"] for r in results], width=0.4, label="verify")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("mean time (ms)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
