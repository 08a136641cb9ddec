"""Text serialization of time series, regime reports and sweeps.

Numbers are written with 12 significant digits so that ``I = C + D``
survives a round trip to 1e-9.
"""
from __future__ import annotations

import csv
import io
import json

import numpy as np

from .dynamics import Trajectory
from .regimes import BasisLabel, RegimeReport, _signs

COLUMNS = ("t", "b", "c", "C", "D", "I", "S", "basis")
SUMMARY_COLUMNS = (
    "tau", "n_crossings", "n_plateaus", "metastable_count", "asymptotic_basis",
    "crossings", "plateaus", "entropy_maxima", "tau_star", "error",
)


def fmt(x):
    return f"{float(x):.12g}"


def _round(x):
    return float(fmt(x))


def _rounded(obj):
    if isinstance(obj, float):
        return _round(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def result_rows(traj: Trajectory):
    """One ``(t, b, c, C, D, I, S, basis)`` row per grid time."""
    series = traj.series()
    margin = abs(2 * traj.p - 1) - (traj.b + traj.c)
    labels = {1: BasisLabel.SIGMA_Z.value, -1: BasisLabel.SIGMA_X.value, 0: BasisLabel.DEGENERATE.value}
    cols = [traj.t, traj.b, traj.c, series["C"], series["D"], series["I"], series["S"]]
    data = np.vstack([np.broadcast_to(np.asarray(c, float), traj.t.shape) for c in cols]).T
    if not np.all(np.isfinite(data)):
        raise FloatingPointError("non-finite value in result rows")
    return [(*row, labels[int(s)]) for row, s in zip(data, _signs(margin))]


def series_csv(rows):
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row[:-1]) + "," + row[-1] + "\n")
    return buf.getvalue()


def read_series_csv(text):
    """Parse :func:`series_csv` output into a dict of columns."""
    reader = csv.DictReader(io.StringIO(text))
    out = {k: [] for k in COLUMNS}
    for rec in reader:
        for k in COLUMNS:
            out[k].append(rec[k] if k == "basis" else float(rec[k]))
    return out


def dumps_json(obj):
    return json.dumps(_rounded(obj), indent=2, sort_keys=True) + "\n"


def series_report(rows, report: RegimeReport, config: dict):
    return dumps_json({
        "config": config,
        "columns": list(COLUMNS),
        "rows": [list(r) for r in rows],
        "regimes": report.to_dict(),
    })


def _join(values):
    return " ".join(fmt(v) for v in values)


def summary_csv(entries, tau_star=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    ts = "" if tau_star is None else fmt(tau_star)
    for e in entries:
        r = e.report
        if r is None:
            w.writerow([fmt(e.tau), "", "", "", "", "", "", "", ts, e.error])
            continue
        w.writerow([
            fmt(e.tau), len(r.crossings), len(r.plateaus), r.metastable_count,
            r.asymptotic_basis.value, _join(r.crossings),
            " ".join(f"{fmt(a)}:{fmt(b)}" for a, b in r.plateaus),
            _join(r.entropy_maxima), ts, "",
        ])
    return buf.getvalue()


def sweep_report(entries, p, tau_star, tau_estimate, config: dict):
    return dumps_json({
        "config": config,
        "p": p,
        "tau_star": tau_star,
        "tau_estimate_16pi": tau_estimate,
        "entries": [
            {"tau": e.tau, "report": None if e.report is None else e.report.to_dict(), "error": e.error}
            for e in entries
        ],
    })


PLOT_TEMPLATE = '''\
"""Plot C, D and S from {data} in the layout of the correlation figures."""
import csv

import matplotlib.pyplot as plt

with open({data!r}) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(t, [float(r["C"]) for r in rows], "r-", label="classical correlation")
ax.plot(t, [float(r["D"]) for r in rows], "b--", label="quantum discord")
ax.plot(t, [float(r["S"]) for r in rows], "k-", lw=0.8, label="entropy")
ax.set_xscale("log")
ax.set_xlim(max(t[1], 1e-2), t[-1])
ax.set_xlabel("t  [a_B / s]")
ax.set_ylabel("bits")
ax.set_title({title!r})
ax.legend(frameon=False)
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
'''


def plot_script(data_path, png_path, title):
    return PLOT_TEMPLATE.format(data=str(data_path), png=str(png_path), title=title)
