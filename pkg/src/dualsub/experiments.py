"""Experiment drivers: dimension reduction, sufficient dimension reduction
and the PCA contrast. Each driver writes CSV files into ``cfg.output_dir``
and returns its result rows.
"""

import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import datagen
from .alternating import accuracy, run_alternating
from .baselines import pca
from .objective import empirical_char_fn, sdr_target
from .plotting import line_chart
from .spectral import Projector

log = logging.getLogger(__name__)

DIAG = datagen.DIAGONAL
HIT = 0.9


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else f"{float(value):.12g}"
    return str(value)


def write_csv(path, rows, columns):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in columns])


def _workers():
    try:
        return max(1, int(os.environ.get("SUBSPACE_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, jobs):
    """Run independent sweep points, in parallel if SUBSPACE_THREADS > 1.

    Results come back in job order, so output files do not depend on the
    worker count.
    """
    workers = min(_workers(), len(jobs))
    if workers <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _axis_dots(v):
    v = np.asarray(v, dtype=float)
    return abs(v[0]), abs(v[1]), abs(v[:2] @ DIAG)


def _eig_columns(n):
    return [f"ev{i + 1}" for i in range(n)]


def _iteration_rows(run, p_true, extra):
    rows = []
    for rec in run.iterations:
        row = dict(extra)
        row.update(
            t=rec.t,
            inner_final_loss=rec.inner_final_loss,
            r_value=rec.r_value,
            trace_m=rec.trace_m,
            acc=accuracy(rec.projector, p_true) if p_true is not None else float("nan"),
        )
        row.update({f"ev{i + 1}": v for i, v in enumerate(rec.eigenvalues)})
        rows.append(row)
    return rows


# -- dimension reduction -----------------------------------------------------


def dr_dataset(cfg):
    if cfg.data_path:
        points = datagen.read_points(cfg.data_path)
        return datagen.DataSet(points, None, f"external {cfg.data_path}")
    if cfg.task == "dr-cross":
        return datagen.gen_cross_mixture(cfg.n, cfg.N, cfg.eps, cfg.seed_data)
    return datagen.gen_near_hyperplane(cfg.n, cfg.N, cfg.eps, cfg.seed_data, span=cfg.k)


def _truth_for(cfg, data):
    if data.true_projector is None:
        return None
    if cfg.task == "dr-cross":
        return Projector.coordinate(cfg.n, range(cfg.k))
    return data.true_projector if data.true_projector.k == cfg.k else None


def _dr_point(args):
    cfg, data = args
    p_true = _truth_for(cfg, data)
    start = time.perf_counter()
    run = run_alternating(empirical_char_fn(data.points), cfg)
    runtime = time.perf_counter() - start
    last = run.iterations[-1]
    row = {
        "lambda": cfg.lam[0],
        "theta": cfg.theta,
        "acc": accuracy(run.final_projector, p_true) if p_true is not None else float("nan"),
        "r_final": last.r_value,
        "trace_m_final": last.trace_m,
        "runtime_s": runtime,
    }
    if cfg.task == "dr-cross" and cfg.k == 1:
        row["dot_e1"], row["dot_e2"], row["dot_diag"] = _axis_dots(run.top_vectors[:, 0])
    iters = _iteration_rows(run, p_true, {"lambda": cfg.lam[0], "theta": cfg.theta})
    return row, iters, run


def run_dr(cfg, keep_runs=False):
    """Sweep lambda on a DR task (``dr`` or ``dr-cross``).

    Writes ``dr_results.csv`` (one row per lambda) and
    ``dr_iterations.csv`` (one row per lambda and outer iteration).
    Returns the result rows, plus the runs when ``keep_runs`` is set.
    """
    if cfg.task not in ("dr", "dr-cross"):
        raise ValueError(f"run_dr needs task dr or dr-cross, got {cfg.task}")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = dr_dataset(cfg)
    datagen.write_points(out / "dr_points.csv", data.points)

    jobs = [(cfg.replace(lam=[lam]), data) for lam in cfg.lam]
    results = _map(_dr_point, jobs)
    rows = [r for r, _, _ in results]
    iters = [row for _, it, _ in results for row in it]

    columns = ["lambda", "theta", "acc", "r_final", "trace_m_final", "runtime_s"]
    if cfg.task == "dr-cross" and cfg.k == 1:
        columns += ["dot_e1", "dot_e2", "dot_diag"]
    write_csv(out / "dr_results.csv", rows, columns)
    write_csv(
        out / "dr_iterations.csv",
        iters,
        ["lambda", "theta", "t", "inner_final_loss", "r_value", "trace_m", "acc"]
        + _eig_columns(cfg.n),
    )
    if cfg.plots:
        line_chart(
            out / "dr_acc_vs_lnlambda.svg",
            {f"theta={cfg.theta:g}": ([math.log(r["lambda"]) if r["lambda"] > 0 else float("nan")
                                       for r in rows], [r["acc"] for r in rows])},
            xlabel="ln(lambda)", ylabel="acc", title=f"{cfg.task}: accuracy vs ln(lambda)",
        )
    log.info("dr: %d lambda points written to %s", len(rows), out)
    if keep_runs:
        return rows, [run for _, _, run in results]
    return rows


# -- sufficient dimension reduction ------------------------------------------


def _sdr_point(cfg):
    p_true = Projector.coordinate(cfg.n, [0, 1]) if cfg.k == 2 else None
    start = time.perf_counter()
    run = run_alternating(sdr_target(cfg.C), cfg)
    runtime = time.perf_counter() - start
    last = run.iterations[-1]
    accs = run.accuracy_trace(p_true) if p_true is not None else [float("nan")] * cfg.T
    row = {
        "lambda": cfg.lam[0],
        "C": cfg.C,
        "M": cfg.M,
        "acc": accs[-1],
        "acc_t1": accs[0],
        "r_final": last.r_value,
        "trace_m_final": last.trace_m,
        "runtime_s": runtime,
    }
    iters = _iteration_rows(run, p_true, {"lambda": cfg.lam[0], "C": cfg.C, "M": cfg.M})
    return row, iters


def run_sdr(cfg):
    """Sweep (lambda, C, M) on the regression target.

    Accuracy is measured against span(e_1, e_2). Writes ``sdr_results.csv``
    and ``sdr_iterations.csv`` (the latter holds the per-iteration
    accuracy trace).
    """
    if cfg.task != "sdr":
        raise ValueError(f"run_sdr needs task sdr, got {cfg.task}")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    Cs = cfg.C_sweep or [cfg.C]
    Ms = cfg.M_sweep or [cfg.M]
    jobs = [cfg.replace(lam=[lam], C=C, M=M) for C in Cs for M in Ms for lam in cfg.lam]
    results = _map(_sdr_point, jobs)
    rows = [r for r, _ in results]
    write_csv(
        out / "sdr_results.csv",
        rows,
        ["lambda", "C", "M", "acc", "acc_t1", "r_final", "trace_m_final", "runtime_s"],
    )
    write_csv(
        out / "sdr_iterations.csv",
        [row for _, it in results for row in it],
        ["lambda", "C", "M", "t", "inner_final_loss", "r_value", "trace_m", "acc"]
        + _eig_columns(cfg.n),
    )
    if cfg.plots:
        series = {}
        for C in Cs:
            for M in Ms:
                sel = [r for r in rows if r["C"] == C and r["M"] == M]
                series[f"C={C:g} M={M}"] = (
                    [math.log(r["lambda"]) if r["lambda"] > 0 else float("nan") for r in sel],
                    [r["acc"] for r in sel],
                )
        line_chart(out / "sdr_acc_vs_lnlambda.svg", series, "ln(lambda)", "acc",
                   "sdr: accuracy vs ln(lambda)")
        if len(Ms) > 1:
            for lam in cfg.lam:
                sel = [r for r in rows if r["lambda"] == lam and r["C"] == Cs[0]]
                line_chart(out / f"sdr_acc_vs_M_lambda{lam:g}.svg",
                           {f"lambda={lam:g}": ([r["M"] for r in sel], [r["acc"] for r in sel])},
                           "M", "acc", "sdr: accuracy vs neurons")
        _, first_iters = results[0]
        line_chart(out / "sdr_acc_vs_t.svg",
                   {"acc": ([r["t"] for r in first_iters], [r["acc"] for r in first_iters])},
                   "t", "acc", "sdr: accuracy vs iteration")
    log.info("sdr: %d rows written to %s", len(rows), out)
    return rows


# -- PCA contrast ------------------------------------------------------------


def _pca_point(cfg):
    data = datagen.gen_cross_mixture(cfg.n, cfg.N, cfg.eps, cfg.seed_data)
    pc1 = pca(data.points).components[:, 0]
    run = run_alternating(empirical_char_fn(data.points), cfg.replace(k=1))
    v = run.top_vectors[:, 0]
    p1, p2, pd = _axis_dots(pc1)
    m1, m2, md = _axis_dots(v)
    return {
        "seed": cfg.seed_data,
        "pca_dot_e1": p1, "pca_dot_e2": p2, "pca_dot_diag": pd,
        "method_dot_e1": m1, "method_dot_e2": m2, "method_dot_diag": md,
        "method_axis": max(m1, m2),
    }


PCA_COLUMNS = ["seed", "pca_dot_e1", "pca_dot_e2", "pca_dot_diag",
               "method_dot_e1", "method_dot_e2", "method_dot_diag", "method_axis"]


def run_pca_compare(cfg):
    """PCA first component against the method's top vector on cross-mixture data.

    One detail row per data seed (``seed_data, seed_data + 1, ...``), then a
    summary row whose entries are the fraction of seeds with ``|dot| > 0.9``.
    Uses ``k = 1`` and the first lambda of the config.
    """
    if cfg.task != "dr-cross":
        raise ValueError(f"run_pca_compare needs task dr-cross, got {cfg.task}")
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [cfg.replace(seed_data=cfg.seed_data + i, seed_nodes=cfg.seed_nodes + i,
                        seed_model=cfg.seed_model + i, lam=cfg.lam[:1])
            for i in range(cfg.seeds)]
    rows = _map(_pca_point, jobs)
    summary = {"seed": "summary"}
    for col in PCA_COLUMNS[1:]:
        summary[col] = float(np.mean([r[col] > HIT for r in rows]))
    write_csv(out / "pca_compare.csv", rows + [summary], PCA_COLUMNS)
    log.info("pca-compare: %d seeds written to %s", len(rows), out)
    return rows, summary
