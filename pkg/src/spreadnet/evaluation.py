"""Evaluation of predicted rankings against spreading-potential ground truth.

All metrics are built on the relative cumulated score curve: for each
prefix size k, the ground-truth score sum of the predicted top-k divided
by that of the true top-k.  The four headline metrics read the curve at
the top position (T_val), at the 80th-percentile saddle rank (S_val), and
as means up to the saddle (S_auc) and over the full ranking (F_auc); the
means keep both areas inside [0, 1].  Prefix precision and Jaccard
averages are reported at the same three levels.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np


class ActorSetMismatchError(ValueError):
    def __init__(self, only_true, only_pred):
        self.only_true = sorted(only_true)
        self.only_pred = sorted(only_pred)
        super().__init__(
            "rankings cover different actor sets; "
            f"only in truth: {self.only_true}, only in prediction: {self.only_pred}"
        )


@dataclass(frozen=True)
class EvalReport:
    network: str
    predictor: str
    t_val: float
    s_auc: float
    s_val: float
    f_auc: float
    precision_t: float
    precision_s: float
    precision_f: float
    jaccard_t: float
    jaccard_s: float
    jaccard_f: float
    saddle_k: int
    curve: tuple = field(repr=False)  # ((k_tilde, y_rel), ...) with |A| points
    flags: tuple = ()

    def metrics(self):
        return {
            "T_val": self.t_val,
            "S_auc": self.s_auc,
            "S_val": self.s_val,
            "F_auc": self.f_auc,
            "precision_T": self.precision_t,
            "precision_S": self.precision_s,
            "precision_F": self.precision_f,
            "jaccard_T": self.jaccard_t,
            "jaccard_S": self.jaccard_s,
            "jaccard_F": self.jaccard_f,
        }


def _sps_by_actor(sps_table):
    return np.asarray(sps_table.sps, dtype=float)


def cumulated_score(ranking, sps_table, k):
    """Ground-truth sps sum of the first k actors of the ranking."""
    n = sps_table.n_actors
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    values = _sps_by_actor(sps_table)
    return float(values[list(ranking.actors[:k])].sum())


def relative_score(r_true, r_pred, sps_table, k):
    """cumulated_score(pred, k) / cumulated_score(true, k); a zero
    denominator counts as a vacuously perfect prediction (1.0)."""
    denom = cumulated_score(r_true, sps_table, k)
    if denom == 0.0:
        return 1.0
    return cumulated_score(r_pred, sps_table, k) / denom


def _rel_curve(true_actors, pred_actors, values):
    true_prefix = np.cumsum(values[true_actors])
    pred_prefix = np.cumsum(values[pred_actors])
    zero_denoms = true_prefix == 0.0
    safe = np.where(zero_denoms, 1.0, true_prefix)
    y = np.where(zero_denoms, 1.0, pred_prefix / safe)
    return y, bool(zero_denoms.any())


def _prefix_overlap_means(true_actors, pred_actors, ks):
    """Mean prefix precision and Jaccard up to each cut in ks."""
    n = len(true_actors)
    in_true = np.zeros(n, dtype=bool)
    in_pred = np.zeros(n, dtype=bool)
    inter = 0
    precision = np.empty(n)
    jaccard = np.empty(n)
    for k in range(1, n + 1):
        t, p = true_actors[k - 1], pred_actors[k - 1]
        if in_pred[t]:
            inter += 1
        in_true[t] = True
        if t != p and in_true[p]:
            inter += 1
        in_pred[p] = True
        if t == p:
            inter += 1
        union = 2 * k - inter
        precision[k - 1] = inter / k
        jaccard[k - 1] = inter / union
    pre = np.cumsum(precision) / np.arange(1, n + 1)
    jac = np.cumsum(jaccard) / np.arange(1, n + 1)
    return {k: (float(pre[k - 1]), float(jac[k - 1])) for k in ks}


def evaluate(r_true, r_pred, sps_table):
    """Score a predicted ranking against the ground-truth ranking."""
    true_set, pred_set = set(r_true.actors), set(r_pred.actors)
    if true_set != pred_set:
        raise ActorSetMismatchError(true_set - pred_set, pred_set - true_set)
    n = sps_table.n_actors
    table_set = set(range(n))
    if true_set != table_set:
        raise ActorSetMismatchError(table_set - true_set, true_set - table_set)
    values = _sps_by_actor(sps_table)
    true_actors = np.array(r_true.actors)
    pred_actors = np.array(r_pred.actors)
    y, had_zero_denominator = _rel_curve(true_actors, pred_actors, values)
    k_s = sps_table.saddle_rank
    overlaps = _prefix_overlap_means(true_actors, pred_actors, (1, k_s, n))
    k_tilde = (np.arange(1, n + 1)) / n
    flags = ("zero-denominator",) if had_zero_denominator else ()
    return EvalReport(
        network=sps_table.network,
        predictor=r_pred.predictor,
        t_val=float(y[0]),
        s_auc=float(y[:k_s].mean()),
        s_val=float(y[k_s - 1]),
        f_auc=float(y.mean()),
        precision_t=overlaps[1][0],
        precision_s=overlaps[k_s][0],
        precision_f=overlaps[n][0],
        jaccard_t=overlaps[1][1],
        jaccard_s=overlaps[k_s][1],
        jaccard_f=overlaps[n][1],
        saddle_k=k_s,
        curve=tuple(zip(k_tilde.tolist(), y.tolist())),
        flags=flags,
    )


def write_report(report, path):
    payload = {
        "network": report.network,
        "predictor": report.predictor,
        "saddle_k": report.saddle_k,
        "metrics": report.metrics(),
        "flags": list(report.flags),
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def emit_curve(report, path):
    """Write the (k_tilde, y_rel) curve as CSV with a metadata header."""
    lines = [
        f"# network={report.network}",
        f"# predictor={report.predictor}",
        "k_tilde,y_rel",
    ]
    for kt, y in report.curve:
        lines.append(f"{format(kt, '.9g')},{format(y, '.9g')}")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def resample_curve(curve, grid_size=1000):
    """Step-interpolate a curve onto a common k_tilde grid so curves from
    networks of different size can be averaged pointwise."""
    ks = np.array([kt for kt, _ in curve])
    ys = np.array([y for _, y in curve])
    grid = np.arange(1, grid_size + 1) / grid_size
    idx = np.searchsorted(ks, grid, side="left").clip(0, len(ks) - 1)
    return grid, ys[idx]


def aggregate_curves(curves, grid_size=1000):
    """Pointwise mean of resampled curves; returns (grid, mean_y)."""
    if not curves:
        raise ValueError("no curves to aggregate")
    acc = None
    for curve in curves:
        grid, y = resample_curve(curve, grid_size)
        acc = y if acc is None else acc + y
    return grid, acc / len(curves)
