"""Compare heuristic seed rankings against the simulated ground truth.

Heuristics rank actors by structure only (degree, neighborhood size, and
their single-discount variants). The evaluator scores a predicted ranking
by the relative cumulated sps of its top-k prefixes.
"""

from spreadnet import evaluation as ev
from spreadnet import netgen, rankers
from spreadnet import pipeline as pl
from spreadnet.micm import Protocol

net = netgen.generate(netgen.GenSpec("pa", 3, 120, seed=11, pa_attach_m=6))
grid = pl.GridSpec(protocols=(Protocol.AND,), pis=pl.FEASIBLE_AND,
                   repetitions=10,
                   feasible_pis={Protocol.AND: pl.FEASIBLE_AND})
table = pl.build_sps_table(net, grid, Protocol.AND, 2, "demo")
truth = rankers.rank_ground_truth(table)

candidates = [
    rankers.rank_degree(net),
    rankers.rank_neighborhood(net),
    rankers.rank_degree_discount(net),
    rankers.rank_neighborhood_discount(net),
    rankers.rank_random(net, seed=0),
]

print(f"{'predictor':12s} {'T_val':>6s} {'S_val':>6s} {'S_auc':>6s} {'F_auc':>6s}")
for ranking in candidates:
    r = ev.evaluate(truth, ranking, table)
    print(f"{ranking.predictor:12s} {r.t_val:6.3f} {r.s_val:6.3f} "
          f"{r.s_auc:6.3f} {r.f_auc:6.3f}")

# per-k curves can be resampled to a common grid and averaged across networks
best = ev.evaluate(truth, candidates[0], table)
grid_x, mean_y = ev.aggregate_curves([best.curve], grid_size=10)
print("deg-c relative-score curve (10-point resample):")
print("  ", [round(y, 3) for y in mean_y])
