"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; tolerances are fixed here, not calibrated at run time.
"""

import json
import math
import time

import numpy as np
import pytest

from spreadnet import evaluation as ev
from spreadnet import mln, netgen, rankers
from spreadnet import pipeline as pl
from spreadnet.cli import main
from spreadnet.micm import MicmConfig, Protocol, SpreadingPotential, simulate
from tests.conftest import random_network


def _report(name, started, budget):
    elapsed = time.monotonic() - started
    assert elapsed < budget, f"{name}: {elapsed:.1f}s exceeded {budget}s budget"
    print(f"PASS {name} ({elapsed:.1f}s)")


def test_micm_deterministic():
    started = time.monotonic()
    rng = np.random.default_rng(1)
    # pi=0: only the seed activates, on every network, from every seed
    for _ in range(3):
        net = random_network(rng, 10, 2, edge_prob=0.4)
        for a in range(net.n_actors):
            sp = simulate(net, MicmConfig(0.0, Protocol.OR, a, 7))
            assert sp == SpreadingPotential(1, 0, 1, 0)
            sp = simulate(net, MicmConfig(0.0, Protocol.AND, a, 7))
            assert sp == SpreadingPotential(1, 0, 1, 0)
    # pi=1, OR, connected single layer: exact full exposure
    ring = mln.MultilayerNetwork.build(
        [f"a{i}" for i in range(12)], ["l0"],
        {0: [(i, (i + 1) % 12) for i in range(12)]},
    )
    for a in range(12):
        assert simulate(ring, MicmConfig(1.0, Protocol.OR, a, 3)).p_ex == 12
    _report("MICM correctness (deterministic)", started, 1.0)


def test_micm_stochastic():
    started = time.monotonic()
    net = mln.MultilayerNetwork.build(
        ["a", "b", "c"], ["l0"], {0: [(0, 1), (1, 2)]}
    )
    total = 0
    for r in range(40000):
        from spreadnet.rng import derive_seed

        total += simulate(net, MicmConfig(0.5, Protocol.OR, 0,
                                          derive_seed(99, r))).p_ex
    mean = total / 40000
    assert abs(mean - 1.75) <= 0.02  # enumeration oracle: 0.5*1+0.25*2+0.25*3
    _report("MICM correctness (stochastic)", started, 10.0)


def test_and_gate_semantics():
    started = time.monotonic()
    # target present in two layers, active-side neighbor in only one
    presence = np.array([[True, False, True], [False, True, True]])
    net = mln.MultilayerNetwork.build(
        ["seed", "other", "target"], ["l0", "l1"],
        {0: [(0, 2)], 1: [(1, 2)]}, presence=presence,
    )
    for s in range(1000):
        sp = simulate(net, MicmConfig(1.0, Protocol.AND, 0, s))
        assert sp == SpreadingPotential(1, 0, 1, 0)
    _report("AND-gate semantics", started, 1.0)


def test_sps_and_scatter_formulas():
    started = time.monotonic()
    assert pl.sps([1, 0, 1, 0]) == pytest.approx(1.0, abs=1e-12)
    assert pl.sps([0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)
    assert pl.sps([1, 1, 1, 1]) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert pl.scatter(0.0) == pytest.approx(math.exp(-3), abs=1e-15)
    for x in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert abs(pl.inverse_scatter(pl.scatter(x)) - x) <= 1e-12
    _report("sps formula", started, 1.0)


def test_evaluator_laws():
    started = time.monotonic()
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(2, 21))
        scores = rng.random(n)
        if rng.random() < 0.05:
            scores[:] = 0.0  # exercise the zero-denominator guard
        value, k_s = pl.saddle_point(scores)
        table = pl.SpsTable("t", Protocol.AND, np.zeros((n, 4)),
                            np.zeros((n, 4)), scores, value, k_s)
        truth = rankers.rank_ground_truth(table)
        perm = rng.permutation(n).tolist()
        pred = rankers.Ranking("t", "p", tuple(perm),
                               tuple(float(n - i) for i in range(n)))
        report = ev.evaluate(truth, pred, table)
        ys = [y for _, y in report.curve]
        assert all(y <= 1.0 + 1e-12 for y in ys)
        assert ys[-1] == pytest.approx(1.0)
        for name, v in report.metrics().items():
            assert -1e-12 <= v <= 1.0 + 1e-12, name
        identity = ev.evaluate(truth, truth, table)
        assert all(v == pytest.approx(1.0) for v in identity.metrics().values())
    _report("Evaluator laws", started, 30.0)


def test_heuristic_oracle_equivalence():
    started = time.monotonic()
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(5, 61))
        layers = int(rng.integers(1, 5))
        net = random_network(rng, n, layers, edge_prob=0.1)

        deg = [(-net.actor_degree(a), a) for a in range(n)]
        assert list(rankers.rank_degree(net).actors) == [a for _, a in sorted(deg)]

        nghb = [(-len(net.neighborhood(a)), a) for a in range(n)]
        assert list(rankers.rank_neighborhood(net).actors) == \
            [a for _, a in sorted(nghb)]

        for ranker, base, tie in (
            (rankers.rank_degree_discount, net.actor_degree,
             lambda b, s: sum(1 for l in range(net.n_layers)
                              if b in net.neighbors(s, l))),
            (rankers.rank_neighborhood_discount,
             lambda a: len(net.neighborhood(a)),
             lambda b, s: 1 if b in net.neighborhood(s) else 0),
        ):
            scores = {a: base(a) for a in range(n)}
            remaining = set(scores)
            expected = []
            while remaining:
                best = min(remaining, key=lambda a: (-scores[a], a))
                expected.append(best)
                remaining.discard(best)
                for b in remaining:
                    scores[b] -= tie(b, best)
            assert list(ranker(net).actors) == expected
    _report("Heuristic oracle equivalence", started, 30.0)


def test_qualitative_ordering_deg_c_beats_random():
    started = time.monotonic()
    grid = pl.GridSpec(
        protocols=(Protocol.AND,), pis=pl.FEASIBLE_AND, repetitions=20,
        feasible_pis={Protocol.AND: pl.FEASIBLE_AND},
    )
    t_vals = {"deg-c": [], "random": []}
    f_aucs = {"deg-c": [], "random": []}
    for i in range(20):
        net = netgen.generate(netgen.GenSpec("pa", 3, 200, seed=9000 + i,
                                             pa_attach_m=8))
        table = pl.build_sps_table(net, grid, Protocol.AND, 5000 + i, f"pa{i}")
        truth = rankers.rank_ground_truth(table)
        for name, ranking in (("deg-c", rankers.rank_degree(net)),
                              ("random", rankers.rank_random(net, i))):
            report = ev.evaluate(truth, ranking, table)
            t_vals[name].append(report.t_val)
            f_aucs[name].append(report.f_auc)
    assert np.mean(t_vals["deg-c"]) > np.mean(t_vals["random"])
    assert np.mean(f_aucs["deg-c"]) > np.mean(f_aucs["random"])
    _report("Qualitative ordering (deg-c > random)", started, 900.0)


def test_scaling_linear_fit(tmp_path):
    started = time.monotonic()
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    # 10 ER networks, edge counts spanning 1x-16x
    for i, scale in enumerate(np.linspace(1.0, 16.0, 10)):
        net = netgen.generate(
            netgen.GenSpec("er", 2, 1000, seed=i, er_edge_prob=0.004 * scale)
        )
        mln.save_network(net, str(corpus / f"er{i}.mln"))
    out = tmp_path / "bench.csv"
    code = main(["bench", "--corpus", str(corpus), "--out", str(out),
                 "--protocols", "or", "--pis", "1.0", "--reps", "3",
                 "--seed", "1", "--jobs", "1"])
    assert code == 0
    fit = json.loads((tmp_path / "bench.csv.fit.json").read_text())
    assert fit["r_squared"] is not None and fit["r_squared"] >= 0.8
    _report("Scaling linear fit", started, 1200.0)


def test_reproducibility_byte_identical(tmp_path):
    started = time.monotonic()
    corpus = tmp_path / "corpus"
    main(["generate", "--model", "er", "--count", "2", "--seed", "4",
          "--out", str(corpus), "--layers", "2:3", "--actors", "10:14",
          "--er-prob", "0.3"])
    artifacts = {}
    for tag in ("one", "two"):
        d = tmp_path / tag
        d.mkdir()
        ds = d / "dataset"
        main(["dataset", "--corpus", str(corpus), "--out", str(ds),
              "--protocols", "and,or", "--reps", "5", "--seed", "6",
              "--pis", "0.2,0.9", "--feasible-and", "0.9",
              "--feasible-or", "0.2", "--jobs", "1"])
        sps = ds / "network-0__and.csv"
        truth = d / "truth.csv"
        main(["rank", "--method", "ground-truth", "--sps", str(sps),
              "--out", str(truth)])
        pred = d / "pred.csv"
        main(["rank", "--method", "random", "--seed", "6",
              "--net", str(corpus / "network-0.mln"), "--out", str(pred)])
        report = d / "report.json"
        curve = d / "curve.csv"
        main(["evaluate", "--truth", str(truth), "--pred", str(pred),
              "--sps", str(sps), "--out", str(report), "--curve", str(curve)])
        artifacts[tag] = {
            p.relative_to(d): p.read_bytes()
            for p in sorted(d.rglob("*"))
            if p.is_file() and "run_manifest" not in p.name
            and not p.name.endswith(".run.json")
        }
    assert artifacts["one"].keys() == artifacts["two"].keys()
    for key in artifacts["one"]:
        assert artifacts["one"][key] == artifacts["two"][key], key
    _report("Reproducibility", started, 120.0)
