import numpy as np
import pytest
import torch

from spreadnet import evaluation as ev
from spreadnet import rankers

from tsnet.config import TsNetConfig
from tsnet.data import (NetworkGraph, load_targets, sample_subgraph,
                        target_scalar)
from tsnet.model import TsNet, training_loss
from tsnet.training import (DatasetMismatchError, discover, f_auc,
                            load_checkpoint, model_ranking, predict_ranking,
                            train)
from tests.conftest import build_table, make_dataset, pa_graph, small_config


def test_gradient_check_fusion_weight():
    torch.manual_seed(2)
    net, graph = pa_graph(n=5, seed=2, m=2)
    model = TsNet(small_config(hidden_dim=8, head_hidden=4)).double()
    model.eval()
    targets = np.random.default_rng(0).random((5, 4))

    w = model.fusion.weight.weight
    loss = training_loss(model, graph, targets)
    (analytic,) = torch.autograd.grad(loss, w)
    analytic = analytic.detach().numpy().ravel()

    eps = 1e-6
    numeric = np.zeros_like(analytic)
    with torch.no_grad():
        for i in range(w.numel()):
            orig = float(w.view(-1)[i])
            w.view(-1)[i] = orig + eps
            up = float(training_loss(model, graph, targets))
            w.view(-1)[i] = orig - eps
            down = float(training_loss(model, graph, targets))
            w.view(-1)[i] = orig
            numeric[i] = (up - down) / (2 * eps)
    rel = np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric),
                                                   1e-12)
    assert rel < 1e-4


def test_loss_decreases_on_tiny_corpus(tmp_path):
    corpus, dataset = make_dataset(tmp_path, 5, 30, net_seed0=50,
                                   table_seed=1, reps=3, m=3)
    cfg = small_config(epochs=5, seed=0)
    _, log = train(str(dataset), str(corpus), cfg, str(tmp_path / "c.pt"),
                   val_count=0, progress=lambda s: None)
    assert log["epochs"][4]["train_loss"] < log["epochs"][0]["train_loss"]


def test_seed_determinism_epoch1_loss(tmp_path):
    corpus, dataset = make_dataset(tmp_path, 2, 25, net_seed0=60,
                                   table_seed=1, reps=3, m=3)
    losses = []
    for run in range(2):
        cfg = small_config(epochs=1, seed=7)
        _, log = train(str(dataset), str(corpus), cfg,
                       str(tmp_path / f"c{run}.pt"), val_count=0,
                       progress=lambda s: None)
        losses.append(log["epochs"][0]["train_loss"])
    assert abs(losses[0] - losses[1]) < 1e-6


def test_discover_mismatch_lists_missing(tmp_path):
    corpus, dataset = make_dataset(tmp_path, 1, 20, net_seed0=70,
                                   table_seed=1, reps=3, m=3)
    (corpus / "n0.mln").unlink()
    with pytest.raises(DatasetMismatchError) as exc:
        discover(str(dataset), str(corpus), small_config())
    assert "n0" in str(exc.value)


def test_predict_ranking_is_permutation_and_evaluable(tmp_path):
    corpus, dataset = make_dataset(tmp_path, 1, 30, net_seed0=80,
                                   table_seed=1, reps=3, m=3)
    cfg = small_config(epochs=2, seed=0)
    model, _ = train(str(dataset), str(corpus), cfg, str(tmp_path / "c.pt"),
                     val_count=0, progress=lambda s: None)
    out = tmp_path / "ranking.csv"
    ranking = predict_ranking(model, corpus / "n0.mln", out)
    assert sorted(ranking.actors) == list(range(30))
    back = rankers.read_ranking(str(out))
    assert back.actors == ranking.actors
    ex = discover(str(dataset), str(corpus), cfg)[0]
    report = ev.evaluate(rankers.rank_ground_truth(ex.table), back, ex.table)
    assert 0.0 <= report.f_auc <= 1.0


def test_checkpoint_roundtrip(tmp_path):
    corpus, dataset = make_dataset(tmp_path, 1, 20, net_seed0=90,
                                   table_seed=1, reps=3, m=3)
    cfg = small_config(epochs=1, seed=0)
    model, _ = train(str(dataset), str(corpus), cfg, str(tmp_path / "c.pt"),
                     val_count=0, progress=lambda s: None)
    loaded, log = load_checkpoint(tmp_path / "c.pt")
    assert loaded.config == cfg
    assert log["epochs"]
    ex = discover(str(dataset), str(corpus), cfg)[0]
    assert model_ranking(loaded, ex).actors == model_ranking(model, ex).actors


def test_neighbor_sampling_bounds_subgraph():
    _, graph = pa_graph(n=60, seed=3, m=3)
    rng = np.random.default_rng(0)
    seeds = [0, 1, 2]
    sub, local = sample_subgraph(graph, seeds, [2, 1], rng)
    assert len(local) == 3
    # hop bound: 3 seeds + at most 3*2 first-hop + 6*1 second-hop
    assert sub.n_actors <= 3 + 6 + 6
    assert sub.n_layers == graph.n_layers


def test_training_with_sampling_threshold(tmp_path):
    # force the neighbor-sampling path on a small network
    corpus, dataset = make_dataset(tmp_path, 1, 40, net_seed0=95,
                                   table_seed=1, reps=3, m=3)
    cfg = small_config(epochs=2, seed=0, sample_threshold=10, batch_size=8,
                       fanout=4)
    model, log = train(str(dataset), str(corpus), cfg, str(tmp_path / "c.pt"),
                       val_count=0, progress=lambda s: None)
    assert np.isfinite(log["epochs"][-1]["train_loss"])


def test_target_scalar_range():
    t = np.random.default_rng(0).random((20, 4))
    s = target_scalar(t)
    assert torch.all(s >= 0) and torch.all(s <= 1)


def test_load_targets_transform(tmp_path):
    from spreadnet import pipeline as pl

    net, _ = pa_graph(n=20, seed=6, m=3)
    table = build_table(net, "t", reps=3)
    path = tmp_path / "t__and.csv"
    pl.write_sps_csv(table, str(path))
    raw, sps = load_targets(path, "none")
    scat, _ = load_targets(path, "scatter")
    assert np.allclose(scat, pl.scatter(raw))
    assert np.allclose(sps, table.sps)
