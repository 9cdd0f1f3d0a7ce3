"""Training loop, checkpointing, and ranking export."""

import json
import pathlib
from dataclasses import dataclass

import numpy as np
import torch

from spreadnet import evaluation as ev
from spreadnet import pipeline as pl
from spreadnet import rankers

from tsnet.config import TsNetConfig
from tsnet.data import load_graph, load_targets, sample_subgraph
from tsnet.model import TsNet, predicted_scalar, training_loss


class DatasetMismatchError(ValueError):
    """Dataset CSVs without matching network files (or vice versa)."""


@dataclass
class Example:
    name: str
    graph: object
    targets: np.ndarray   # transformed, [A, 4]
    sps: np.ndarray       # ground-truth scalar, [A]
    table: object         # SpsTable, for validation metrics


def discover(dataset_dir, corpus_dir, config, protocol="and"):
    """Pair every ``<network>__<protocol>.csv`` with its ``.mln`` file."""
    dataset_dir = pathlib.Path(dataset_dir)
    corpus_dir = pathlib.Path(corpus_dir)
    examples = []
    missing = []
    for csv in sorted(dataset_dir.glob(f"*__{protocol}.csv")):
        name = csv.name[: -len(f"__{protocol}.csv")]
        net_path = corpus_dir / f"{name}.mln"
        if not net_path.exists():
            missing.append(name)
            continue
        targets, sps = load_targets(csv, config.transform)
        examples.append(Example(name, load_graph(net_path, name), targets,
                                sps, pl.read_sps_csv(str(csv))))
    if missing:
        raise DatasetMismatchError(
            f"dataset tables without network files: {', '.join(missing)}"
        )
    if not examples:
        raise DatasetMismatchError(
            f"no *__{protocol}.csv tables found in {dataset_dir}"
        )
    return examples


def model_ranking(model, example):
    """Deterministic full-graph ranking of one network (evaluation mode)."""
    was_training = model.training
    model.eval()
    with torch.no_grad():
        scores = predicted_scalar(model(example.graph)).double().numpy()
    if was_training:
        model.train()
    order = pl.ranking_order(scores)
    return rankers.Ranking(
        example.name, "ts-net", tuple(int(a) for a in order),
        tuple(float(scores[a]) for a in order),
        metadata={"model": "ts-net"},
    )


def f_auc(model, example):
    truth = rankers.rank_ground_truth(example.table)
    return ev.evaluate(truth, model_ranking(model, example),
                       example.table).f_auc


def _epoch_batches(example, config, rng):
    """Yield (graph, local_actor_ids, target_rows) minibatches."""
    n = example.graph.n_actors
    perm = rng.permutation(n)
    for start in range(0, n, config.batch_size):
        seeds = perm[start:start + config.batch_size]
        if n <= config.sample_threshold:
            yield example.graph, seeds.tolist(), example.targets
        else:
            sub, local = sample_subgraph(example.graph, seeds.tolist(),
                                         config.fanouts(), rng)
            # target rows must line up with subgraph-local actor ids; build
            # a per-subgraph target matrix indexed the same way
            raise_ids = [int(s) for s in seeds]
            yield sub, local, _subgraph_targets(example, sub, raise_ids, local)


def _subgraph_targets(example, sub, seed_ids, local_ids):
    targets = np.zeros((sub.n_actors, example.targets.shape[1]))
    for global_id, local_id in zip(seed_ids, local_ids):
        targets[local_id] = example.targets[global_id]
    return targets


def train(dataset_dir, corpus_dir, config, out_path, val_count=None,
          protocol="and", log_path=None, progress=print):
    """Train ts-net; returns (model, log dict). Saves a checkpoint."""
    examples = discover(dataset_dir, corpus_dir, config, protocol)
    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    if val_count is None:
        val_count = max(0, min(len(examples) // 5, len(examples) - 1))
    order = rng.permutation(len(examples))
    val = [examples[i] for i in order[:val_count]]
    trainset = [examples[i] for i in order[val_count:]]

    model = TsNet(config)
    steps_per_epoch = sum(
        -(-ex.graph.n_actors // config.batch_size) for ex in trainset
    )
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.max_lr / 25,
                                  weight_decay=config.weight_decay)
    scheduler = torch.optim.lr_scheduler.OneCycleLR(
        optimizer, max_lr=config.max_lr,
        total_steps=max(1, config.epochs * steps_per_epoch),
    )

    log = {"config": config.to_dict(), "epochs": []}
    best_metric, best_state, best_epoch = -1.0, None, -1
    for epoch in range(config.epochs):
        model.train()
        losses = []
        for ex in rng.permutation(len(trainset)):
            ex = trainset[int(ex)]
            for graph, ids, targets in _epoch_batches(ex, config, rng):
                optimizer.zero_grad()
                loss = training_loss(model, graph, targets, ids)
                loss.backward()
                optimizer.step()
                if scheduler.last_epoch < scheduler.total_steps:
                    scheduler.step()
                losses.append(float(loss.detach()))
        entry = {"epoch": epoch, "train_loss": float(np.mean(losses))}
        pool = val if val else trainset
        entry["val_f_auc"] = float(np.mean([f_auc(model, ex) for ex in pool]))
        log["epochs"].append(entry)
        progress(f"epoch {epoch}: loss={entry['train_loss']:.4f} "
                 f"val_f_auc={entry['val_f_auc']:.4f}")
        if entry["val_f_auc"] > best_metric:
            best_metric, best_epoch = entry["val_f_auc"], epoch
            best_state = {k: v.detach().clone()
                          for k, v in model.state_dict().items()}
        elif epoch - best_epoch >= config.patience:
            progress(f"early stop at epoch {epoch} (best {best_epoch})")
            break
    if best_state is not None:
        model.load_state_dict(best_state)
    log["best_epoch"] = best_epoch
    log["best_val_f_auc"] = best_metric

    save_checkpoint(model, out_path, log)
    if log_path:
        pathlib.Path(log_path).write_text(json.dumps(log, indent=2))
    return model, log


def save_checkpoint(model, path, log=None):
    torch.save({
        "format": "tsnet-checkpoint-v1",
        "config": model.config.to_dict(),
        "state_dict": model.state_dict(),
        "log": log,
    }, str(path))


def load_checkpoint(path):
    payload = torch.load(str(path), map_location="cpu", weights_only=False)
    if payload.get("format") != "tsnet-checkpoint-v1":
        raise ValueError(f"not a ts-net checkpoint: {path}")
    config = TsNetConfig.from_dict(payload["config"])
    model = TsNet(config)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, payload.get("log")


def predict_ranking(model, net_path, out_path=None):
    """Rank all actors of one network; optionally write the shared CSV."""
    graph = load_graph(net_path)
    example = Example(graph.name, graph, None, None, None)
    ranking = model_ranking(model, example)
    if out_path:
        rankers.write_ranking(ranking, str(out_path))
    return ranking
