import json

from spreadnet.cli import main as spreadnet_main

from tsnet.cli import main
from tests.conftest import make_dataset


def test_help_and_usage():
    assert main(["--help"]) == 0
    assert main([]) == 1


def test_train_predict_evaluate_end_to_end(tmp_path, capsys):
    corpus, dataset = make_dataset(tmp_path, 2, 25, net_seed0=40,
                                   table_seed=1, reps=3, m=3)
    ckpt = tmp_path / "model.pt"
    log = tmp_path / "log.json"
    assert main(["train", "--dataset", str(dataset), "--corpus", str(corpus),
                 "--out", str(ckpt), "--log", str(log), "--epochs", "2",
                 "--hidden-dim", "16", "--val-count", "0", "--seed", "3"]) == 0
    payload = json.loads(log.read_text())
    assert payload["config"]["hidden_dim"] == 16
    assert len(payload["epochs"]) == 2

    pred = tmp_path / "pred.csv"
    assert main(["predict", "--checkpoint", str(ckpt),
                 "--net", str(corpus / "n0.mln"), "--out", str(pred)]) == 0

    # the written ranking closes the loop with the primary toolkit
    truth = tmp_path / "truth.csv"
    assert spreadnet_main(["rank", "--method", "ground-truth",
                           "--sps", str(dataset / "n0__and.csv"),
                           "--out", str(truth)]) == 0
    report = tmp_path / "report.json"
    assert spreadnet_main(["evaluate", "--truth", str(truth),
                           "--pred", str(pred),
                           "--sps", str(dataset / "n0__and.csv"),
                           "--out", str(report)]) == 0
    metrics = json.loads(report.read_text())["metrics"]
    assert 0.0 <= metrics["F_auc"] <= 1.0


def test_train_missing_networks_exits_two(tmp_path, capsys):
    corpus, dataset = make_dataset(tmp_path, 1, 20, net_seed0=45,
                                   table_seed=1, reps=3, m=3)
    (corpus / "n0.mln").unlink()
    code = main(["train", "--dataset", str(dataset), "--corpus", str(corpus),
                 "--out", str(tmp_path / "c.pt"), "--epochs", "1",
                 "--hidden-dim", "8"])
    assert code == 2
    assert "n0" in capsys.readouterr().err


def test_predict_bad_checkpoint_exits_two(tmp_path, capsys):
    bogus = tmp_path / "bogus.pt"
    import torch

    torch.save({"format": "other"}, str(bogus))
    corpus, _ = make_dataset(tmp_path, 1, 10, net_seed0=46, table_seed=1,
                             reps=3, m=3)
    assert main(["predict", "--checkpoint", str(bogus),
                 "--net", str(corpus / "n0.mln"),
                 "--out", str(tmp_path / "r.csv")]) == 2
