"""Drive the whole pipeline through the command-line interface.

Everything the library does is also reachable via the `spreadnet` CLI:
generate a corpus, build the ground-truth dataset, rank, and evaluate.
Outputs are byte-identical across reruns with the same --seed.
"""

import json
import pathlib
import tempfile

from spreadnet.cli import main

work = pathlib.Path(tempfile.mkdtemp(prefix="spreadnet-demo-"))
corpus, dataset = work / "corpus", work / "dataset"

main(["generate", "--model", "pa", "--count", "2", "--seed", "7",
      "--out", str(corpus), "--layers", "3:3", "--actors", "60:80",
      "--pa-m", "4"])

main(["dataset", "--corpus", str(corpus), "--out", str(dataset),
      "--protocols", "and", "--reps", "10", "--seed", "7",
      "--pis", "0.8,0.85,0.9,0.95", "--feasible-and", "0.8,0.85,0.9,0.95"])

sps = dataset / "network-0__and.csv"
main(["rank", "--method", "ground-truth", "--sps", str(sps),
      "--out", str(work / "truth.csv")])
main(["rank", "--method", "deg-c", "--net", str(corpus / "network-0.mln"),
      "--out", str(work / "pred.csv")])
main(["evaluate", "--truth", str(work / "truth.csv"),
      "--pred", str(work / "pred.csv"), "--sps", str(sps),
      "--out", str(work / "report.json"), "--curve", str(work / "curve.csv")])

report = json.loads((work / "report.json").read_text())
print("metrics:", {k: round(v, 3) for k, v in report["metrics"].items()})
print("artifacts in", work)
