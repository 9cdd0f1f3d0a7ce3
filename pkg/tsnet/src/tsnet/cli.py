"""Command-line interface: ``tsnet train`` and ``tsnet predict``."""

import argparse
import sys

from tsnet.config import TsNetConfig
from tsnet.training import (DatasetMismatchError, load_checkpoint,
                            predict_ranking, train)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tsnet",
        description="Train and apply the ts-net super-spreader ranker.",
    )
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("train", help="train on a spreadnet dataset")
    p.add_argument("--dataset", required=True,
                   help="directory with <network>__<protocol>.csv tables")
    p.add_argument("--corpus", required=True,
                   help="directory with the matching <network>.mln files")
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--log", help="JSON training-log output path")
    p.add_argument("--protocol", default="and", choices=["and", "or"])
    p.add_argument("--val-count", type=int, default=None,
                   help="held-out validation networks (default: 20%%)")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--hidden-dim", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("predict", help="rank one network with a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--net", required=True, help="network .mln file")
    p.add_argument("--out", required=True, help="ranking CSV output path")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        if args.command == "train":
            overrides = {"seed": args.seed}
            for key in ("epochs", "batch_size", "hidden_dim"):
                value = getattr(args, key)
                if value is not None:
                    overrides[key] = value
            config = TsNetConfig(**overrides)
            train(args.dataset, args.corpus, config, args.out,
                  val_count=args.val_count, protocol=args.protocol,
                  log_path=args.log)
        elif args.command == "predict":
            model, _ = load_checkpoint(args.checkpoint)
            predict_ranking(model, args.net, args.out)
    except DatasetMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
