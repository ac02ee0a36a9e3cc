"""Harness command line: init-base, train, predict, serve, smoke."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .model import EncoderSpec, tiny_spec
from .predict import predict_file
from .server import ScoringService, serve
from .training import TrainingRun, init_base, load_finetune_config, train


def _spec_from_args(args) -> EncoderSpec:
    return EncoderSpec.from_json(Path(args.encoder_spec).read_text())


def _cmd_init_base(args):
    spec = _spec_from_args(args)
    init_base(spec, args.task, Path(args.output_dir), seed=args.seed)
    print(f"initialized {args.task} base model in {args.output_dir}")
    return 0


def _cmd_train(args):
    spec = _spec_from_args(args)
    config = load_finetune_config(Path(args.config) if args.config else None)
    if args.epochs is not None:
        config["epochs"] = args.epochs
    run = TrainingRun(
        task=args.task,
        encoder_spec=spec,
        config=config,
        freeze_through=args.freeze_through,
        dataset_path=Path(args.dataset),
        vocab_path=Path(args.vocab),
        output_dir=Path(args.output_dir),
        base_weights=Path(args.base) if args.base else None,
    )
    summary = train(run)
    print(
        f"trained {args.task} for {summary['epochs']} epochs on {summary['n_examples']} examples; "
        f"trainable parameters: {summary['trainable_parameters']:,} (freeze={args.freeze_through})"
    )
    if summary["epoch_losses"]:
        print("per-epoch loss: " + ", ".join(f"{loss:.4f}" for loss in summary["epoch_losses"]))
    return 0


def _cmd_predict(args):
    n = predict_file(Path(args.model), Path(args.dataset), Path(args.vocab), Path(args.output))
    print(f"wrote {n} predictions to {args.output}")
    return 0


def _cmd_serve(args):
    service = ScoringService(
        Path(args.vocab),
        nsp_model=Path(args.nsp_model) if args.nsp_model else None,
        sentiment_model=Path(args.sentiment_model) if args.sentiment_model else None,
    )
    server = serve(service, host=args.host, port=args.port)
    host, port = server.server_address
    print(f"serving {service.model_name()} on http://{host}:{port} (Ctrl-C to stop)")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _cmd_smoke(args):
    """End-to-end check on the tiny config: init, train one epoch, predict."""
    import tempfile

    vocab = Path(args.vocab)
    vocab_size = len([l for l in vocab.read_text().splitlines() if l])
    work = Path(tempfile.mkdtemp(prefix="harness-smoke-"))
    dataset = work / "train.jsonl"
    rows = [
        {"id": i, "text": f"net sales {'rose' if i % 3 == 2 else 'fell' if i % 3 == 0 else 'held'} in 2009 .",
         "label": ["negative", "neutral", "positive"][i % 3]}
        for i in range(24)
    ]
    dataset.write_text("\n".join(json.dumps(r) for r in rows) + "\n")

    spec = tiny_spec(vocab_size, num_labels=3)
    started = time.perf_counter()
    base = init_base(spec, "sentiment", work / "base", seed=7)
    config = load_finetune_config(None)
    config.update(epochs=1, batch_size=8, seed=7)
    summary = train(TrainingRun(
        task="sentiment", encoder_spec=spec, config=config, freeze_through="none",
        dataset_path=dataset, vocab_path=vocab, output_dir=work / "model", base_weights=base,
    ))
    n = predict_file(work / "model", dataset, vocab, work / "preds.jsonl")
    elapsed = time.perf_counter() - started
    print(f"smoke ok: trained {summary['trainable_parameters']:,} trainable parameters, "
          f"{n} predictions, {elapsed:.1f}s (work dir {work})")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="finetune-harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init-base", help="materialize a randomly initialized base model")
    p.add_argument("--task", choices=("sentiment", "nsp"), required=True)
    p.add_argument("--encoder-spec", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(handler=_cmd_init_base)

    p = sub.add_parser("train", help="fine-tune on a toolkit dataset")
    p.add_argument("--task", choices=("sentiment", "nsp"), required=True)
    p.add_argument("--encoder-spec", required=True)
    p.add_argument("--config", default="", help="fine-tune config JSON (toolkit format)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--base", default="", help="base model dir to start from")
    p.add_argument("--freeze-through", default="none")
    p.add_argument("--epochs", type=int, default=None, help="override config epochs")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(handler=_cmd_train)

    p = sub.add_parser("predict", help="write predictions for a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("serve", help="serve the scoring wire protocol")
    p.add_argument("--vocab", required=True)
    p.add_argument("--nsp-model", default="")
    p.add_argument("--sentiment-model", default="")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8300)
    p.set_defaults(handler=_cmd_serve)

    p = sub.add_parser("smoke", help="fast end-to-end self check on the tiny config")
    p.add_argument("--vocab", default=str(Path(__file__).resolve().parents[3] / "data" / "vocab.txt"))
    p.set_defaults(handler=_cmd_smoke)

    return parser


def main() -> None:
    args = build_parser().parse_args()
    try:
        sys.exit(args.handler(args))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
