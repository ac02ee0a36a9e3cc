"""Command-line entry point: reproducible pipelines with per-run manifests.

Every artifact-producing run writes its outputs atomically (temp file +
rename) and drops a manifest alongside recording the exact argv, seed,
toolkit version, and SHA-256 digests of all inputs and outputs. Re-running
a manifest reproduces the outputs byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from . import concat as concat_mod
from . import corpus, freezing, metrics, nsp_pairs, scoring, wordpiece
from .errors import RemoteError, ToolkitError

ENDPOINT_ENV = "FINSENT_ENDPOINT"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 64 on usage errors, per contract
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _write_atomic(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_dataset(path: Path, encoding: str = "iso-8859-1") -> list[corpus.LabeledSentence]:
    raw = path.read_bytes()
    if path.suffix == ".jsonl":
        return corpus.dataset_from_jsonl(raw)
    return corpus.parse_phrasebank(raw, encoding=encoding)


def _make_backend(args) -> object:
    endpoint = getattr(args, "endpoint", "") or os.environ.get(ENDPOINT_ENV, "")
    kind = getattr(args, "backend", "mock")
    if kind == "remote" and not endpoint:
        raise ToolkitError(f"remote backend needs --endpoint or ${ENDPOINT_ENV}")
    config = scoring.BackendConfig(kind=kind, endpoint=endpoint)
    return scoring.make_backend(config)


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


# -- subcommand handlers ------------------------------------------------------
# Each returns (outputs, inputs, summary): outputs maps Path -> bytes and is
# written atomically by the runner; inputs lists the files that were read.

def _cmd_ingest(args):
    path = Path(args.input)
    records = corpus.parse_phrasebank(path.read_bytes(), encoding=args.encoding)
    out = Path(args.output)
    stats = corpus.label_distribution(records)
    return {out: corpus.dataset_to_jsonl(records).encode()}, [path], f"{stats.count} records"


def _cmd_stats(args):
    path = Path(args.input)
    records = _read_dataset(path, encoding=args.encoding)
    stats = corpus.label_distribution(records)
    table = (
        f"{'% Negative':>10} {'% Neutral':>10} {'% Positive':>10} {'Count':>7}\n"
        f"{stats.pct_negative:>10.1f} {stats.pct_neutral:>10.1f} "
        f"{stats.pct_positive:>10.1f} {stats.count:>7}\n"
    )
    print(table, end="")
    outputs = {}
    if args.output:
        csv = (
            "pct_negative,pct_neutral,pct_positive,count\n"
            f"{stats.pct_negative},{stats.pct_neutral},{stats.pct_positive},{stats.count}\n"
        )
        outputs[Path(args.output)] = csv.encode()
    return outputs, [path], f"n={stats.count}"


def _cmd_split(args):
    path = Path(args.input)
    records = _read_dataset(path)
    ratios = tuple(float(x) for x in args.ratios.split(","))
    train, val, test = corpus.split_dataset(records, ratios, seed=args.seed)
    out_dir = Path(args.output_dir)
    outputs = {
        out_dir / "train.jsonl": corpus.dataset_to_jsonl(train).encode(),
        out_dir / "validation.jsonl": corpus.dataset_to_jsonl(val).encode(),
        out_dir / "test.jsonl": corpus.dataset_to_jsonl(test).encode(),
    }
    return outputs, [path], f"{len(train)}/{len(val)}/{len(test)}"


def _cmd_nsp_pairs(args):
    path = Path(args.corpus)
    docs = nsp_pairs.segment_corpus(path.read_text(encoding="utf-8"))
    pairs = nsp_pairs.generate_pairs(docs, args.count, seed=args.seed)
    outputs = {}
    if args.test_size:
        train, test = nsp_pairs.hold_out_pairs(pairs, args.test_size, seed=args.seed)
        outputs[Path(args.output)] = nsp_pairs.pairs_to_jsonl(train).encode()
        test_path = Path(args.test_output or Path(args.output).with_suffix(".test.jsonl"))
        outputs[test_path] = nsp_pairs.pairs_to_jsonl(test).encode()
        summary = f"{len(train)} train / {len(test)} test pairs"
    else:
        outputs[Path(args.output)] = nsp_pairs.pairs_to_jsonl(pairs).encode()
        summary = f"{len(pairs)} pairs"
    return outputs, [path], summary


def _cmd_concat(args):
    path = Path(args.input)
    records = _read_dataset(path)
    vocab_path = Path(args.vocab)
    vocab = wordpiece.load_vocab(vocab_path.read_bytes())
    lo, hi = (int(x) for x in args.run_length.split(","))
    if args.method == "sequential":
        backend = _make_backend(args)
        samples, rejected = concat_mod.build_sequential_concat(
            records, backend, vocab,
            max_tokens=args.max_tokens, run_length_range=(lo, hi), seed=args.seed,
        )
    else:
        samples, rejected = concat_mod.build_random_concat(
            records, vocab,
            max_tokens=args.max_tokens, run_length_range=(lo, hi), seed=args.seed,
        )
    out = Path(args.output)
    outputs = {
        out: corpus.dataset_to_jsonl(concat_mod.concat_samples_to_records(samples)).encode()
    }
    audit_path = Path(args.audit or out.with_suffix(".audit.csv"))
    outputs[audit_path] = concat_mod.rejected_runs_csv(rejected).encode()
    return outputs, [path, vocab_path], f"{len(samples)} samples, {len(rejected)} rejected"


def _cmd_tokenize_stats(args):
    path = Path(args.input)
    records = _read_dataset(path, encoding=args.encoding)
    vocab_path = Path(args.vocab)
    vocab = wordpiece.load_vocab(vocab_path.read_bytes())
    report = wordpiece.length_histogram(
        records, vocab, bin_width=args.bin_width, include_special=args.include_special
    )
    print(f"tokens: min={report.min_tokens} max={report.max_tokens} mean={report.mean_tokens:.2f}")
    return (
        {Path(args.output): wordpiece.histogram_csv(report).encode()},
        [path, vocab_path],
        f"n={report.n_records}",
    )


def _load_predictions(path: Path, class_names):
    rows = metrics.predictions_from_jsonl(path.read_bytes())
    actual = [row["actual"] for row in rows]
    predicted = [row["predicted"] for row in rows]
    probs = None
    if rows and all("probs" in row for row in rows):
        probs = [[row["probs"][name] for name in class_names] for row in rows]
    return actual, predicted, probs


def _cmd_evaluate(args):
    path = Path(args.predictions)
    class_names = args.classes.split(",")
    actual, predicted, probs = _load_predictions(path, class_names)
    report = metrics.compute_report(
        actual, predicted, class_names, probs=probs, macro_variant=args.macro_variant
    )
    cm = metrics.confusion_matrix(actual, predicted, class_names)
    out_dir = Path(args.output_dir)
    table = metrics.report_table(report)
    print(table, end="")
    outputs = {
        out_dir / "metrics.csv": metrics.report_csv(report).encode(),
        out_dir / "metrics.txt": table.encode(),
        out_dir / "confusion.csv": metrics.confusion_csv(cm).encode(),
    }
    return outputs, [path], f"accuracy={report.accuracy:.4f} macro_f1={report.macro_f1:.4f}"


def _cmd_sweep(args):
    path = Path(args.predictions)
    class_names = args.classes.split(",")
    actual, predicted, probs = _load_predictions(path, class_names)
    sizes = _parse_int_list(args.sizes)
    results = metrics.evaluate_by_test_size(
        actual, predicted, class_names, sizes, probs=probs, seed=args.seed
    )
    return {Path(args.output): metrics.sweep_csv(results).encode()}, [path], f"{len(sizes)} sizes"


def _cmd_freeze_table(args):
    inputs = []
    if args.config:
        config_path = Path(args.config)
        config = freezing.EncoderConfig(**json.loads(config_path.read_text()))
        inputs.append(config_path)
    else:
        config = freezing.BASE_CONFIG
    text = freezing.freeze_table_text(config)
    print(text, end="")
    out = Path(args.output)
    outputs = {
        out: freezing.freeze_table_csv(config).encode(),
        out.with_suffix(".txt"): text.encode(),
    }
    return outputs, inputs, f"{config.layers + 1} rows"


def _cmd_merge(args):
    paths = [Path(p) for p in args.inputs]
    parts = [_read_dataset(p) for p in paths]
    merged = corpus.merge_corpora(parts)
    counts = corpus.source_counts(merged)
    summary = f"{len(merged)} records " + json.dumps(counts, sort_keys=True)
    print(summary)
    return {Path(args.output): corpus.dataset_to_jsonl(merged).encode()}, paths, summary


def _cmd_synth_ingest(args):
    path = Path(args.input)
    records = corpus.ingest_synthetic(path.read_bytes())
    return (
        {Path(args.output): corpus.dataset_to_jsonl(records).encode()},
        [path],
        f"{len(records)} records",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="finsent", description="Financial sentiment corpus toolkit")
    parser.add_argument("--seed", type=int, default=42, help="global RNG seed (default 42)")
    parser.add_argument("--jobs", type=int, default=1, help="parallelism bound")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="phrasebank file -> dataset JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--encoding", default="iso-8859-1")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_ingest)

    p = sub.add_parser("stats", help="label distribution report")
    p.add_argument("--input", required=True)
    p.add_argument("--encoding", default="iso-8859-1")
    p.add_argument("--output", default="")
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("split", help="stratified train/validation/test split")
    p.add_argument("--input", required=True)
    p.add_argument("--ratios", default="0.8,0.1,0.1")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("nsp-pairs", help="build balanced NSP pairs from a news corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--test-size", type=int, default=0)
    p.add_argument("--output", required=True)
    p.add_argument("--test-output", default="")
    p.set_defaults(handler=_cmd_nsp_pairs)

    p = sub.add_parser("concat", help="build a long-sentence corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=("random", "sequential"), required=True)
    p.add_argument("--vocab", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--audit", default="")
    p.add_argument("--max-tokens", type=int, default=concat_mod.DEFAULT_MAX_TOKENS)
    p.add_argument("--run-length", default="2,6")
    p.add_argument("--backend", choices=("mock", "remote"), default="mock")
    p.add_argument("--endpoint", default="")
    p.set_defaults(handler=_cmd_concat)

    p = sub.add_parser("tokenize-stats", help="token length histogram CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--encoding", default="iso-8859-1")
    p.add_argument("--vocab", required=True)
    p.add_argument("--bin-width", type=int, default=10)
    p.add_argument("--include-special", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_tokenize_stats)

    p = sub.add_parser("evaluate", help="metrics from a predictions file")
    p.add_argument("--predictions", required=True)
    p.add_argument("--classes", default="negative,neutral,positive")
    p.add_argument("--macro-variant", default=metrics.MACRO_F1_MEAN,
                   choices=(metrics.MACRO_F1_MEAN, metrics.MACRO_F1_HARMONIC))
    p.add_argument("--output-dir", required=True)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("sweep", help="metrics vs. test size CSV")
    p.add_argument("--predictions", required=True)
    p.add_argument("--classes", default="negative,neutral,positive")
    p.add_argument("--sizes", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("freeze-table", help="trainable parameters per freeze depth")
    p.add_argument("--config", default="")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_freeze_table)

    p = sub.add_parser("merge", help="concatenate datasets, re-assigning ids")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_merge)

    p = sub.add_parser("synth-ingest", help="validate and ingest synthetic records")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=_cmd_synth_ingest)

    return parser


def _manifest_path(args, outputs: dict[Path, bytes]) -> Path:
    if getattr(args, "output_dir", ""):
        return Path(args.output_dir) / "manifest.json"
    if getattr(args, "output", ""):
        out = Path(args.output)
        return out.with_name(out.name + ".manifest.json")
    first = sorted(outputs)[0]
    return first.with_name(first.name + ".manifest.json")


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        outputs, inputs, summary = args.handler(args)
    except (RemoteError, TimeoutError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ToolkitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        for path, data in outputs.items():
            _write_atomic(path, data)
        if outputs:
            manifest = {
                "subcommand": args.command,
                "argv": argv,
                "seed": args.seed,
                "toolkit_version": __version__,
                "inputs": {str(p): _sha256(p.read_bytes()) for p in inputs},
                "outputs": {str(p): _sha256(outputs[p]) for p in sorted(outputs)},
            }
            data = (json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode()
            _write_atomic(_manifest_path(args, outputs), data)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"{args.command}: {summary}")
    return EXIT_OK


def rerun_manifest(manifest_path: str | Path) -> int:
    """Re-execute the argv recorded in a manifest; outputs land where they did."""
    manifest = json.loads(Path(manifest_path).read_text())
    return run(manifest["argv"])


def main() -> None:
    sys.exit(run())
