"""Command-line entry point: reproducible prequential experiments.

Subcommands: run (one model on one stream), sweep (projection-net grid),
generate (materialize a synthetic stream to CSV), convert (ARFF to CSV).

Stream specs are either generator URIs like gen:led?noise=0.1&seed=1 or
dataset file paths (.csv / .arff); bare file names also resolve against the
STREAMCLF_DATA directory. Model specs compose: lb(ht,10,6), ht-sgd-f(10,relu),
knn(10,5000), rpn(sigmoid,100,0.11,0.3), with --filter putting a random
feature filter in front of any model.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from urllib.parse import parse_qs, urlsplit

import numpy as np

from .core import Classifier, Schema
from .ensembles import OnlineBagging, leveraging_bagging
from .evaluation import prequential_run, write_results_csv
from .features import FilteredClassifier, parse_filter_spec
from .generators import HyperplaneGenerator, LedGenerator, RbfGenerator
from .ingestion import ArffStream, CsvStream, NormalizedStream, StreamFormatError, arff_to_csv
from .learners import HoeffdingTree, KnnClassifier, NaiveBayes, SgdLinear
from .projection import GridSearchSpec, RandomProjectionNetwork, grid_search

__all__ = ["main", "build_model", "build_stream", "SpecError"]

EXIT_USAGE = 2
EXIT_RUNTIME = 1


class SpecError(ValueError):
    """Unparseable stream/model/filter/grid specification."""


# ---------------------------------------------------------------------------
# spec parsing

def _split_args(body: str) -> list[str]:
    args, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            args.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        args.append(tail)
    return args


def _parse_call(spec: str):
    spec = spec.strip()
    if "(" not in spec:
        return spec.lower(), []
    name, _, rest = spec.partition("(")
    if not rest.endswith(")"):
        raise SpecError(f"unbalanced parentheses in {spec!r}")
    return name.strip().lower(), _split_args(rest[:-1])


def _num(token: str, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise SpecError(f"expected a number for {what}, got {token!r}") from None


def build_model(spec: str, schema: Schema, seed: int) -> Classifier:
    """Build a classifier from its spec string."""
    name, args = _parse_call(spec)
    if name in ("ht", "ht-nb", "ht-mc"):
        if args:
            raise SpecError(f"{name} takes no arguments")
        strategy = "mc" if name == "ht-mc" else "nb"
        return HoeffdingTree(schema, leaf_strategy=strategy, seed=seed)
    if name == "ht-knn":
        k = int(_num(args[0], "k")) if len(args) > 0 else 10
        window = int(_num(args[1], "window")) if len(args) > 1 else 5000
        return HoeffdingTree(schema, leaf_strategy="knn", leaf_knn_k=k,
                             leaf_knn_window=window, seed=seed)
    if name == "ht-sgd":
        eta = _num(args[0], "eta") if args else 0.01
        return HoeffdingTree(schema, leaf_strategy="sgd", leaf_sgd_eta=eta, seed=seed)
    if name == "ht-sgd-f":
        ratio = _num(args[0], "ratio") if len(args) > 0 else 10.0
        activation = args[1].lower() if len(args) > 1 else "relu"
        eta = _num(args[2], "eta") if len(args) > 2 else 0.01
        return HoeffdingTree(
            schema, leaf_strategy="sgd", leaf_sgd_eta=eta, seed=seed,
            leaf_filter={"activation": activation, "ratio": ratio, "h": None, "gamma": 1.0},
        )
    if name == "knn":
        k = int(_num(args[0], "k")) if len(args) > 0 else 10
        window = int(_num(args[1], "window")) if len(args) > 1 else 5000
        return KnnClassifier(schema, k=k, window=window)
    if name == "sgd":
        eta = _num(args[0], "eta") if args else 0.01
        return SgdLinear(schema, learning_rate=eta)
    if name == "nb":
        if args:
            raise SpecError("nb takes no arguments")
        return NaiveBayes(schema)
    if name == "rpn":
        if len(args) < 2:
            raise SpecError("rpn needs at least (activation, h)")
        activation = args[0].lower()
        h = int(_num(args[1], "h"))
        eta = _num(args[2], "eta") if len(args) > 2 else 0.01
        mu = _num(args[3], "mu") if len(args) > 3 else 0.0
        gamma = _num(args[4], "gamma") if len(args) > 4 else 1.0
        return RandomProjectionNetwork(schema, h, activation, eta=eta, mu=mu,
                                       gamma=gamma, seed=seed)
    if name in ("lb", "bag"):
        if not args:
            raise SpecError(f"{name} needs a base learner spec")
        base_spec = args[0]
        n_members = int(_num(args[1], "members")) if len(args) > 1 else 10
        factory = lambda sch, s: build_model(base_spec, sch, s)  # noqa: E731
        if name == "lb":
            lam = _num(args[2], "lambda") if len(args) > 2 else 6.0
            return leveraging_bagging(schema, factory, n_members=n_members, lam=lam, seed=seed)
        return OnlineBagging(schema, factory, n_members=n_members, lam=1.0, seed=seed)
    raise SpecError(f"unknown model spec {spec!r}")


def _query_params(query: str) -> dict:
    return {k: v[-1] for k, v in parse_qs(query, keep_blank_values=True).items()}


def build_stream(spec: str, default_seed: int = 1, class_col: int = -1,
                 header: str = "auto"):
    """Build a stream from a generator URI or a dataset file path."""
    if spec.startswith("gen:"):
        parsed = urlsplit(spec[len("gen:"):])
        kind = parsed.path.lower()
        params = _query_params(parsed.query)
        try:
            seed = int(params.pop("seed", default_seed))
            if kind == "rbf":
                stream = RbfGenerator(
                    seed=seed,
                    n_attributes=int(params.pop("d", 10)),
                    n_classes=int(params.pop("classes", 2)),
                    n_centroids=int(params.pop("centroids", 50)),
                    drift_speed=float(params.pop("drift", 0.0)),
                )
            elif kind == "hyp":
                stream = HyperplaneGenerator(
                    seed=seed,
                    n_attributes=int(params.pop("d", 10)),
                    noise=float(params.pop("noise", 0.05)),
                    mag_change=float(params.pop("mag", 0.0)),
                )
            elif kind == "led":
                stream = LedGenerator(seed=seed, noise=float(params.pop("noise", 0.1)))
            else:
                raise SpecError(f"unknown generator {kind!r} (expected rbf, hyp, or led)")
        except SpecError:
            raise
        except (TypeError, ValueError) as exc:
            raise SpecError(f"bad generator parameters in {spec!r}: {exc}") from None
        if params:
            raise SpecError(f"unknown generator parameters {sorted(params)} in {spec!r}")
        return stream
    path = spec
    if not os.path.exists(path):
        data_dir = os.environ.get("STREAMCLF_DATA", "")
        candidate = os.path.join(data_dir, spec) if data_dir else None
        if candidate and os.path.exists(candidate):
            path = candidate
        else:
            raise SpecError(f"dataset file not found: {spec!r}")
    if path.lower().endswith(".arff"):
        return ArffStream(path)
    return CsvStream(path, class_column=class_col, header=header)


def _dataset_name(spec: str) -> str:
    if spec.startswith("gen:"):
        return urlsplit(spec[len("gen:"):]).path.lower()
    return os.path.splitext(os.path.basename(spec))[0]


# ---------------------------------------------------------------------------
# subcommands

def _cmd_run(args) -> int:
    stream = build_stream(args.stream, default_seed=args.seed,
                          class_col=args.class_col, header=args.header)
    if args.normalize:
        stream = NormalizedStream(stream)
    schema = stream.schema
    model_seed = int(np.random.SeedSequence([args.seed, 101]).generate_state(1)[0])
    if args.filter:
        filter_spec = parse_filter_spec(args.filter)
        filter_seed = filter_spec["seed"]
        if filter_seed is None:
            filter_seed = int(np.random.SeedSequence([args.seed, 202]).generate_state(1)[0])
            filter_spec["seed"] = filter_seed
        inner = lambda sch: build_model(args.model, sch, model_seed)  # noqa: E731
        model = FilteredClassifier(schema, filter_spec, inner, seed=filter_seed)
    else:
        model = build_model(args.model, schema, model_seed)
    records, summary = prequential_run(
        stream, model, max_instances=args.max, n_windows=args.windows, model_id=args.model
    )
    dataset = args.dataset or _dataset_name(args.stream)
    if args.out:
        write_results_csv(args.out, records, summary, dataset)
    flag = " (truncated)" if summary.truncated else ""
    print(
        f"model={args.model} dataset={dataset} instances={summary.instances}"
        f" accuracy={100.0 * summary.accuracy:.2f}% elapsed={summary.elapsed_seconds:.2f}s{flag}"
    )
    return 0


def _parse_grid_file(path) -> dict:
    defaults = {
        "activations": None, "sizes": "default", "mus": "default",
        "etas": "default", "gammas": "default", "budget": "10000",
    }
    seen = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise SpecError(f"cannot read grid file: {exc}") from None
    with fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip().lower()
            if not sep or key not in defaults:
                raise SpecError(f"{path}:{line_no}: bad grid line {raw.strip()!r}")
            seen[key] = value.strip()
    if "activations" not in seen:
        raise SpecError(f"{path}: grid must set activations=")
    merged = {**defaults, **seen}
    merged["activations"] = [a.strip().lower() for a in merged["activations"].split(",") if a.strip()]
    return merged


def _grid_values(text: str, default, cast):
    if text == "default":
        return default
    try:
        return tuple(cast(v.strip()) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise SpecError(f"bad grid values {text!r}: {exc}") from None


class _StreamFactory:
    """Picklable stream builder so sweep cells can run in worker processes."""

    def __init__(self, spec, seed, class_col, header, normalize):
        self.spec = spec
        self.seed = seed
        self.class_col = class_col
        self.header = header
        self.normalize = normalize

    def __call__(self):
        stream = build_stream(self.spec, default_seed=self.seed,
                              class_col=self.class_col, header=self.header)
        return NormalizedStream(stream) if self.normalize else stream


def _cmd_sweep(args) -> int:
    from .projection import (DEFAULT_ETA_GRID, DEFAULT_GAMMA_GRID, DEFAULT_MU_GRID,
                             DEFAULT_SIZE_GRID)

    grid = _parse_grid_file(args.grid)
    spec = GridSearchSpec(
        activations=grid["activations"],
        sizes=_grid_values(grid["sizes"], DEFAULT_SIZE_GRID, lambda v: int(float(v))),
        mus=_grid_values(grid["mus"], DEFAULT_MU_GRID, float),
        etas=_grid_values(grid["etas"], DEFAULT_ETA_GRID, float),
        gammas=_grid_values(grid["gammas"], DEFAULT_GAMMA_GRID, float),
        budget=int(grid["budget"]),
        seed=args.seed,
    )
    stream_factory = _StreamFactory(args.stream, args.seed, args.class_col,
                                    args.header, args.normalize)
    ranked = grid_search(spec, stream_factory, workers=args.workers)
    out = args.out or "sweep.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rank", "activation", "h", "mu", "eta", "gamma",
                         "accuracy", "instances", "elapsed_s"])
        for rank, row in enumerate(ranked, start=1):
            writer.writerow([
                rank, row["activation"], row["h"], row["mu"], row["eta"], row["gamma"],
                f"{row['accuracy']:.6f}", row["instances"], f"{row['elapsed_s']:.3f}",
            ])
    best = ranked[0]
    print(
        f"best: activation={best['activation']} h={best['h']} mu={best['mu']}"
        f" eta={best['eta']} accuracy={100.0 * best['accuracy']:.2f}% ({len(ranked)} configs -> {out})"
    )
    return 0


def _cmd_generate(args) -> int:
    stream = build_stream(args.stream, default_seed=args.seed)
    if not args.stream.startswith("gen:"):
        raise SpecError("generate expects a gen: stream spec")
    schema = stream.schema
    n = args.n
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([a.name for a in schema.attributes] + ["class"])
        if n > 0:
            for i, inst in enumerate(stream):
                row = []
                for a, v in zip(schema.attributes, inst.values):
                    if a.is_nominal:
                        row.append(a.values[int(v)])
                    elif math.isnan(v):
                        row.append("?")
                    else:
                        row.append(repr(float(v)))
                row.append(schema.class_values[inst.label])
                writer.writerow(row)
                if i + 1 >= n:
                    break
    print(f"wrote {n} instances to {args.out}")
    return 0


def _cmd_convert(args) -> int:
    n = arff_to_csv(args.infile, args.out)
    print(f"converted {n} rows: {args.infile} -> {args.out}")
    return 0


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamclf",
        description="Data-stream classification experiments with prequential evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate one model on one stream")
    run.add_argument("--stream", required=True, help="gen:<kind>?k=v... or dataset path")
    run.add_argument("--model", required=True, help="model spec, e.g. lb(ht,10,6)")
    run.add_argument("--filter", default=None, help="front filter spec, e.g. relu,ratio=10")
    run.add_argument("--max", type=int, default=None, help="instance budget")
    run.add_argument("--windows", type=int, default=100)
    run.add_argument("--seed", type=int, default=1)
    run.add_argument("--out", default=None, help="results CSV path")
    run.add_argument("--normalize", action="store_true",
                     help="streaming min-max normalization of numeric attributes")
    run.add_argument("--class-col", type=int, default=-1)
    run.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    run.add_argument("--dataset", default=None, help="dataset label for the results CSV")
    run.set_defaults(func=_cmd_run)

    sweep = sub.add_parser("sweep", help="projection-net hyper-parameter grid")
    sweep.add_argument("--grid", required=True, help="grid config file (key=value lines)")
    sweep.add_argument("--stream", required=True)
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--seed", type=int, default=1)
    sweep.add_argument("--normalize", action="store_true")
    sweep.add_argument("--class-col", type=int, default=-1)
    sweep.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    sweep.add_argument("--workers", type=int, default=1,
                       help="evaluate grid cells in this many parallel processes")
    sweep.set_defaults(func=_cmd_sweep)

    gen = sub.add_parser("generate", help="materialize a synthetic stream to CSV")
    gen.add_argument("--stream", required=True, help="gen:<kind>?k=v...")
    gen.add_argument("-n", type=int, required=True, help="number of instances")
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=1)
    gen.set_defaults(func=_cmd_generate)

    conv = sub.add_parser("convert", help="rewrite ARFF as CSV")
    conv.add_argument("--in", dest="infile", required=True)
    conv.add_argument("--out", required=True)
    conv.set_defaults(func=_cmd_convert)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, StreamFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - unexpected failures
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
