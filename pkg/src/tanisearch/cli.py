"""Command-line interface: stats, search, compare, and eval subcommands.

All data goes to stdout (or --output); diagnostics go to stderr. Exit code 0
means the run completed and produced output. A simple `key = value` config
file can preload any shared option; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

from . import __version__
from .dataset import append_records, get_reference, load_dataset
from .errors import TaniSearchError, ValidationError
from .evaluate import class_distribution, class_summary
from .kernels import Method, backend_name
from .search import (
    BoundaryPolicy,
    SearchConfig,
    comparison_to_csv,
    comparison_to_payload,
    compare_weighted_unweighted,
    config_echo,
    rank_database,
    ranking_to_csv,
    ranking_to_payload,
)
from .stats import ConstantColumnPolicy, WeightSource, column_stats, standardize

_OPTION_DEFAULTS = {
    "format": "csv",
    "standardize": True,
    "weight_source": "raw",
    "constant_columns": "drop",
    "boundary": "lower",
    "threads": 1,
    "method": "weighted-tanimoto",
    "top_k": None,
}

_BOOL_WORDS = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def _load_config_file(path: str) -> dict[str, str]:
    cfg: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValidationError(
                    f"{path}:{lineno}: expected 'key = value', got '{line}'"
                )
            key = key.strip().lower().replace("-", "_")
            if key not in _OPTION_DEFAULTS:
                raise ValidationError(f"{path}:{lineno}: unknown config key '{key}'")
            cfg[key] = value.strip()
    return cfg


def _coerce(key: str, raw: str):
    if key == "standardize":
        try:
            return _BOOL_WORDS[raw.lower()]
        except KeyError:
            raise ValidationError(f"config value for standardize must be true/false, got '{raw}'") from None
    if key in ("threads", "top_k"):
        try:
            return int(raw)
        except ValueError:
            raise ValidationError(f"config value for {key} must be an integer, got '{raw}'") from None
    return raw


def _resolve_options(args) -> dict:
    """Merge flags > config file > built-in defaults into one options dict."""
    cfg = _load_config_file(args.config) if args.config else {}
    opts = {}
    for key, default in _OPTION_DEFAULTS.items():
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            opts[key] = flag_value
        elif key in cfg:
            opts[key] = _coerce(key, cfg[key])
        else:
            opts[key] = default
    opts["weight_source_given"] = (
        getattr(args, "weight_source", None) is not None or "weight_source" in cfg
    )
    if opts["threads"] < 1:
        raise ValidationError("--threads must be at least 1")
    return opts


def _build_search_config(opts) -> SearchConfig:
    try:
        return SearchConfig(
            method=Method(opts["method"]),
            weight_source=WeightSource(opts["weight_source"]),
            standardize=opts["standardize"],
            constant_column_policy=ConstantColumnPolicy(opts["constant_columns"]),
            top_k=opts["top_k"],
            boundary_policy=BoundaryPolicy(opts["boundary"]),
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def _warn_ignored_weight_source(config: SearchConfig, opts) -> None:
    if opts["weight_source_given"] and not config.method.weighted:
        print(
            f"warning: weight source is ignored for unweighted method "
            f"'{config.method.value}'",
            file=sys.stderr,
        )


def _load_with_reference(args):
    matrix = load_dataset(args.dataset)
    if getattr(args, "reference_file", None):
        ref = load_dataset(args.reference_file)
        if ref.m != 1:
            raise ValidationError(
                f"reference file must contain exactly one record, found {ref.m}"
            )
        matrix = append_records(matrix, ref)
        return matrix, ref.ids[0]
    return matrix, args.reference_id


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _notes(result) -> None:
    if result.dropped_attributes:
        print(
            "note: dropped constant attributes: "
            + ",".join(result.dropped_attributes),
            file=sys.stderr,
        )
    if result.undefined_ids:
        print(
            f"note: excluded {len(result.undefined_ids)} record(s) with undefined "
            "scores: " + ",".join(result.undefined_ids),
            file=sys.stderr,
        )


def _write_manifest(args, opts, matrix, extra: dict) -> None:
    if not args.manifest:
        return
    info = {
        "command": args.command,
        "dataset": args.dataset,
        "rows": matrix.m,
        "columns": matrix.n,
        "format": opts["format"],
        "method": opts["method"],
        "weight_source": opts["weight_source"],
        "standardize": opts["standardize"],
        "constant_columns": opts["constant_columns"],
        "boundary": opts["boundary"],
        "top_k": opts["top_k"],
        "tool_version": __version__,
        "backend": backend_name(),
    }
    info.update(extra)
    if not args.deterministic:
        info["timestamp"] = datetime.now(timezone.utc).isoformat()
    with open(args.output + ".manifest.json", "w", encoding="utf-8", newline="") as fh:
        fh.write(json.dumps(info, indent=2) + "\n")


def _fmt6(x: float) -> str:
    return f"{x:.6f}"


def cmd_stats(args) -> int:
    opts = _resolve_options(args)
    matrix = load_dataset(args.dataset)
    stats = column_stats(matrix)
    policy = ConstantColumnPolicy(opts["constant_columns"])
    try:
        source = WeightSource(opts["weight_source"])
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    zero_var = [s.std == 0.0 for s in stats]
    if policy is ConstantColumnPolicy.ERROR and any(zero_var):
        standardize(matrix, stats, policy)  # raises, naming the attribute
    dropped = [z and policy is ConstantColumnPolicy.DROP for z in zero_var]

    weights: list[float | None] = []
    if source is WeightSource.STANDARDIZED_VARIANCE:
        std = standardize(matrix, stats, policy)
        mu = std.values.mean(axis=0)
        var = ((std.values - mu) ** 2).mean(axis=0)
        z_var = dict(zip(std.attribute_names, var.tolist()))
        for name, gone in zip(matrix.attribute_names, dropped):
            v = None if gone else z_var.get(name)
            weights.append(None if not v else 1.0 / v)
    else:
        for s, gone in zip(stats, dropped):
            if gone:
                weights.append(None)
            elif source is WeightSource.UNIT:
                weights.append(1.0)
            else:
                weights.append(None if s.variance == 0.0 else 1.0 / s.variance)

    if opts["format"] == "json":
        payload = {
            "weight_source": source.value,
            "constant_columns": policy.value,
            "attributes": [
                {
                    "attribute": name,
                    "mean": s.mean,
                    "std": s.std,
                    "variance": s.variance,
                    "weight": w,
                    "dropped": gone,
                }
                for name, s, w, gone in zip(matrix.attribute_names, stats, weights, dropped)
            ],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["attribute", "mean", "std", "variance", "weight", "dropped"])
        for name, s, w, gone in zip(matrix.attribute_names, stats, weights, dropped):
            writer.writerow(
                [
                    name,
                    _fmt6(s.mean),
                    _fmt6(s.std),
                    _fmt6(s.variance),
                    "" if w is None else _fmt6(w),
                    "true" if gone else "false",
                ]
            )
        _emit(args, buf.getvalue())

    _write_manifest(args, opts, matrix, {"dropped_attributes": [n for n, g in zip(matrix.attribute_names, dropped) if g]})
    return 0


def cmd_search(args) -> int:
    opts = _resolve_options(args)
    config = _build_search_config(opts)
    _warn_ignored_weight_source(config, opts)
    matrix, reference_id = _load_with_reference(args)
    result = rank_database(matrix, reference_id, config, threads=opts["threads"])
    _notes(result)
    if opts["format"] == "json":
        _emit(args, json.dumps(ranking_to_payload(result), indent=2) + "\n")
    else:
        _emit(args, ranking_to_csv(result))
    _write_manifest(
        args,
        opts,
        matrix,
        {
            "reference_id": reference_id,
            "reference_file": getattr(args, "reference_file", None),
            "dropped_attributes": list(result.dropped_attributes),
        },
    )
    return 0


def cmd_compare(args) -> int:
    opts = _resolve_options(args)
    config = _build_search_config(opts)
    matrix, reference_id = _load_with_reference(args)
    result = compare_weighted_unweighted(
        matrix, reference_id, config, threads=opts["threads"]
    )
    _notes(result)
    if opts["format"] == "json":
        _emit(args, json.dumps(comparison_to_payload(result), indent=2) + "\n")
    else:
        _emit(args, comparison_to_csv(result))
    _write_manifest(
        args,
        opts,
        matrix,
        {
            "reference_id": reference_id,
            "reference_file": getattr(args, "reference_file", None),
            "dropped_attributes": list(result.dropped_attributes),
        },
    )
    return 0


def _summary_row(group: str, summary) -> list[str]:
    label = "OTHER" if summary.drug_class is None else summary.drug_class.value
    return [
        group,
        label,
        str(summary.count),
        f"{summary.mean_score:.4f}",
        f"{summary.median_score:.4f}",
        f"{summary.min_score:.4f}",
        f"{summary.max_score:.4f}",
    ]


def _summary_payload(summary) -> dict | None:
    if summary is None:
        return None
    return {
        "drug_class": None if summary.drug_class is None else summary.drug_class.value,
        "count": summary.count,
        "mean_score": summary.mean_score,
        "median_score": summary.median_score,
        "min_score": summary.min_score,
        "max_score": summary.max_score,
    }


def cmd_eval(args) -> int:
    opts = _resolve_options(args)
    config = _build_search_config(opts)
    _warn_ignored_weight_source(config, opts)
    matrix, reference_id = _load_with_reference(args)
    if not matrix.has_class_column:
        raise ValidationError(
            "eval requires drug-class labels but the dataset has no class column"
        )
    reference_class = get_reference(matrix, reference_id).drug_class
    result = rank_database(matrix, reference_id, config, threads=opts["threads"])
    _notes(result)
    pair = class_summary(result.hits, reference_class, reference_id=reference_id)
    distribution = class_distribution(result.hits)

    def dist_rows():
        def key(item):
            (drug, sim), _ = item
            return (drug.value, -int(sim) if sim is not None else 1)

        return sorted(distribution.items(), key=key)

    if opts["format"] == "json":
        payload = {
            "config": config_echo(config, reference_id),
            "reference_class": reference_class.value,
            "intra": _summary_payload(pair.intra),
            "inter": _summary_payload(pair.inter),
            "intra_minus_inter_mean": pair.mean_gap,
            "distribution": [
                {
                    "drug_class": drug.value,
                    "similarity_class": sim.name if sim is not None else None,
                    "count": count,
                }
                for (drug, sim), count in dist_rows()
            ],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["group", "drug_class", "count", "mean_score", "median_score", "min_score", "max_score"]
        )
        if pair.intra is not None:
            writer.writerow(_summary_row("intra", pair.intra))
        if pair.inter is not None:
            writer.writerow(_summary_row("inter", pair.inter))
        if pair.mean_gap is not None:
            writer.writerow([])
            writer.writerow(["metric", "value"])
            writer.writerow(["intra_minus_inter_mean", f"{pair.mean_gap:.4f}"])
        writer.writerow([])
        writer.writerow(["drug_class", "similarity_class", "count"])
        for (drug, sim), count in dist_rows():
            writer.writerow([drug.value, sim.name if sim is not None else "NA", count])
        _emit(args, buf.getvalue())

    _write_manifest(
        args,
        opts,
        matrix,
        {
            "reference_id": reference_id,
            "reference_file": getattr(args, "reference_file", None),
            "dropped_attributes": list(result.dropped_attributes),
        },
    )
    return 0


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("dataset", help="descriptor CSV: id[,class],attribute columns")
    parser.add_argument("--format", choices=["csv", "json"], default=None,
                        help="output format (default csv)")
    parser.add_argument("--output", metavar="PATH", default=None,
                        help="write output to PATH instead of stdout")
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="key = value file preloading any shared option")
    parser.add_argument("--standardize", action=argparse.BooleanOptionalAction,
                        default=None, help="z-score the dataset first (default on)")
    parser.add_argument("--weight-source", choices=["raw", "standardized", "unit"],
                        default=None, help="where attribute weights come from (default raw)")
    parser.add_argument("--constant-columns", choices=["drop", "zero", "error"],
                        default=None, help="what to do with zero-variance attributes (default drop)")
    parser.add_argument("--boundary", choices=["lower", "upper"], default=None,
                        help="which class owns a shared bin boundary (default lower)")
    parser.add_argument("--threads", type=int, default=None, metavar="N",
                        help="worker threads for scoring; output is identical for any N")
    parser.add_argument("--manifest", action="store_true",
                        help="write a reproducibility manifest next to --output")
    parser.add_argument("--deterministic", action="store_true",
                        help="omit the timestamp from the manifest")


def _add_reference_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--reference-id", metavar="ID",
                       help="id of the reference molecule inside the dataset")
    group.add_argument("--reference-file", metavar="PATH",
                       help="single-record CSV appended to the database before statistics")
    parser.add_argument("--method", choices=[m.value for m in Method], default=None,
                        help="scoring kernel (default weighted-tanimoto)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tanisearch",
        description="Similarity searching over molecular descriptor vectors.",
    )
    parser.add_argument("--version", action="version", version=f"tanisearch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_stats = sub.add_parser("stats", help="per-attribute mean/std/variance/weight table")
    _add_common_options(p_stats)

    p_search = sub.add_parser("search", help="rank the database against a reference")
    _add_common_options(p_search)
    _add_reference_options(p_search)
    p_search.add_argument("--top-k", type=int, default=None, metavar="K",
                          help="keep only the K best hits")

    p_compare = sub.add_parser("compare", help="paired weighted vs unweighted scores")
    _add_common_options(p_compare)
    _add_reference_options(p_compare)
    p_compare.add_argument("--top-k", type=int, default=None, metavar="K",
                           help="keep only the K rows with the best weighted score")

    p_eval = sub.add_parser("eval", help="intra/inter drug-class score summaries")
    _add_common_options(p_eval)
    _add_reference_options(p_eval)

    return parser


_HANDLERS = {
    "stats": cmd_stats,
    "search": cmd_search,
    "compare": cmd_compare,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.manifest and not args.output:
        print("error: --manifest requires --output", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](args)
    except (TaniSearchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
