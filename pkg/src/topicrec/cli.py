"""Command-line shell for the offline pipeline and the HTTP service.

Every command is a thin wrapper over the library: load inputs, call the
corresponding function, serialize the result.  Domain errors become
clean one-line failures on stderr; bad paths and bad flag values are
usage errors (exit code 2) courtesy of click.
"""

from __future__ import annotations

import functools
import json
import socket

import click

from .corpus import (
    PreprocessConfig,
    build_corpus,
    config_to_dict,
    load_items,
    load_preprocess_config,
)
from .errors import TopicRecError
from .evaluate import coherence, coherence_sweep
from .features import build_similarity_from_features, load_features
from .lda import LdaHyperparams
from .lda import train as train_model
from .model_io import ModelArchive, export_model_json, load_model, save_model
from .recommend import UserProfile, build_similarity, recommend
from .service import SessionStore, build_bundle, create_app

_ITEM_FORMATS = click.Choice(["jsonl", "csv"])


def _friendly(fn):
    """Turn domain errors into clean CLI failures (exit 1, stderr)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except TopicRecError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _load_corpus(items_path, items_format, enrich, config_path):
    items = load_items(items_path, format=items_format)
    config = (
        load_preprocess_config(config_path) if config_path else PreprocessConfig()
    )
    return items, config, build_corpus(items, enrich=enrich, config=config)


@click.group()
@click.version_option(package_name="topicrec")
def main():
    """Topic-model recommender: train, evaluate, recommend, serve."""


@main.command()
@click.option("--items", "items_path", required=True,
              type=click.Path(exists=True, dir_okay=False), help="Item file.")
@click.option("--format", "items_format", type=_ITEM_FORMATS, default="jsonl",
              show_default=True)
@click.option("--enrich/--no-enrich", default=True, show_default=True,
              help="Concatenate catalogue attributes onto the description.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              help="Preprocessing config (.json or .toml).")
@click.option("-K", "--topics", "k", type=click.IntRange(min=1), default=10,
              show_default=True)
@click.option("--alpha", type=float, default=None, help="Defaults to 50/K.")
@click.option("--beta", type=float, default=0.01, show_default=True)
@click.option("--iterations", type=click.IntRange(min=1), default=1000,
              show_default=True)
@click.option("--burn-in", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--average/--no-average", default=False, show_default=True,
              help="Average estimates over post-burn-in sweeps.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--features", "features_path",
              type=click.Path(exists=True, dir_okay=False),
              help="Optional feature table for the baseline arm.")
@click.option("--features-format", type=click.Choice(["csv", "raw"]), default="csv",
              show_default=True)
@click.option("--top-n", type=click.IntRange(min=2), default=10, show_default=True,
              help="Words per topic in the coherence summary.")
@click.option("--output", "-o", "output_path", required=True,
              type=click.Path(dir_okay=False, writable=True))
@_friendly
def train(items_path, items_format, enrich, config_path, k, alpha, beta,
          iterations, burn_in, average, seed, features_path, features_format,
          top_n, output_path):
    """Train a topic model and write a self-contained model file."""
    items, config, corpus = _load_corpus(items_path, items_format, enrich,
                                         config_path)
    hyper = LdaHyperparams(K=k, alpha=alpha, beta=beta, iterations=iterations,
                           burn_in=burn_in, seed=seed, average=average)
    model = train_model(corpus, hyper)
    sim_lda = build_similarity(model)

    sim_features = None
    if features_path:
        table = load_features(features_path, format=features_format,
                              item_ids=model.item_ids)
        sim_features = build_similarity_from_features(table)

    report = coherence(model, corpus, top_n=top_n)
    save_model(output_path, ModelArchive(
        model=model,
        sim_lda=sim_lda,
        sim_features=sim_features,
        prep={"enrich": enrich, "config": config_to_dict(config)},
    ))

    click.echo(f"trained K={model.K} on {corpus.M} documents "
               f"(V={len(corpus.vocabulary)}, tokens={corpus.total_tokens})")
    click.echo(f"mean umass coherence over top {report.top_n} words: "
               f"{report.mean:.6f}")
    for topic, value in enumerate(report.per_topic):
        click.echo(f"  topic {topic}: {value:.6f}")
    click.echo(f"wrote {output_path}")


def _parse_k_values(_ctx, _param, value):
    try:
        parsed = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers")
    if not parsed:
        raise click.BadParameter("expected at least one K")
    return parsed


@main.command()
@click.option("--items", "items_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "items_format", type=_ITEM_FORMATS, default="jsonl",
              show_default=True)
@click.option("--enrich/--no-enrich", default=True, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--k-values", required=True, callback=_parse_k_values,
              help="Comma-separated list, e.g. 2,3,4,6.")
@click.option("--top-n", type=click.IntRange(min=2), default=10, show_default=True)
@click.option("--alpha", type=float, default=None)
@click.option("--beta", type=float, default=0.01, show_default=True)
@click.option("--iterations", type=click.IntRange(min=1), default=1000,
              show_default=True)
@click.option("--burn-in", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, writable=True),
              help="Write K,mean_coherence rows here.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False, writable=True),
              help="Write per-topic detail here.")
@click.option("--compare-enrichment", is_flag=True,
              help="Sweep description-only and enriched corpora side by side.")
@_friendly
def sweep(items_path, items_format, enrich, config_path, k_values, top_n,
          alpha, beta, iterations, burn_in, seed, csv_path, json_path,
          compare_enrichment):
    """Coherence-vs-K sweep for model selection."""
    items = load_items(items_path, format=items_format)
    config = (
        load_preprocess_config(config_path) if config_path else PreprocessConfig()
    )
    # hyper K is a placeholder; the sweep replaces it per entry
    hyper = LdaHyperparams(K=max(k_values), alpha=alpha, beta=beta,
                           iterations=iterations, burn_in=burn_in, seed=seed)

    if not compare_enrichment:
        corpus = build_corpus(items, enrich=enrich, config=config)
        rows = coherence_sweep(corpus, k_values, hyper, top_n=top_n,
                               csv_path=csv_path, json_path=json_path)
        for k, mean in rows:
            click.echo(f"K={k} mean_coherence={mean:.6f}")
        return

    series = {}
    for name, flag in (("description", False), ("enriched", True)):
        corpus = build_corpus(items, enrich=flag, config=config)
        series[name] = coherence_sweep(corpus, k_values, hyper, top_n=top_n)
    if json_path:
        payload = {
            "k_values": k_values,
            "series": {
                name: [{"K": k, "mean_coherence": mean} for k, mean in rows]
                for name, rows in series.items()
            },
        }
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as f:
            f.write("K,mean_coherence_description,mean_coherence_enriched\n")
            for i, k in enumerate(k_values):
                f.write(f"{k},{series['description'][i][1]!r},"
                        f"{series['enriched'][i][1]!r}\n")
    for name, rows in series.items():
        for k, mean in rows:
            click.echo(f"{name} K={k} mean_coherence={mean:.6f}")


@main.command("recommend")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--ratings", "ratings_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON object mapping item_id to a 1..5 rating.")
@click.option("-k", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--arm", type=click.Choice(["lda", "features"]), default="lda",
              show_default=True)
@click.option("--top-terms", type=click.IntRange(min=1), default=25,
              show_default=True)
@_friendly
def recommend_cmd(model_path, ratings_path, k, arm, top_terms):
    """Print a Recommendation JSON (with explanation) for a ratings file."""
    archive = load_model(model_path)
    with open(ratings_path, encoding="utf-8") as f:
        raw = json.load(f)
    if not isinstance(raw, dict):
        raise click.ClickException(
            f"{ratings_path}: expected a JSON object of item_id -> rating"
        )
    profile = UserProfile(user_id="cli", ratings={str(i): r for i, r in raw.items()})

    if arm == "features":
        if archive.sim_features is None:
            raise click.ClickException("model file has no feature similarity arm")
        sim = archive.sim_features
    else:
        sim = archive.sim_lda or build_similarity(archive.model)

    result = recommend(profile, sim, k=k, model=archive.model, top_terms=top_terms)
    click.echo(json.dumps(result.to_json_dict(), indent=2, sort_keys=True))


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--items", "items_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "items_format", type=_ITEM_FORMATS, default="jsonl",
              show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--ratings-log", envvar="TOPICREC_RATINGS_LOG",
              default="ratings.jsonl", show_default=True,
              type=click.Path(dir_okay=False, writable=True),
              help="Append-only ratings log (env: TOPICREC_RATINGS_LOG).")
@click.option("--static", "static_dir",
              type=click.Path(exists=True, file_okay=False),
              help="Serve a built web UI from this directory.")
@click.option("--top-n", type=click.IntRange(min=2), default=10, show_default=True)
@_friendly
def serve(model_path, items_path, items_format, host, port, ratings_log,
          static_dir, top_n):
    """Serve the JSON API (and optionally a static UI) over HTTP."""
    import uvicorn

    archive = load_model(model_path)
    items = load_items(items_path, format=items_format)
    bundle = build_bundle(items, archive, top_n=top_n)
    store = SessionStore(ratings_log)
    app = create_app(bundle, store, static_dir=static_dir)

    # fail fast with a clean message instead of a uvicorn traceback
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}")
    finally:
        probe.close()

    click.echo(f"serving {len(bundle.items)} items on http://{host}:{port} "
               f"(arms: {', '.join(bundle.arms)}; log: {ratings_log})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", "output_path",
              type=click.Path(dir_okay=False, writable=True),
              help="Write here instead of stdout.")
@_friendly
def export(model_path, output_path):
    """Dump a model file as debug-friendly JSON."""
    archive = load_model(model_path)
    text = json.dumps(export_model_json(archive.model), indent=2, sort_keys=True)
    if output_path:
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        click.echo(f"wrote {output_path}")
    else:
        click.echo(text)


if __name__ == "__main__":
    main()
