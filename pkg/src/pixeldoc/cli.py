"""``pixeldoc`` command line: dataset generation, pretraining, finetuning,
evaluation, masking preview, embedding, and search.

All randomness flows from ``--seed`` through per-purpose derived streams, so
reruns with the same flags produce byte-identical manifests, metrics logs,
and checkpoints. Figure outputs (previews, triptychs, heatmaps, loss curves)
land next to the delimited outputs in the run directory.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import corpus as corpus_mod
from . import report
from ._textdata import DEFAULT_TEXT
from .config import RunConfig, load_config, write_run_record
from .degrade import degrade
from .errors import DataError, PixeldocError
from .fonts import FontRegistry
from .imgio import load_png, save_png
from .manifest import ManifestEntry, plan_to_manifest_fields, read_manifest, write_manifest
from .masking import PatchGrid, sample_span_mask
from .model import (
    LrSchedule,
    OptimState,
    add_patch_head,
    add_sequence_head,
    checkpoint_fingerprint,
    head_patch,
    head_sequence,
    init_params,
    load_checkpoint,
    predict_in_batches,
    reconstruct_pixels,
    run_finetune,
    run_pretrain,
    save_checkpoint,
)
from .render import FontSpec, ParagraphSource, ScanMeta, layout_paragraphs, rasterize
from .rng import derive_rng
from .search import EmbeddingIndex, embed, embed_batch, load_index, query, save_index
from .tasks import (
    QAGenConfig,
    QATaskConfig,
    balance_test_set,
    load_qa_dataset,
    qa_metrics,
    save_qa_dataset,
    synth_qa_dataset,
    synth_seq_task,
)

CONFIG_OPTION = click.option(
    "--config", "config_path", type=click.Path(), default=None, help="JSON run config file."
)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PIXELDOC_THREADS", "1")))
    except ValueError:
        return 1


def _echo_json(data: dict) -> None:
    click.echo(json.dumps(data, sort_keys=True))


def _load_scan_paths(data_dir: Path, split: str | None) -> list[Path]:
    manifest = data_dir / "manifest.jsonl"
    if manifest.exists():
        entries = list(read_manifest(manifest))
        if split:
            entries = [e for e in entries if e.split == split]
        return [data_dir / e.path for e in entries]
    paths = sorted(data_dir.glob("**/*.png"))
    if not paths:
        raise DataError(f"no manifest.jsonl or PNG files under {data_dir}")
    return paths


def _load_scan_array(data_dir: Path, split: str | None = "train") -> np.ndarray:
    paths = _load_scan_paths(data_dir, split)
    if not paths:
        raise DataError(f"no scans for split {split!r} under {data_dir}")
    scans = [load_png(p) for p in paths]
    shapes = {s.shape for s in scans}
    if len(shapes) != 1:
        raise DataError(f"scans under {data_dir} have mixed shapes: {sorted(shapes)}")
    return np.stack(scans)


def _schedule(cfg: RunConfig) -> LrSchedule:
    return LrSchedule(
        peak_lr=cfg.optim.peak_lr,
        min_lr=cfg.optim.min_lr,
        warmup_steps=cfg.optim.warmup_steps,
        total_steps=cfg.optim.steps,
    )


@click.group()
def main() -> None:
    """Pixel-level language modelling toolkit for document scans."""


# -- synth ---------------------------------------------------------------


@main.command()
@click.option("--corpus", "corpus_path", type=click.Path(), default=None, help="Paragraph text file.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--n", "count", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=None, help="Root seed (overrides config).")
@click.option("--clean", is_flag=True, help="Skip the degradation pipeline.")
@click.option("--val-frac", type=float, default=0.0, show_default=True)
@CONFIG_OPTION
def synth(corpus_path, out_dir, count, seed, clean, val_frac, config_path) -> None:
    """Generate a synthetic scan dataset (PNGs + JSONL manifest)."""
    cfg = load_config(config_path, {"seed": seed})
    out = Path(out_dir)
    (out / "scans").mkdir(parents=True, exist_ok=True)
    text = Path(corpus_path).read_text(encoding="utf-8") if corpus_path else DEFAULT_TEXT
    source = ParagraphSource.from_text(text, cycle=True)
    registry = FontRegistry.builtin()
    canvas = (cfg.render.canvas, cfg.render.canvas)

    def build(i: int):
        rng = derive_rng(cfg.seed, "synth", i)
        plan = layout_paragraphs(
            source, rng, canvas=canvas, fonts=registry, size_range=cfg.render.size_range
        )
        scan = rasterize(plan, registry, backend=cfg.render.backend,
                         meta=ScanMeta(seed=i, source_id=f"synth-{i}"))
        transform = None
        if not clean:
            scan, applied = degrade(scan, cfg.degrade, rng)
            transform = applied.to_dict() or None
        return i, scan, plan, transform

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(build, range(count)))

    entries = []
    for i, scan, plan, transform in results:
        rel = f"scans/{i:05d}.png"
        save_png(scan.pixels, out / rel)
        boxes, spans = plan_to_manifest_fields(plan)
        entries.append(
            ManifestEntry(
                path=rel, seed=i, source_id=f"synth-{i}",
                word_boxes=boxes, spans=spans, transform=transform,
            )
        )
    if val_frac > 0:
        entries = corpus_mod.split_manifest(entries, val_frac, derive_rng(cfg.seed, "split"))
    write_manifest(entries, out / "manifest.jsonl")
    write_run_record(out, "synth", cfg, {"n": count, "clean": clean, "val_frac": val_frac})
    click.echo(f"wrote {count} scans to {out}")


# -- corpus ingest ----------------------------------------------------------


@main.group(name="corpus")
def corpus_group() -> None:
    """Page-image ingestion."""


@corpus_group.command()
@click.option("--pages", "pages_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--window", type=int, default=368, show_default=True)
@click.option("--stride", type=int, default=128, show_default=True)
@click.option("--val-frac", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=None)
@CONFIG_OPTION
def ingest(pages_dir, out_dir, window, stride, val_frac, seed, config_path) -> None:
    """Linearize page images and emit sliding-window crops."""
    cfg = load_config(config_path, {"seed": seed})
    pages = sorted(Path(pages_dir).glob("*.png"))
    if not pages:
        raise DataError(f"no PNG pages under {pages_dir}")
    entries = corpus_mod.ingest_pages(
        pages, out_dir, window=window, stride=stride, val_fraction=val_frac,
        rng=derive_rng(cfg.seed, "split"),
    )
    write_run_record(
        out_dir, "corpus-ingest", cfg,
        {"pages": len(pages), "window": window, "stride": stride, "val_frac": val_frac},
    )
    click.echo(f"ingested {len(pages)} pages into {len(entries)} crops")


# -- pretrain ---------------------------------------------------------------


@main.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--steps", type=int, default=None)
@click.option("--batch", "batch_size", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--peak-lr", type=float, default=None)
@CONFIG_OPTION
def pretrain(data_dir, out_dir, steps, batch_size, seed, peak_lr, config_path) -> None:
    """Masked-autoencoder pretraining on a scan dataset."""
    cfg = load_config(
        config_path,
        {"seed": seed, "optim.steps": steps, "optim.batch_size": batch_size,
         "optim.peak_lr": peak_lr},
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scans = _load_scan_array(Path(data_dir))
    if scans.shape[1] != cfg.model.image_hw or scans.shape[3] != cfg.model.channels:
        raise DataError(
            f"scans {scans.shape[1:]} do not match model image "
            f"{cfg.model.image_hw} x{cfg.model.channels}"
        )
    params = init_params(cfg.model, derive_rng(cfg.seed, "init"))
    optim = OptimState.for_params(params, _schedule(cfg), weight_decay=cfg.optim.weight_decay)
    losses = run_pretrain(
        params,
        scans,
        steps=cfg.optim.steps,
        batch_size=cfg.optim.batch_size,
        optim=optim,
        seed=cfg.seed,
        mask_ratio=cfg.mask.ratio,
        w_range=cfg.mask.w_range,
        h_range=cfg.mask.h_range,
        metrics_path=out / "metrics.jsonl",
    )
    save_checkpoint(params, out / "checkpoint.pxdc")
    report.save_loss_curve(out / "metrics.jsonl", out / "loss_curve.png")
    write_run_record(out, "pretrain", cfg, {"data": str(data_dir), "n_scans": len(scans)})
    final = losses[-1] if losses else float("nan")
    click.echo(f"pretrained {cfg.optim.steps} steps, final loss {final:.5f}")


# -- finetune ----------------------------------------------------------------


@main.group()
def finetune() -> None:
    """Head finetuning on downstream tasks."""


def _finetune_common(cfg: RunConfig, ckpt: str, out_dir: str):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    params = load_checkpoint(ckpt)
    return out, params


@finetune.command(name="seq")
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--ckpt", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--steps", type=int, default=None)
@click.option("--batch", "batch_size", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--peak-lr", type=float, default=None)
@CONFIG_OPTION
def finetune_seq(data_dir, ckpt, out_dir, steps, batch_size, seed, peak_lr, config_path) -> None:
    """Train the sequence head on a rendered sentence-pair dataset."""
    cfg = load_config(
        config_path,
        {"seed": seed, "optim.steps": steps, "optim.batch_size": batch_size,
         "optim.peak_lr": peak_lr},
    )
    out, params = _finetune_common(cfg, ckpt, out_dir)
    data = Path(data_dir)
    records = [json.loads(line) for line in (data / "seq.jsonl").read_text("utf-8").splitlines() if line]
    pixels = np.stack([load_png(data / r["image"]) for r in records])
    labels = np.array([int(r["label"]) for r in records])
    add_sequence_head(params, int(labels.max()) + 1, derive_rng(cfg.seed, "head"))
    optim = OptimState.for_params(params, _schedule(cfg), weight_decay=cfg.optim.weight_decay)
    run_finetune(
        params, pixels, "seq_head", labels,
        steps=cfg.optim.steps, batch_size=cfg.optim.batch_size, optim=optim,
        seed=cfg.seed, metrics_path=out / "metrics.jsonl",
    )
    save_checkpoint(params, out / "checkpoint.pxdc")
    report.save_loss_curve(out / "metrics.jsonl", out / "loss_curve.png")
    write_run_record(out, "finetune-seq", cfg, {"data": str(data_dir), "n": len(records)})
    click.echo(f"finetuned sequence head for {cfg.optim.steps} steps")


@finetune.command(name="qa")
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--ckpt", type=click.Path(exists=True), required=True)
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--steps", type=int, default=None)
@click.option("--batch", "batch_size", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--peak-lr", type=float, default=None)
@CONFIG_OPTION
def finetune_qa(data_dir, ckpt, out_dir, steps, batch_size, seed, peak_lr, config_path) -> None:
    """Train the patch head on a QA dataset."""
    cfg = load_config(
        config_path,
        {"seed": seed, "optim.steps": steps, "optim.batch_size": batch_size,
         "optim.peak_lr": peak_lr},
    )
    out, params = _finetune_common(cfg, ckpt, out_dir)
    instances = load_qa_dataset(data_dir)
    if not instances:
        raise DataError(f"no QA instances under {data_dir}")
    pixels = np.stack([inst.scan.pixels for inst in instances])
    targets = np.stack([inst.mask.bits for inst in instances])
    add_patch_head(params, derive_rng(cfg.seed, "head"))
    optim = OptimState.for_params(params, _schedule(cfg), weight_decay=cfg.optim.weight_decay)
    run_finetune(
        params, pixels, "patch_head", targets,
        steps=cfg.optim.steps, batch_size=cfg.optim.batch_size, optim=optim,
        seed=cfg.seed, metrics_path=out / "metrics.jsonl",
    )
    save_checkpoint(params, out / "checkpoint.pxdc")
    report.save_loss_curve(out / "metrics.jsonl", out / "loss_curve.png")
    write_run_record(out, "finetune-qa", cfg, {"data": str(data_dir), "n": len(instances)})
    click.echo(f"finetuned patch head for {cfg.optim.steps} steps")


# -- eval --------------------------------------------------------------------


@main.group(name="eval")
def eval_group() -> None:
    """Task evaluation."""


def _eval_qa_impl(data_dir, ckpt, pred_path, out_dir, balance, threshold, heatmaps, seed, config_path):
    cfg = load_config(config_path, {"seed": seed})
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    instances = load_qa_dataset(data_dir)
    if balance:
        instances = balance_test_set(instances, derive_rng(cfg.seed, "balance"))
    if pred_path:
        probs = np.load(pred_path)["probs"]
    else:
        if not ckpt:
            raise DataError("eval qa needs --ckpt or --pred")
        params = load_checkpoint(ckpt)
        pixels = np.stack([inst.scan.pixels for inst in instances])
        probs = predict_in_batches(lambda x: head_patch(params, x), pixels)
    grid = instances[0].mask.grid
    prob_list = [p.reshape(grid.rows, grid.cols) for p in probs]
    metrics = qa_metrics(prob_list, instances, threshold=threshold)
    (out / "metrics.json").write_text(json.dumps(metrics.to_dict(), sort_keys=True, indent=2) + "\n", "utf-8")
    if heatmaps:
        hm_dir = out / "heatmaps"
        hm_dir.mkdir(exist_ok=True)
        for k in range(min(heatmaps, len(instances))):
            report.save_patch_heatmap(instances[k].scan.pixels, prob_list[k], hm_dir / f"{k:04d}.png")
    write_run_record(out, "eval-qa", cfg, {"data": str(data_dir), "balanced": balance, "n": len(instances)})
    _echo_json(metrics.to_dict())


_EVAL_QA_OPTIONS = [
    click.option("--data", "data_dir", type=click.Path(exists=True), required=True),
    click.option("--ckpt", type=click.Path(exists=True), default=None),
    click.option("--pred", "pred_path", type=click.Path(exists=True), default=None,
                 help="NPZ with key 'probs' (N, rows, cols); bypasses the model."),
    click.option("--out", "out_dir", type=click.Path(), required=True),
    click.option("--balance/--no-balance", default=False, show_default=True),
    click.option("--threshold", type=float, default=0.5, show_default=True),
    click.option("--heatmaps", type=int, default=0, help="Dump the first N probability heatmaps."),
    click.option("--seed", type=int, default=None),
    CONFIG_OPTION,
]


def _with_options(fn, options):
    for option in reversed(options):
        fn = option(fn)
    return fn


@eval_group.command(name="qa")
def _eval_qa_cmd(**kwargs) -> None:
    """Evaluate patch-classification QA (binary/patch/overlap metrics)."""
    _eval_qa_impl(**kwargs)


_eval_qa_cmd = _with_options(_eval_qa_cmd, _EVAL_QA_OPTIONS)


# -- qa / seq dataset builders -------------------------------------------------


@main.group(name="qa")
def qa_group() -> None:
    """QA dataset construction and evaluation."""


@qa_group.command(name="build")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--n", "count", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--noisy", is_flag=True)
@click.option("--image-hw", type=int, default=64, show_default=True)
@click.option("--answer-words", type=int, default=1, show_default=True)
@click.option("--ocr-noise", type=float, default=0.0, show_default=True,
              help="Noisy OCR probability during label building (0 = ground truth).")
@CONFIG_OPTION
def qa_build(out_dir, count, seed, noisy, image_hw, answer_words, ocr_noise, config_path) -> None:
    """Generate a synthetic patch-classification QA dataset."""
    from .tasks import GroundTruthOcr, NoisyOcr

    cfg = load_config(config_path, {"seed": seed})
    task = QATaskConfig(image_hw=image_hw, noisy=noisy, degrade_cfg=cfg.degrade)
    gen = QAGenConfig(task=task, answer_word_count=answer_words)
    engine = NoisyOcr(ocr_noise, seed=cfg.seed) if ocr_noise > 0 else GroundTruthOcr()
    instances = synth_qa_dataset(count, derive_rng(cfg.seed, "qa"), gen, engine=engine)
    save_qa_dataset(instances, out_dir)
    write_run_record(
        out_dir, "qa-build", cfg,
        {"n": count, "noisy": noisy, "image_hw": image_hw, "answer_words": answer_words,
         "ocr_noise": ocr_noise},
    )
    n_with = sum(1 for i in instances if i.has_answer)
    click.echo(f"built {count} QA instances ({n_with} with answers) in {out_dir}")


@qa_group.command(name="eval")
def _qa_eval_cmd(**kwargs) -> None:
    """Alias of ``pixeldoc eval qa``."""
    _eval_qa_impl(**kwargs)


_qa_eval_cmd = _with_options(_qa_eval_cmd, _EVAL_QA_OPTIONS)


@main.group(name="seq")
def seq_group() -> None:
    """Sentence-pair dataset construction."""


@seq_group.command(name="build")
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--n", "count", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--noisy", is_flag=True)
@click.option("--image-hw", type=int, default=64, show_default=True)
@CONFIG_OPTION
def seq_build(out_dir, count, seed, noisy, image_hw, config_path) -> None:
    """Generate a rendered sentence-pair classification dataset."""
    from .tasks import FILLER_VOCAB

    cfg = load_config(config_path, {"seed": seed})
    pairs = synth_seq_task(
        list(FILLER_VOCAB), count, noisy, derive_rng(cfg.seed, "seq"),
        canvas=(image_hw, image_hw), degrade_cfg=cfg.degrade,
    )
    out = Path(out_dir)
    (out / "images").mkdir(parents=True, exist_ok=True)
    with open(out / "seq.jsonl", "w", encoding="utf-8") as fh:
        for k, (scan, label) in enumerate(pairs):
            rel = f"images/{k:05d}.png"
            save_png(scan.pixels, out / rel)
            fh.write(json.dumps({"image": rel, "label": label, "seed": k}, sort_keys=True) + "\n")
    write_run_record(out_dir, "seq-build", cfg, {"n": count, "noisy": noisy, "image_hw": image_hw})
    click.echo(f"built {count} sentence-pair scans in {out_dir}")


# -- previews and embedding -----------------------------------------------------


@main.command(name="mask-preview")
@click.option("--scan", "scan_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--ratio", type=float, default=0.28, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--patch-size", type=int, default=16, show_default=True)
def mask_preview(scan_path, out_path, ratio, seed, patch_size) -> None:
    """Render a sampled occlusion mask over a scan."""
    pixels = load_png(scan_path)
    grid = PatchGrid.for_image(pixels.shape[0], pixels.shape[1], patch_size)
    mask = sample_span_mask(grid, ratio, derive_rng(seed, "preview"))
    report.save_mask_preview(pixels, mask, out_path)
    click.echo(f"wrote mask preview ({mask.count()}/{grid.n_patches} patches) to {out_path}")


@main.command(name="recon-dump")
@click.option("--ckpt", type=click.Path(exists=True), required=True)
@click.option("--scan", "scan_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--ratio", type=float, default=0.28, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def recon_dump(ckpt, scan_path, out_path, ratio, seed) -> None:
    """Original / masked / reconstruction triptych for one scan."""
    params = load_checkpoint(ckpt)
    pixels = load_png(scan_path)
    grid = params.config.grid
    mask = sample_span_mask(grid, ratio, derive_rng(seed, "recon"))
    recon = reconstruct_pixels(params, pixels, mask)
    report.save_recon_triptych(pixels, mask, recon, out_path)
    click.echo(f"wrote reconstruction triptych to {out_path}")


@main.command(name="embed")
@click.option("--ckpt", type=click.Path(exists=True), required=True)
@click.option("--scans", "scans_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--split", default=None, help="Restrict to one manifest split.")
def embed_cmd(ckpt, scans_dir, out_path, split) -> None:
    """Embed scans and write a PXIX index."""
    params = load_checkpoint(ckpt)
    paths = _load_scan_paths(Path(scans_dir), split)
    pixels = np.stack([load_png(p) for p in paths])
    vectors = embed_batch(params, pixels)
    ids = [str(p.relative_to(scans_dir)) for p in paths]
    index = EmbeddingIndex(vectors, ids, fingerprint=checkpoint_fingerprint(ckpt))
    save_index(index, out_path)
    click.echo(f"indexed {len(ids)} scans into {out_path}")


@main.command(name="search")
@click.option("--index", "index_path", type=click.Path(exists=True), required=True)
@click.option("--probe", "probe_path", type=click.Path(exists=True), required=True)
@click.option("--ckpt", type=click.Path(exists=True), required=True)
@click.option("-k", type=int, default=10, show_default=True)
@click.option("--allow-mismatch", is_flag=True, help="Search with a checkpoint other than the one that built the index.")
def search_cmd(index_path, probe_path, ckpt, k, allow_mismatch) -> None:
    """Nearest scans to a probe image by cosine similarity."""
    index = load_index(index_path)
    fingerprint = checkpoint_fingerprint(ckpt)
    if index.fingerprint and fingerprint != index.fingerprint and not allow_mismatch:
        raise DataError(
            f"checkpoint fingerprint {fingerprint} != index fingerprint "
            f"{index.fingerprint} (pass --allow-mismatch to override)"
        )
    params = load_checkpoint(ckpt)
    probe = embed(params, load_png(probe_path))
    for scan_id, cosine in query(index, probe, min(k, len(index))):
        click.echo(f"{cosine:.6f}\t{scan_id}")


def entrypoint() -> None:
    try:
        main(standalone_mode=False)
    except PixeldocError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    entrypoint()
