"""Single executable for the whole pipeline.

Every mutating subcommand writes its outputs plus a manifest that embeds
the effective config, its digest, the seed, and the tool version, so any
output file is reproducible from (inputs, config, seed) alone. Manifests
carry no timestamps for exactly that reason. ``--dry-run`` validates and
writes nothing.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from ._version import __version__
from . import curation, decontam, mixture
from .cot import batch as cot_batch
from .cot import prompts as cot_prompts
from .cot.stratify import stratify as stratify_items
from .cot import traces as cot_traces
from .evalharness import client as eval_client
from .evalharness import runner as eval_runner
from .evalharness import scoring as eval_scoring
from .evalharness.aggregate import (
    DEFAULT_SUITE_SET,
    aggregate as aggregate_scores,
    compare as compare_scores,
    display as display_score,
    load_reference_scores,
)
from .io import IngestDiagnostic, ingest, write_jsonl
from .types import BenchmarkItem, Document


class CliError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


def _config_digest(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode("utf-8")).hexdigest()


def _write_manifest(out_dir: Path, command: str, config: dict, outputs: list[str]) -> None:
    manifest = {
        "tool": "mazij",
        "tool_version": __version__,
        "command": command,
        "config": config,
        "config_digest": _config_digest(config),
        "outputs": outputs,
    }
    path = out_dir / f"{command.replace(' ', '_')}.manifest.json"
    path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        raise CliError("missing-config", f"config file not found: {path}")
    try:
        obj = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError("invalid-config", f"config file is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        raise CliError("invalid-config", "config root must be a JSON object")
    return obj


def _require_input(path: str, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise CliError("missing-input", f"{what} not found: {path}")
    return p


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_documents(path: str, on_error: str = "abort") -> tuple[list[Document], list[IngestDiagnostic]]:
    diagnostics: list[IngestDiagnostic] = []
    docs = list(ingest(_require_input(path, "corpus file"), "document",
                       on_error=on_error, diagnostics=diagnostics))
    return docs, diagnostics


def _read_items(path: str, on_error: str = "abort") -> tuple[list[BenchmarkItem], list[IngestDiagnostic]]:
    diagnostics: list[IngestDiagnostic] = []
    items = list(ingest(_require_input(path, "benchmark file"), "benchmark",
                        on_error=on_error, diagnostics=diagnostics))
    return items, diagnostics


# ── subcommands ──────────────────────────────────────────────────────────


def cmd_ingest(args) -> int:
    config = {"input": args.input, "schema": args.schema, "on_error": args.on_error}
    reader = _read_documents if args.schema == "document" else _read_items
    records, diagnostics = reader(args.input, args.on_error)
    for diag in diagnostics:
        print(f"skipped {diag}", file=sys.stderr)
    if args.dry_run:
        print(f"ok: {len(records)} records valid, {len(diagnostics)} skipped (dry run)")
        return 0
    out = _out_dir(args)
    out_name = "documents.jsonl" if args.schema == "document" else "benchmarks.jsonl"
    write_jsonl(out / out_name, records)
    _write_manifest(out, "ingest", config, [out_name])
    print(f"ingested {len(records)} records -> {out / out_name}")
    return 0


def cmd_decontaminate(args) -> int:
    params = decontam.IndexParams(
        ngram_size=args.ngram_size,
        lsh=decontam.LshParams(num_perm=args.num_perm, bands=args.bands,
                               rows=args.num_perm // args.bands),
        fuzzy_threshold=args.threshold,
    )
    config = {
        "corpus": args.corpus, "benchmarks": args.benchmarks, "seed": args.seed,
        "params": params.to_obj(), "normalization_version": decontam.NORMALIZATION_VERSION,
    }
    docs, _ = _read_documents(args.corpus)
    items, _ = _read_items(args.benchmarks)
    if args.dry_run:
        print(f"ok: {len(docs)} docs, {len(items)} benchmark items (dry run)")
        return 0
    index = decontam.build_index(items, params, seed=args.seed)
    retained, reports = decontam.filter_corpus(docs, index)
    out = _out_dir(args)
    write_jsonl(out / "retained.jsonl", retained)
    decontam.write_reports(out / "contamination_reports.jsonl", reports)
    outputs = ["retained.jsonl", "contamination_reports.jsonl"]
    if args.save_index:
        decontam.save_index(index, out / "contamination_index.json")
        outputs.append("contamination_index.json")
    _write_manifest(out, "decontaminate", config, outputs)
    print(f"retained {len(retained)}/{len(docs)} docs; {len(reports)} removed")
    return 0


def cmd_dedup(args) -> int:
    config = {"corpus": args.corpus, "threshold": args.threshold, "seed": args.seed}
    docs, _ = _read_documents(args.corpus)
    if args.dry_run:
        print(f"ok: {len(docs)} docs (dry run)")
        return 0
    kept, clusters = curation.dedup(docs, threshold=args.threshold, seed=args.seed)
    out = _out_dir(args)
    write_jsonl(out / "kept.jsonl", kept)
    curation.write_clusters(out / "clusters.jsonl", clusters)
    _write_manifest(out, "dedup", config, ["kept.jsonl", "clusters.jsonl"])
    print(f"kept {len(kept)}/{len(docs)} docs in {len(clusters)} near-duplicate clusters")
    return 0


def cmd_quality(args) -> int:
    unsafe_terms = []
    if args.unsafe_terms:
        unsafe_terms = _require_input(args.unsafe_terms, "unsafe-terms file").read_text(
            encoding="utf-8"
        ).split()
    rules = curation.QualityRules(
        min_tokens=args.min_tokens,
        max_repeated_line_ratio=args.max_repeated_line_ratio,
        min_entropy_bits=args.min_entropy,
        unsafe_hook=curation.TermListSafetyHook(unsafe_terms) if unsafe_terms else None,
    )
    config = {"corpus": args.corpus, "rules": rules.to_obj()}
    docs, _ = _read_documents(args.corpus)
    if args.dry_run:
        print(f"ok: {len(docs)} docs (dry run)")
        return 0
    verdicts = [curation.quality_filter(doc, rules) for doc in docs]
    kept = [doc for doc, v in zip(docs, verdicts) if v.kept]
    out = _out_dir(args)
    write_jsonl(out / "kept.jsonl", kept)
    curation.write_verdicts(out / "quality_reports.jsonl", verdicts)
    _write_manifest(out, "quality", config, ["kept.jsonl", "quality_reports.jsonl"])
    print(f"kept {len(kept)}/{len(docs)} docs")
    return 0


def _accounting_table(manifest: mixture.MixtureManifest) -> str:
    rows = [f"{'cell':<24}{'target':>14}{'achieved':>14}{'shortfall':>12}"]
    for cell in sorted(manifest.cell_targets):
        target = manifest.cell_targets[cell]
        achieved = manifest.cell_achieved.get(cell, 0)
        short = max(0, target - achieved)
        rows.append(f"{cell:<24}{target:>14,}{achieved:>14,}{short:>12,}")
    return "\n".join(rows)


def cmd_mix(args) -> int:
    spec_obj = _load_config_file(args.spec) if args.spec else {}
    spec = mixture.MixtureSpec.from_obj(spec_obj) if spec_obj else mixture.MixtureSpec()
    if args.seed is not None:
        spec.seed = args.seed
    violations = mixture.validate_spec(spec)
    if violations:
        raise CliError("invalid-spec", "; ".join(violations))
    config = {"pool": args.pool, "spec": spec.to_obj()}
    pool, _ = _read_documents(args.pool)
    if args.dry_run:
        print(f"ok: spec valid, pool of {len(pool)} docs (dry run)")
        return 0
    manifest = mixture.build_mixture(pool, spec)
    audit = mixture.audit_manifest(manifest, pool, spec)
    out = _out_dir(args)
    manifest.save(out / "mixture_manifest.json")
    _write_manifest(out, "mix", config, ["mixture_manifest.json"])
    print(_accounting_table(manifest))
    if audit:
        raise CliError("audit-failed", "; ".join(audit))
    print(f"selected {len(manifest.selected_doc_ids)} docs; audit ok")
    return 0


def cmd_cot_stratify(args) -> int:
    config = {"items": args.items, "buckets": args.buckets}
    items, _ = _read_items(args.items)
    buckets = stratify_items(items, args.buckets)
    if args.dry_run:
        print(f"ok: {len(items)} items into {args.buckets} buckets (dry run)")
        return 0
    out = _out_dir(args)
    obj = {str(b): [it.task_id for it in members] for b, members in buckets.items()}
    (out / "strata.json").write_text(
        json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    _write_manifest(out, "cot stratify", config, ["strata.json"])
    print(f"stratified {len(items)} items into {args.buckets} buckets")
    return 0


def cmd_cot_prompts(args) -> int:
    config = {"items": args.items}
    items, _ = _read_items(args.items)
    if args.dry_run:
        print(f"ok: {len(items)} prompts would render (dry run)")
        return 0
    out = _out_dir(args)
    with (out / "prompts.jsonl").open("w", encoding="utf-8") as fh:
        for item in items:
            prompt = cot_prompts.render_teacher_prompt(item)
            fh.write(json.dumps(
                {"item_id": item.task_id, "prompt": prompt,
                 "n_options": len(item.options)},
                ensure_ascii=False) + "\n")
    _write_manifest(out, "cot prompts", config, ["prompts.jsonl"])
    print(f"rendered {len(items)} teacher prompts")
    return 0


def _make_teacher_endpoint(endpoint: dict):
    kind = endpoint.get("kind", "http")
    if kind == "http":
        return cot_batch.HttpChatClient(
            url=endpoint["url"], api_key_env=endpoint.get("api_key_env"),
        )
    if kind == "stub_valid_trace":
        # offline endpoint: answers every prompt with a well-formed trace
        trace = cot_traces.CoTTrace(
            analysis="المسألة تعتمد على القاعدة النحوية الأساسية.",
            eliminations=[(1, "يخالف السياق.")],
            linguistic_check="الخيار أ سليم نحويا وأسلوبيا.",
            synthesis="الخيار أ هو الصحيح.",
            final_answer=0,
        )
        text = cot_traces.serialize_trace(trace)
        return type("StubTeacher", (), {"complete": staticmethod(lambda request: text)})()
    raise CliError("invalid-config", f"unknown teacher endpoint kind {kind!r}")


def cmd_cot_batch(args) -> int:
    file_config = _load_config_file(args.config)
    endpoint = file_config.get("endpoint", {})
    if args.endpoint_kind:
        endpoint["kind"] = args.endpoint_kind
    if args.endpoint_url:
        endpoint["url"] = args.endpoint_url
    decoding = cot_batch.DecodingParams(**file_config.get("decoding", {}))
    policy = cot_batch.RetryPolicy(
        max_in_flight=args.jobs, **file_config.get("retry", {})
    )
    config = {"prompts": args.prompts, "endpoint": endpoint,
              "decoding": decoding.__dict__, "retry": policy.__dict__}
    prompts_path = _require_input(args.prompts, "prompts file")
    requests = []
    with prompts_path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            requests.append(cot_batch.TeacherRequest(
                item_id=obj["item_id"], prompt=obj["prompt"], params=decoding))
    if args.dry_run:
        print(f"ok: {len(requests)} requests ready (dry run)")
        return 0
    client = _make_teacher_endpoint(endpoint)
    out = _out_dir(args)
    with cot_batch.JsonlSink(out / "raw_responses.jsonl") as sink:
        responses = cot_batch.run_batch(requests, client, policy, sink=sink)
    with (out / "responses.jsonl").open("w", encoding="utf-8") as fh:
        for resp in responses:
            fh.write(json.dumps(resp.to_obj(), ensure_ascii=False) + "\n")
    _write_manifest(out, "cot batch", config, ["raw_responses.jsonl", "responses.jsonl"])
    ok = sum(1 for r in responses if r.status == "ok")
    print(f"{ok}/{len(responses)} teacher responses ok")
    return 0


def cmd_cot_validate(args) -> int:
    config = {"responses": args.responses, "items": args.items,
              "trace_format": cot_traces.DEFAULT_TRACE_FORMAT.version}
    n_options_by_id = {}
    if args.items:
        items, _ = _read_items(args.items)
        n_options_by_id = {it.task_id: len(it.options) for it in items}
    responses_path = _require_input(args.responses, "responses file")
    records = []
    with responses_path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            raw = obj.get("text", "")
            n_options = n_options_by_id.get(obj["item_id"], args.n_options)
            records.append(cot_traces.make_record(obj["item_id"], raw, n_options))
    if args.dry_run:
        print(f"ok: {len(records)} responses would validate (dry run)")
        return 0
    out = _out_dir(args)
    cot_traces.write_trace_store(out / "trace_store.jsonl", records)
    _write_manifest(out, "cot validate", config, ["trace_store.jsonl"])
    valid = sum(1 for r in records if r.valid)
    print(f"{valid}/{len(records)} traces valid")
    return 0


def cmd_sft_reformulate(args) -> int:
    style = cot_prompts.ReformulationStyle(args.style)
    config = {"items": args.items, "style": style.value}
    items, _ = _read_items(args.items)
    if args.dry_run:
        print(f"ok: {len(items)} items would reformulate (dry run)")
        return 0
    out = _out_dir(args)
    with (out / "instruction_pairs.jsonl").open("w", encoding="utf-8") as fh:
        for item in items:
            pair = cot_prompts.reformulate_mc(item, style)
            fh.write(json.dumps(pair.to_obj(), ensure_ascii=False) + "\n")
    _write_manifest(out, "sft reformulate", config, ["instruction_pairs.jsonl"])
    print(f"reformulated {len(items)} items")
    return 0


def _make_model_client(client_config: dict, items: list[BenchmarkItem]):
    kind = client_config.get("kind", "http")
    if kind == "http":
        return eval_client.HttpModelClient(
            completion_url=client_config["completion_url"],
            logprob_url=client_config.get("logprob_url"),
            model=client_config.get("model", ""),
            api_key_env=client_config.get("api_key_env"),
        )
    if kind == "stub_gold":
        # smoke/dry-run client: emits the gold letter for every prompt
        by_prompt = {
            eval_runner.render_prompt(item): f"Answer: {cot_traces.option_letter(item.gold_index)}"
            for item in items
        }
        return eval_client.StubCompletionClient(by_prompt)
    if kind == "stub_fixed":
        return eval_client.StubCompletionClient(client_config.get("text", ""))
    raise CliError("invalid-config", f"unknown model client kind {kind!r}")


def cmd_eval_run(args) -> int:
    file_config = _load_config_file(args.config)
    client_config = file_config.get("client", {})
    if args.client_kind:
        client_config["kind"] = args.client_kind
    mode = (eval_scoring.ScoringMode.PARSE_AFTER_REASONING if args.mode == "parse"
            else eval_scoring.ScoringMode.LOGLIK_NORM)
    normalizer = eval_scoring.Normalizer(args.normalizer)
    config = {"items": args.items, "mode": mode.value, "client": client_config,
              "normalizer": normalizer.value}
    items, _ = _read_items(args.items)
    if args.dry_run:
        print(f"ok: {len(items)} items ready under mode {mode.value} (dry run)")
        return 0
    client = _make_model_client(client_config, items)
    score, results = eval_runner.run_task(
        items, mode, client, normalizer=normalizer, jobs=args.jobs
    )
    out = _out_dir(args)
    eval_runner.write_results(out / "results.jsonl", results)
    eval_runner.write_summary(out / "summary.json", score, mode, _config_digest(config))
    _write_manifest(out, "eval run", config, ["results.jsonl", "summary.json"])
    print(f"{score.suite}: accuracy {display_score(score.accuracy)} "
          f"({score.correct} correct, {score.incorrect} incorrect, {score.invalid} invalid)")
    return 0


def cmd_eval_aggregate(args) -> int:
    scores_by_model = load_reference_scores(
        _require_input(args.scores, "scores file"))
    suites = tuple(args.suites.split(",")) if args.suites else DEFAULT_SUITE_SET
    rows = {}
    models = [args.model] if args.model else sorted(scores_by_model)
    for model in models:
        if model not in scores_by_model:
            raise CliError("missing-input", f"model {model!r} not in scores file")
        rows[model] = aggregate_scores(scores_by_model[model], suites)
    width = max(len(m) for m in rows) + 2
    print(f"{'model':<{width}}avg")
    for model, avg in rows.items():
        print(f"{model:<{width}}{display_score(avg)}")
    if args.out:
        out = _out_dir(args)
        (out / "aggregate.json").write_text(
            json.dumps({m: rows[m] for m in rows}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        _write_manifest(out, "eval aggregate",
                        {"scores": args.scores, "suites": list(suites)}, ["aggregate.json"])
    return 0


def cmd_eval_compare(args) -> int:
    scores_by_model = load_reference_scores(
        _require_input(args.scores, "scores file"))
    for name in (args.model, args.against):
        if name not in scores_by_model:
            raise CliError("missing-input", f"model {name!r} not in scores file")
    table = compare_scores(
        scores_by_model[args.model], scores_by_model[args.against], args.against)
    width = max(len(s) for s in table.per_suite) + 2
    print(f"{args.model} vs {args.against}")
    for suite, margin in table.per_suite.items():
        print(f"{suite:<{width}}{margin:+.2f}")
    print(f"{'average':<{width}}{table.average_margin:+.2f}")
    if args.out:
        out = _out_dir(args)
        (out / "compare.json").write_text(
            json.dumps(table.to_obj(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        _write_manifest(out, "eval compare",
                        {"scores": args.scores, "model": args.model,
                         "against": args.against}, ["compare.json"])
    return 0


def cmd_report(args) -> int:
    out = Path(args.out)
    if not out.exists():
        raise CliError("missing-input", f"run directory not found: {args.out}")
    manifests = sorted(out.glob("*.manifest.json"))
    if not manifests:
        raise CliError("missing-input", f"no manifests under {args.out}")
    print(f"run directory: {out}")
    for mpath in manifests:
        obj = json.loads(mpath.read_text(encoding="utf-8"))
        outputs = ", ".join(obj.get("outputs", []))
        print(f"  {obj['command']:<18} v{obj['tool_version']}  "
              f"digest {obj['config_digest'][:12]}  outputs: {outputs}")
    summary = out / "summary.json"
    if summary.exists():
        obj = json.loads(summary.read_text(encoding="utf-8"))
        counts = obj.get("counts", {})
        print(f"  summary: {obj.get('suite')} accuracy "
              f"{display_score(obj.get('accuracy', 0.0))} "
              f"(correct {counts.get('correct')}, incorrect {counts.get('incorrect')}, "
              f"invalid {counts.get('invalid')})")
    return 0


# ── parser wiring ────────────────────────────────────────────────────────


def _add_common(p: argparse.ArgumentParser, *, out_required: bool = True) -> None:
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dry-run", action="store_true")
    p.add_argument("--out", required=out_required, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mazij", description="bilingual corpus curation and evaluation pipeline")
    parser.add_argument("--version", action="version", version=f"mazij {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and normalize a JSONL file")
    p.add_argument("--input", required=True)
    p.add_argument("--schema", choices=["document", "benchmark"], default="document")
    p.add_argument("--on-error", choices=["abort", "skip"], default="abort")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("decontaminate", help="remove benchmark overlap from a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--benchmarks", required=True)
    p.add_argument("--ngram-size", type=int, default=13)
    p.add_argument("--num-perm", type=int, default=128)
    p.add_argument("--bands", type=int, default=16)
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--save-index", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_decontaminate)

    p = sub.add_parser("dedup", help="drop near-duplicate documents")
    p.add_argument("--corpus", required=True)
    p.add_argument("--threshold", type=float, default=0.8)
    _add_common(p)
    p.set_defaults(func=cmd_dedup)

    p = sub.add_parser("quality", help="filter low-information or unsafe documents")
    p.add_argument("--corpus", required=True)
    p.add_argument("--min-tokens", type=int, default=16)
    p.add_argument("--max-repeated-line-ratio", type=float, default=0.3)
    p.add_argument("--min-entropy", type=float, default=2.0)
    p.add_argument("--unsafe-terms", default=None, help="whitespace-separated term file")
    _add_common(p)
    p.set_defaults(func=cmd_quality)

    p = sub.add_parser("mix", help="assemble the token-budgeted mixture")
    p.add_argument("--pool", required=True)
    p.add_argument("--spec", default=None, help="MixtureSpec JSON (defaults to published budgets)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dry-run", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mix)

    cot = sub.add_parser("cot", help="reasoning-trace tooling").add_subparsers(
        dest="cot_command", required=True)

    p = cot.add_parser("stratify", help="bucket questions by complexity")
    p.add_argument("--items", required=True)
    p.add_argument("--buckets", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_cot_stratify)

    p = cot.add_parser("prompts", help="render teacher prompts")
    p.add_argument("--items", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_cot_prompts)

    p = cot.add_parser("batch", help="run a teacher batch")
    p.add_argument("--prompts", required=True)
    p.add_argument("--endpoint-kind", default=None,
                   choices=["http", "stub_valid_trace"])
    p.add_argument("--endpoint-url", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_cot_batch)

    p = cot.add_parser("validate", help="parse and validate raw traces")
    p.add_argument("--responses", required=True)
    p.add_argument("--items", default=None, help="benchmark JSONL for option counts")
    p.add_argument("--n-options", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_cot_validate)

    sft = sub.add_parser("sft", help="supervised-pair tooling").add_subparsers(
        dest="sft_command", required=True)
    p = sft.add_parser("reformulate", help="multiple-choice items to instruction pairs")
    p.add_argument("--items", required=True)
    p.add_argument("--style", choices=[s.value for s in cot_prompts.ReformulationStyle],
                   default="direct")
    _add_common(p)
    p.set_defaults(func=cmd_sft_reformulate)

    ev = sub.add_parser("eval", help="evaluation harness").add_subparsers(
        dest="eval_command", required=True)

    p = ev.add_parser("run", help="score a benchmark task")
    p.add_argument("--items", required=True)
    p.add_argument("--mode", choices=["loglik", "parse"], required=True)
    p.add_argument("--normalizer", choices=[n.value for n in eval_scoring.Normalizer],
                   default="ByteLength")
    p.add_argument("--client-kind", default=None,
                   choices=["http", "stub_gold", "stub_fixed"])
    _add_common(p)
    p.set_defaults(func=cmd_eval_run)

    p = ev.add_parser("aggregate", help="average per-suite scores")
    p.add_argument("--scores", required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--suites", default=None, help="comma-separated suite subset")
    _add_common(p, out_required=False)
    p.set_defaults(func=cmd_eval_aggregate)

    p = ev.add_parser("compare", help="margins against a reference model")
    p.add_argument("--scores", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--against", required=True)
    _add_common(p, out_required=False)
    p.set_defaults(func=cmd_eval_compare)

    p = sub.add_parser("report", help="summarize a run directory")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dry-run", action="store_true")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": {"code": exc.code, "message": str(exc)}}),
              file=sys.stderr)
        return 1
    except Exception as exc:
        print(json.dumps({"error": {"code": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
