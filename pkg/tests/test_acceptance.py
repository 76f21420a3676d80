"""Acceptance suite: one test per release criterion, each with its stated
tolerance and runtime budget. The terminal summary prints a PASS/FAIL line
per criterion (see conftest)."""

from __future__ import annotations

import itertools
import json
import random
import time
from pathlib import Path

import pytest

from conftest import (
    ARABIC_WORDS,
    PUBLISHED_SCORES,
    brute_force_jaccard,
    make_document,
    make_item,
    random_sentence,
)
from mazij.cli import main
from mazij.cot.traces import (
    CoTTrace,
    option_letter,
    parse_trace,
    serialize_trace,
    validate_trace,
)
from mazij.curation import dedup
from mazij.decontam import Verdict, build_index, filter_corpus
from mazij.evalharness.client import StubCompletionClient, StubLogprobClient
from mazij.evalharness.runner import render_prompt, run_task
from mazij.evalharness.scoring import Normalizer, ScoringMode, extract_choice, score_loglik
from mazij.io import write_jsonl
from mazij.mixture import MixtureSpec, audit_manifest, build_mixture, validate_spec
from mazij.normalize import normalize
from mazij.sketch import MinHasher, estimated_jaccard
from mazij.types import BenchmarkItem, Category, Document, Language, Suite

from test_cot_traces import MUTATIONS, build_raw, essence, random_valid_trace
from test_eval_scoring import EXTRACTION_FIXTURES


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_aggregation_oracle_published_averages(capsys):
    """eval aggregate reproduces 80.18 / 77.87 / 73.62 at two decimals."""
    expected = {
        "Arabic-DeepSeek-R1": "80.18",
        "GPT-5.1": "77.87",
        "DeepSeek-R1-baseline": "73.62",
    }
    with Stopwatch() as clock:
        for model, value in expected.items():
            code = main(["eval", "aggregate", "--scores", str(PUBLISHED_SCORES),
                         "--model", model])
            out = capsys.readouterr().out
            assert code == 0
            row = next(line for line in out.splitlines() if line.startswith(model))
            assert row.split()[-1] == value
    assert clock.elapsed < 1.0


def test_margin_oracle_published_margins(capsys):
    """eval compare reproduces +4.32, +2.31, and +8.43 at two decimals."""
    with Stopwatch() as clock:
        cases = [
            ("D2IL-Arabic-Qwen2.5-72B-Instruct-v0.1", "average", "+4.32"),
            ("GPT-5.1", "average", "+2.31"),
            ("AIC-1", "MadinahQA", "+8.43"),
        ]
        for against, row_name, margin in cases:
            code = main(["eval", "compare", "--scores", str(PUBLISHED_SCORES),
                         "--model", "Arabic-DeepSeek-R1", "--against", against])
            out = capsys.readouterr().out
            assert code == 0
            row = next(line for line in out.splitlines() if line.startswith(row_name))
            assert row.split()[-1] == margin, f"{row_name} vs {against}"
    assert clock.elapsed < 1.0


def test_mixture_arithmetic_and_budget_adherence(rng):
    """Published budgets validate at exactly 372.0M; a 10k-doc pool fills
    every cell within tolerance with Arabic share in [0.78, 0.82]."""
    with Stopwatch() as clock:
        published = MixtureSpec()
        assert validate_spec(published) == []
        assert sum(published.category_budgets.values()) == 372_000_000

        # same budget shape at desk scale (1/1000), 10k-document pool
        scaled = MixtureSpec(
            total_budget=372_000,
            category_budgets={
                Category.LITERATURE: 103_200,
                Category.STEM: 90_000,
                Category.CREATIVE: 70_000,
                Category.REVIEWS: 60_200,
                Category.LEGAL: 40_000,
                Category.SOCIAL: 8_600,
            },
            seed=17,
        )
        assert validate_spec(scaled) == []
        categories = list(Category)
        pool = [
            make_document(
                rng, f"pool{i}",
                language=Language.ARABIC if rng.random() < 0.8 else Language.ENGLISH,
                category=categories[i % len(categories)],
                n_tokens=rng.randint(40, 180),
            )
            for i in range(10_000)
        ]
        manifest = build_mixture(pool, scaled)
        assert manifest.shortfalls == []
        for cell, target in manifest.cell_targets.items():
            assert abs(manifest.cell_achieved[cell] - target) <= manifest.tolerance, cell
        total = sum(manifest.achieved_tokens_per_language.values())
        share = manifest.achieved_tokens_per_language["Arabic"] / total
        assert 0.78 <= share <= 0.82
        assert audit_manifest(manifest, pool, scaled) == []
    assert clock.elapsed < 30.0


def _perturb(text: str, rng: random.Random, max_fraction: float = 0.05) -> str:
    words = text.split()
    n_edits = rng.randint(1, max(1, int(len(words) * max_fraction)))
    for _ in range(n_edits):
        words[rng.randrange(len(words))] = rng.choice(ARABIC_WORDS)
    return " ".join(words)


def test_decontamination_soundness_and_recall(rng):
    """100% of verbatim and >=95% of lightly-perturbed injections removed,
    <=1% false positives, fuzzy similarities cross-checked against the
    brute-force shingle Jaccard oracle."""
    with Stopwatch() as clock:
        items = [make_item(rng, f"bench{i}", question_tokens=40) for i in range(150)]
        item_text = {f"bench{i}": items[i].benchmark_text() for i in range(150)}
        index = build_index(items, seed=99)

        clean = [make_document(rng, f"clean{i}", n_tokens=rng.randint(30, 120))
                 for i in range(5_000)]
        verbatim = [
            Document.create(id=f"verbatim{i}", text=item_text[f"bench{i % 150}"],
                            language=Language.ARABIC, category=Category.STEM)
            for i in range(100)
        ]
        perturbed = [
            Document.create(id=f"perturbed{i}",
                            text=_perturb(item_text[f"bench{i % 150}"], rng),
                            language=Language.ARABIC, category=Category.STEM)
            for i in range(100)
        ]
        corpus = []
        for i, doc in enumerate(clean):
            corpus.append(doc)
            if i % 50 == 25 and verbatim:
                corpus.append(verbatim.pop())
            if i % 50 == 45 and perturbed:
                corpus.append(perturbed.pop())
        corpus += verbatim + perturbed

        retained, reports = filter_corpus(corpus, index)
        removed = {r.doc_id for r in reports}

        verbatim_removed = sum(1 for i in range(100) if f"verbatim{i}" in removed)
        perturbed_removed = sum(1 for i in range(100) if f"perturbed{i}" in removed)
        false_positives = sum(1 for i in range(5_000) if f"clean{i}" in removed)
        assert verbatim_removed == 100
        assert perturbed_removed >= 95
        assert false_positives <= 50  # 1% of 5,000

        by_id = {d.id: d for d in corpus}
        fuzzy = [r for r in reports if r.verdict is Verdict.FUZZY_HIT]
        for report in fuzzy:
            true_j = brute_force_jaccard(
                by_id[report.doc_id].text, item_text[report.matched_task_id])
            assert abs(report.similarity - true_j) <= 0.1, report.doc_id
    assert clock.elapsed < 120.0


def test_minhash_fidelity_k128(rng):
    """|estimated - exact| <= 0.1 on >=95% of >=200 random pairs."""
    with Stopwatch() as clock:
        hasher = MinHasher(num_perm=128, seed=7)
        n_pairs, within = 250, 0
        for trial in range(n_pairs):
            base = random_sentence(rng, ARABIC_WORDS, rng.randint(30, 120))
            if trial % 3 == 0:
                other = random_sentence(rng, ARABIC_WORDS, rng.randint(30, 120))
            else:
                other = _perturb(base, rng, max_fraction=0.4)
            exact = brute_force_jaccard(base, other)
            est = estimated_jaccard(
                hasher.signature(set(normalize(base).shingles)),
                hasher.signature(set(normalize(other).shingles)),
            )
            if abs(est - exact) <= 0.1:
                within += 1
        assert within >= 0.95 * n_pairs, f"{within}/{n_pairs}"
    assert clock.elapsed < 60.0


def test_dedup_idempotence_and_oracle_equivalence(rng):
    """<=200 docs: clusters match an all-pairs brute-force partition built
    from true Jaccard; a second pass finds nothing new."""
    threshold = 0.8
    with Stopwatch() as clock:
        docs = []
        for g in range(40):
            base = random_sentence(rng, ARABIC_WORDS, rng.randint(60, 100))
            docs.append(Document.create(id=f"g{g}a", text=base,
                                        language=Language.ARABIC, category=Category.SOCIAL))
            if g % 2 == 0:  # plant a clear near-duplicate
                words = base.split()
                words[3] = "بديل"
                docs.append(Document.create(id=f"g{g}b", text=" ".join(words),
                                            language=Language.ARABIC, category=Category.SOCIAL))
        docs += [make_document(rng, f"solo{i}", n_tokens=70) for i in range(100)]
        assert len(docs) <= 200

        # oracle: make sure no pair is ambiguous (within MinHash noise of 0.8)
        true_j = {}
        for (i, a), (j, b) in itertools.combinations(enumerate(docs), 2):
            true_j[(i, j)] = brute_force_jaccard(a.text, b.text)
            assert abs(true_j[(i, j)] - threshold) > 0.1, (a.id, b.id)

        # oracle partition: union-find over true-Jaccard edges
        parent = list(range(len(docs)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (i, j), value in true_j.items():
            if value >= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        oracle_groups = {}
        for i in range(len(docs)):
            oracle_groups.setdefault(find(i), []).append(docs[i].id)
        oracle_clusters = {frozenset(g) for g in oracle_groups.values() if len(g) > 1}

        kept, clusters = dedup(docs, threshold=threshold, seed=13)
        assert {frozenset(c.member_ids) for c in clusters} == oracle_clusters

        kept2, clusters2 = dedup(kept, threshold=threshold, seed=13)
        assert kept2 == kept and clusters2 == []
    assert clock.elapsed < 60.0


def test_cot_round_trip_and_mutation_reporting():
    """1,000 random valid traces round-trip unchanged; 200 mutated traces
    report exactly the injected violation kinds."""
    with Stopwatch() as clock:
        rng = random.Random(606)
        for trial in range(1_000):
            n_options = rng.choice([2, 3, 4, 5, 6])
            trace = random_valid_trace(rng, n_options)
            back = parse_trace(serialize_trace(trace), n_options)
            assert isinstance(back, CoTTrace), f"trial {trial}"
            assert essence(back) == essence(trace), f"trial {trial}"

        for trial in range(200):
            trace = random_valid_trace(rng, 4)
            name, kwargs, expected = MUTATIONS[rng.randrange(len(MUTATIONS))]
            report = validate_trace(build_raw(trace, **kwargs), 4)
            assert not report.valid
            assert report.kinds() == expected, f"trial {trial} ({name})"
    assert clock.elapsed < 30.0


def test_extraction_fixtures_and_accounting(rng):
    """Every extraction fixture maps to its expected index or Invalid, and
    correct+incorrect+invalid = n on a stub-client run."""
    with Stopwatch() as clock:
        assert len(EXTRACTION_FIXTURES) >= 40
        for output, n_options, expected in EXTRACTION_FIXTURES:
            assert extract_choice(output, n_options) == expected, repr(output)

        items = [make_item(rng, f"acc{i}") for i in range(30)]
        answers = {}
        for i, item in enumerate(items):
            if i % 4 == 0:
                answers[render_prompt(item)] = "لا جواب واضح هنا"
            elif i % 4 == 1:
                wrong = (item.gold_index + 1) % len(item.options)
                answers[render_prompt(item)] = f"Answer: {option_letter(wrong)}"
            else:
                answers[render_prompt(item)] = (
                    f"<think>تفكير عميق</think> الإجابة: {option_letter(item.gold_index)}")
        score, results = run_task(items, ScoringMode.PARSE_AFTER_REASONING,
                                  StubCompletionClient(answers))
        assert score.correct + score.incorrect + score.invalid == score.n_items == 30
        assert score.invalid == 8 and score.incorrect == 7 and score.correct == 15
        assert len(results) == 30
    assert clock.elapsed < 10.0


def test_loglik_fixtures_scaling_and_ties():
    """Normalized argmax matches hand-computed decisions; argmax is
    invariant under positive scaling; ties break to the lowest index."""
    with Stopwatch() as clock:
        item = BenchmarkItem(suite=Suite.ARABIC_MMLU, task_id="ll",
                             question="السؤال التجريبي للترجيح",
                             options=["aaaa", "bbbbbbbbb"], gold_index=1)
        # hand-computed: -10/5 = -2.0 ; -12/10 = -1.2 ; argmax = option B
        client = StubLogprobClient({" aaaa": (-10.0, 5, 2), " bbbbbbbbb": (-12.0, 10, 3)})
        result = score_loglik(item, client, Normalizer.BYTE_LENGTH)
        assert result.per_option_scores == [-2.0, -1.2]
        assert result.predicted == 1

        for scale in (0.25, 2.0, 10.0):
            scaled = StubLogprobClient({
                " aaaa": (-10.0 * scale, 5, 2), " bbbbbbbbb": (-12.0 * scale, 10, 3)})
            assert score_loglik(item, scaled, Normalizer.BYTE_LENGTH).predicted == 1

        tie_item = BenchmarkItem(suite=Suite.ARABIC_MMLU, task_id="tie",
                                 question="سؤال التعادل بين الخيارات",
                                 options=["aaaa", "bbbb", "cccc"], gold_index=2)
        tie_client = StubLogprobClient({c: (-8.0, 5, 2) for c in (" aaaa", " bbbb", " cccc")})
        for _ in range(5):
            assert score_loglik(tie_item, tie_client).predicted == 0
    assert clock.elapsed < 10.0


def _seeded_pipeline(inputs: Path, workdir: Path, seed: int) -> dict[str, bytes]:
    corpus = inputs / "corpus.jsonl"
    bench = inputs / "bench.jsonl"
    spec = inputs / "spec.json"

    steps = [
        ["ingest", "--input", str(corpus), "--out", str(workdir / "ingest")],
        ["decontaminate", "--corpus", str(workdir / "ingest" / "documents.jsonl"),
         "--benchmarks", str(bench), "--seed", str(seed), "--out", str(workdir / "decon")],
        ["dedup", "--corpus", str(workdir / "decon" / "retained.jsonl"),
         "--seed", str(seed), "--out", str(workdir / "dedup")],
        ["mix", "--pool", str(workdir / "dedup" / "kept.jsonl"), "--spec", str(spec),
         "--seed", str(seed), "--out", str(workdir / "mix")],
        ["cot", "prompts", "--items", str(bench), "--out", str(workdir / "prompts")],
        ["cot", "batch", "--prompts", str(workdir / "prompts" / "prompts.jsonl"),
         "--endpoint-kind", "stub_valid_trace", "--out", str(workdir / "batch")],
        ["cot", "validate", "--responses", str(workdir / "batch" / "responses.jsonl"),
         "--items", str(bench), "--out", str(workdir / "validate")],
        ["eval", "run", "--items", str(bench), "--mode", "parse",
         "--client-kind", "stub_gold", "--out", str(workdir / "eval")],
    ]
    for argv in steps:
        assert main(argv) == 0, argv

    produced = {}
    for path in sorted(workdir.rglob("*")):
        if path.is_file():
            produced[str(path.relative_to(workdir))] = path.read_bytes()
    return produced


def test_end_to_end_determinism(tmp_path, rng, capsys):
    """Two identical-seed pipeline runs produce byte-identical manifests
    and result files."""
    with Stopwatch() as clock:
        inputs = tmp_path / "inputs"
        inputs.mkdir()
        items = [make_item(rng, f"e2e{i}", question_tokens=25) for i in range(12)]
        docs = []
        categories = list(Category)
        for cat in categories:
            for lang in (Language.ARABIC, Language.ENGLISH):
                for i in range(20):
                    docs.append(make_document(
                        rng, f"{cat.value}-{lang.value}-{i}", language=lang,
                        category=cat, n_tokens=rng.randint(30, 60)))
        # plant contamination and duplicates for the pipeline to remove
        docs[10] = Document.create(id="dirty-0", text=items[0].benchmark_text(),
                                   language=Language.ARABIC, category=Category.STEM)
        docs[30] = Document.create(id="dup-of-40", text=docs[40].text,
                                   language=docs[40].language, category=docs[40].category)
        write_jsonl(inputs / "corpus.jsonl", docs)
        write_jsonl(inputs / "bench.jsonl", items)
        budgets = {c.value: 500 for c in categories}
        (inputs / "spec.json").write_text(json.dumps({
            "total_budget": 3000,
            "category_budgets": budgets,
            "language_ratio": {"Arabic": 0.8, "English": 0.2},
        }), encoding="utf-8")

        first = _seeded_pipeline(inputs, tmp_path / "run1", seed=11)
        second = _seeded_pipeline(inputs, tmp_path / "run2", seed=11)
        capsys.readouterr()

        assert first.keys() == second.keys()
        for name in first:
            assert first[name] == second[name], f"{name} differs between runs"
        assert any(name.endswith(".manifest.json") for name in first)
        assert "eval/results.jsonl" in first
    assert clock.elapsed < 300.0
