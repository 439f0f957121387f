import random
import time

import pytest

from core.types import DatasetRef, TransformedExample, provenance_for
from quality.dedup import dedup_filter
from quality.difficulty import estimate_difficulty, parse_difficulty, summarize
from quality.diversity import diversity_report, unique_bigrams
from quality.reports import analyze_examples, export_inputs, render_quality_table, write_quality
from quality.rouge import f_measure, lcs_length, max_similarities, rouge_l, tokenize, uniqueness_report
from quality.thresholds import threshold_for
from core.io import read_json
from tests.conftest import mock_gateway, run

VOCABULARY = ["def", "return", "x", "y", "if", "for", "in", "range", "print", "(", ")", "+", "=", "0", "1"]


def reference_lcs(a: list[str], b: list[str]) -> int:
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i, token_a in enumerate(a, start=1):
        for j, token_b in enumerate(b, start=1):
            table[i][j] = table[i - 1][j - 1] + 1 if token_a == token_b else max(table[i - 1][j], table[i][j - 1])
    return table[-1][-1]


def reference_maxima(texts: list[str]) -> list[float]:
    tokens = [tokenize(text) for text in texts]
    maxima = []
    for i, a in enumerate(tokens):
        scores = [f_measure(reference_lcs(a, b), len(a), len(b)) for j, b in enumerate(tokens) if j != i]
        maxima.append(max(scores, default=0.0))
    return maxima


def random_texts(count: int, seed: int = 11) -> list[str]:
    rng = random.Random(seed)
    base = [" ".join(rng.choices(VOCABULARY, k=rng.randint(3, 12))) for _ in range(count // 4)]
    texts = []
    for _ in range(count):
        roll = rng.random()
        if roll < 0.05:
            texts.append("")
        elif roll < 0.5 and base:
            tokens = rng.choice(base).split()
            position = rng.randrange(len(tokens))
            tokens[position] = rng.choice(VOCABULARY)
            texts.append(" ".join(tokens))
        else:
            texts.append(" ".join(rng.choices(VOCABULARY, k=rng.randint(1, 25))))
    return texts


def example(text: str, index: int = 0) -> TransformedExample:
    return TransformedExample(input=text, output="out",
                              provenance=provenance_for(DatasetRef(name="toy", config="default"), index))


# ROUGE-L

def test_rouge_l_known_value():
    assert rouge_l("the cat sat", "the cat ran") == pytest.approx(2 / 3)


def test_rouge_l_symmetric_and_bounded():
    texts = random_texts(200, seed=3)
    for a in texts[:100]:
        for b in texts[100:]:
            score = rouge_l(a, b)
            assert score == rouge_l(b, a)
            assert 0.0 <= score <= 1.0


def test_rouge_l_self_similarity():
    assert rouge_l("for x in range ( 1 )", "for x in range ( 1 )") == 1.0
    for text in random_texts(10_000, seed=41):
        assert rouge_l(text, text) == (1.0 if text else 0.0)


@pytest.mark.parametrize("a,b", [("", "a b"), ("a b", ""), ("", "")])
def test_rouge_l_empty_is_zero(a, b):
    assert rouge_l(a, b) == 0.0


def test_rouge_l_is_case_and_punctuation_sensitive():
    assert tokenize("Return x.") == ["Return", "x."]
    assert rouge_l("return x", "Return x.") == 0.0


def test_lcs_matches_reference():
    rng = random.Random(5)
    for _ in range(200):
        a = rng.choices(VOCABULARY[:5], k=rng.randint(0, 80))
        b = rng.choices(VOCABULARY[:5], k=rng.randint(0, 80))
        assert lcs_length(a, b) == reference_lcs(a, b)


def test_max_similarities_match_brute_force():
    texts = random_texts(200)
    assert max_similarities(texts) == reference_maxima(texts)


def test_max_similarities_across_blocks_and_workers():
    texts = random_texts(150, seed=19)
    expected = max_similarities(texts)
    assert max_similarities(texts, block=7) == expected
    assert max_similarities(texts, workers=2, block=32) == expected


def test_max_similarities_are_permutation_invariant():
    texts = random_texts(60, seed=23)
    order = list(range(len(texts)))
    random.Random(1).shuffle(order)
    shuffled = max_similarities([texts[i] for i in order])
    original = max_similarities(texts)
    assert shuffled == [original[i] for i in order]


# uniqueness

def test_identical_strings_are_not_unique():
    report = uniqueness_report(["print ( x )", "print ( x )", "for y in range"], 0.7)
    assert [entry.is_unique for entry in report.per_example] == [False, False, True]
    assert report.per_example[0].max_similarity == 1.0
    assert report.unique_count == 1


@pytest.mark.parametrize("threshold", [0.1, 0.5, 0.7, 0.99, 1.0])
def test_copies_are_never_unique(threshold):
    copies = ["def add ( x , y ) : return x + y"] * 7
    report = uniqueness_report(copies, threshold)
    assert report.unique_fraction == 0.0
    kept = dedup_filter([example(text, index) for index, text in enumerate(copies)], threshold)
    assert uniqueness_report([e.input for e in kept], threshold).unique_fraction == 1.0


@pytest.mark.slow
def test_uniqueness_report_scales_to_full_runs():
    rng = random.Random(13)
    vocabulary = [f"w{i}" for i in range(500)]
    texts = [" ".join(rng.choices(vocabulary, k=40)) for _ in range(3000)]
    started = time.monotonic()
    report = uniqueness_report(texts, 0.7)
    assert time.monotonic() - started < 60
    assert report.total == 3000


def test_single_example_is_unique():
    report = uniqueness_report(["anything at all"], 0.7)
    assert report.unique_fraction == 1.0
    assert report.per_example[0].max_similarity == 0.0


def test_empty_dataset():
    report = uniqueness_report([], 0.7)
    assert report.total == 0 and report.unique_fraction == 1.0


def test_unique_count_is_monotone_in_threshold():
    texts = random_texts(120, seed=29)
    counts = [uniqueness_report(texts, threshold).unique_count for threshold in (0.3, 0.5, 0.7, 0.8, 0.9, 1.0)]
    assert counts == sorted(counts)


def test_threshold_is_exclusive():
    report = uniqueness_report(["the cat sat", "the cat ran"], 2 / 3)
    assert report.unique_count == 0


# diversity

def test_unique_bigrams():
    assert unique_bigrams(["a", "b", "a", "b"]) == 2
    assert unique_bigrams(["a"]) == 0


def test_diversity_report():
    report = diversity_report(["a b a b", "c d"])
    assert report.examples == 2
    assert report.unique_bigrams_per_example == 1.5
    assert report.tokens_per_example == 3.0


def test_diversity_on_ten_examples():
    texts = [
        "a b c",          # 2 bigrams, 3 tokens
        "a a a a",        # 1, 4
        "x",              # 0, 1
        "",               # 0, 0
        "a b a b a b",    # 2, 6
        "p q r s t",      # 4, 5
        "p q p q",        # 2, 4
        "one two",        # 1, 2
        "z z",            # 1, 2
        "m n o m n o",    # 3, 6
    ]
    report = diversity_report(texts)
    assert report.examples == 10
    assert report.unique_bigrams_per_example == 16 / 10
    assert report.tokens_per_example == 33 / 10


def test_diversity_of_nothing():
    report = diversity_report([])
    assert (report.examples, report.unique_bigrams_per_example, report.tokens_per_example) == (0, 0.0, 0.0)


# difficulty

@pytest.mark.parametrize("answer,score", [
    ("3", 3),
    ("It is a 4.", 4),
    ("Difficulty: 5/5", 5),
    ("  1\n", 1),
    ("7", None),
    ("0", None),
    ("-2", None),
    ("easy", None),
    ("", None),
])
def test_parse_difficulty(answer, score):
    assert parse_difficulty(answer) == score


def test_summarize():
    report = summarize([2, 3, 4, 2, None])
    assert report.scores == {1: 0, 2: 2, 3: 1, 4: 1, 5: 0}
    assert report.unparsed == 1
    assert report.judged == 5
    assert report.mean == pytest.approx(2.75)


def test_summarize_nothing_parsed():
    report = summarize([None, None])
    assert report.mean is None and report.unparsed == 2


def test_estimate_difficulty_with_mock_judge(config):
    gateway = mock_gateway({"entries": [{
        "pattern": "Your answer shoud be a single number",
        "responses": ["2", "3", "It is a 4.", "2", "easy"],
    }]})
    texts = [f"x = {i}" for i in range(5)]
    report = run(estimate_difficulty(texts, gateway, config))
    assert report.scores == {1: 0, 2: 2, 3: 1, 4: 1, 5: 0}
    assert report.unparsed == 1
    assert all(call.model == config.judge_model and call.temperature == 0.0 for call in gateway.provider.calls)


def test_judge_transport_failures_count_as_unparsed(config):
    report = run(estimate_difficulty(["a", "b"], mock_gateway({"entries": []}, max_retries=0), config))
    assert report.unparsed == 2 and report.mean is None


# dedup

def test_dedup_chain_keeps_first_and_third():
    first = example("a b c d e f g h i j", 0)
    second = example("a b c d e f g h x y", 1)
    third = example("a b c d e f x y z w", 2)
    kept = dedup_filter([first, second, third], 0.7)
    assert kept == [first, third]
    assert uniqueness_report([e.input for e in kept], 0.7).unique_fraction == 1.0


def test_dedup_leaves_a_fully_unique_set():
    examples = [example(text or "empty", index) for index, text in enumerate(random_texts(150, seed=31))]
    kept = dedup_filter(examples, 0.7)
    assert 0 < len(kept) < len(examples)
    assert uniqueness_report([e.input for e in kept], 0.7).unique_fraction == 1.0
    assert [e.provenance.source_index for e in kept] == sorted(e.provenance.source_index for e in kept)


@pytest.mark.parametrize("threshold", [0.0, -0.1, 1.5])
def test_dedup_rejects_bad_threshold(threshold):
    with pytest.raises(ValueError):
        dedup_filter([example("x")], threshold)


# thresholds

@pytest.mark.parametrize("tags,expected", [
    (["code"], 0.8),
    (["Code", "python"], 0.8),
    (["long_text"], 0.9),
    (["code", "long_text"], 0.9),
    (["math"], 0.7),
    ([], 0.7),
])
def test_threshold_for(tags, expected):
    assert threshold_for(tags) == expected


def test_threshold_override_wins():
    assert threshold_for(["code"], override=0.55) == 0.55


# reports

def test_analyze_and_write(tmp_path, config):
    examples = [example("print ( x )", 0), example("print ( x )", 1), example("for y in range", 2)]
    report = run(analyze_examples(examples, 0.7, config))
    assert report.difficulty is None
    assert report.uniqueness.unique_count == 1
    write_quality(tmp_path / "quality.json", report)
    saved = read_json(tmp_path / "quality.json")
    assert saved["uniqueness"]["total"] == 3
    assert "unique fraction" in render_quality_table(report)


def test_analyze_with_judge(config):
    gateway = mock_gateway({"default": "3"})
    report = run(analyze_examples([example("x = 1")], 0.7, config, gateway))
    assert report.difficulty.scores[3] == 1
    assert "difficulty mean" in render_quality_table(report)


def test_export_inputs_escapes_newlines(tmp_path):
    count = export_inputs(tmp_path / "inputs.txt", [example("line one\nline two"), example("back\\slash", 1)])
    assert count == 2
    assert (tmp_path / "inputs.txt").read_text(encoding="utf-8") == "line one\\nline two\nback\\\\slash\n"
