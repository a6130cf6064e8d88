import json
from collections import Counter

import numpy as np
import pytest

from misinfo.corpus import (
    KeywordQuery,
    MALAY_EXCLUSION_PHRASES,
    Tweet,
    filter_keywords,
    load_corpus,
    load_labeled,
    sample,
    save_corpus,
    save_labeled,
    stratified_split,
    top_ngrams,
)
from misinfo.errors import DataFormatError, ValidationError
from tests.conftest import make_tweet, tiny_labeled


class TestLoadCorpus:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert load_corpus(path) == []

    def test_order_preserved(self, tmp_path):
        path = tmp_path / "c.jsonl"
        lines = [
            {"id": "a", "text": "satu", "urls": [], "date": "2020-08-01"},
            {"id": "b", "text": "dua", "urls": ["https://x.io"], "date": "2020-08-02"},
            {"id": "c", "text": "tiga", "urls": [], "date": "2020-08-03", "lang": "in"},
        ]
        path.write_text("\n".join(json.dumps(l) for l in lines))
        tweets = load_corpus(path)
        assert [t.id for t in tweets] == ["a", "b", "c"]
        assert tweets[1].urls == ("https://x.io",)
        assert tweets[2].lang_tag == "in"

    def test_duplicate_id_named(self, tmp_path):
        path = tmp_path / "c.jsonl"
        row = {"id": "t1", "text": "halo", "urls": [], "date": "2020-08-01"}
        path.write_text(json.dumps(row) + "\n" + json.dumps(row))
        with pytest.raises(ValidationError, match="t1"):
            load_corpus(path)

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "ok", "urls": [], "date": "2020-08-01"}\nnot json')
        with pytest.raises(DataFormatError, match=":2"):
            load_corpus(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_corpus(tmp_path / "nope.jsonl")

    def test_round_trip(self, tmp_path, small_corpus):
        path = tmp_path / "c.jsonl"
        save_corpus(small_corpus, path)
        assert load_corpus(path) == small_corpus


class TestTweetInvariants:
    def test_empty_text_rejected(self):
        with pytest.raises(ValidationError):
            Tweet(id="t", text="   ")

    def test_empty_id_rejected(self):
        with pytest.raises(ValidationError):
            Tweet(id="", text="halo")


class TestFilterKeywords:
    def test_case_insensitive_include(self):
        tweets = [make_tweet("t1", "Vaksin sudah datang")]
        kept = filter_keywords(tweets, KeywordQuery(("vaksin",), "include"))
        assert [t.id for t in kept] == ["t1"]

    def test_malay_exclusion_drops(self):
        tweets = [
            make_tweet("t1", "kes baharu covid di malaysia"),
            make_tweet("t2", "kasus harian turun di jakarta"),
        ]
        kept = filter_keywords(tweets, KeywordQuery(("kes baharu", "malaysia"), "exclude"))
        assert [t.id for t in kept] == ["t2"]

    def test_no_match_include_is_empty(self, small_corpus):
        assert filter_keywords(small_corpus, KeywordQuery(("rsud",), "include")) == []

    def test_token_boundary(self):
        tweets = [make_tweet("t1", "pesta maskerade semalam")]
        assert filter_keywords(tweets, KeywordQuery(("masker",), "include")) == []

    def test_idempotent(self, small_corpus):
        query = KeywordQuery(("covid", "vaksin"), "include")
        once = filter_keywords(small_corpus, query)
        assert filter_keywords(once, query) == once

    def test_include_exclude_partition(self, small_corpus):
        rng = np.random.default_rng(3)
        vocab = ["covid", "vaksin", "masker", "rsud", "malaysia", "jakarta"]
        for trial in range(20):
            phrases = tuple(rng.choice(vocab, size=int(rng.integers(1, 4)), replace=False))
            include = filter_keywords(small_corpus, KeywordQuery(phrases, "include"))
            exclude = filter_keywords(small_corpus, KeywordQuery(phrases, "exclude"))
            merged = sorted(t.id for t in include + exclude)
            assert merged == sorted(t.id for t in small_corpus)

    def test_builtin_exclusion_list(self):
        assert MALAY_EXCLUSION_PHRASES == ("malaysia", "kkmputrajaya", "kes baharu")

    def test_query_normalized(self):
        query = KeywordQuery(("Kes  Baharu",), "exclude")
        assert query.phrases == ("kes baharu",)


class TestTopNgrams:
    def test_unigram_counts(self):
        tweets = [make_tweet("t1", "a b a")]
        assert top_ngrams(tweets, 1, 10) == [("a", 2), ("b", 1)]

    def test_bigram_counts(self):
        tweets = [make_tweet("t1", "a b a")]
        assert top_ngrams(tweets, 2, 10) == [("a b", 1), ("b a", 1)]

    def test_window_does_not_fit(self):
        tweets = [make_tweet("t1", "a b")]
        assert top_ngrams(tweets, 3, 10) == []

    def test_ties_lexicographic_and_k_limit(self):
        tweets = [make_tweet("t1", "z q z q m")]
        assert top_ngrams(tweets, 1, 2) == [("q", 2), ("z", 2)]

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        vocab = ["a", "b", "c", "d"]
        tweets = [
            make_tweet(
                f"t{i}",
                " ".join(rng.choice(vocab, size=int(rng.integers(1, 9)))),
            )
            for i in range(30)
        ]
        for n in (1, 2, 3):
            expected = Counter()
            for t in tweets:
                toks = t.text.split()
                for i in range(len(toks) - n + 1):
                    expected[" ".join(toks[i : i + n])] += 1
            got = dict(top_ngrams(tweets, n, 10_000))
            assert got == dict(expected)


class TestSample:
    def test_full_sample_is_permutation(self, small_corpus):
        got = sample(small_corpus, len(small_corpus), seed=5)
        assert sorted(t.id for t in got) == sorted(t.id for t in small_corpus)

    def test_zero(self, small_corpus):
        assert sample(small_corpus, 0, seed=5) == []

    def test_deterministic(self, small_corpus):
        assert sample(small_corpus, 2, seed=9) == sample(small_corpus, 2, seed=9)

    def test_count_too_large(self, small_corpus):
        with pytest.raises(ValidationError):
            sample(small_corpus, len(small_corpus) + 1, seed=0)


class TestStratifiedSplit:
    RATIOS = (0.6, 0.2, 0.2)

    def test_misinformation_class_counts(self):
        data = tiny_labeled({"misinformation": 404})
        sizes = [len(s) for s in stratified_split(data, self.RATIOS, seed=1)]
        assert sizes == [242, 81, 81]

    def test_true_class_counts(self):
        data = tiny_labeled({"true": 1632})
        sizes = [len(s) for s in stratified_split(data, self.RATIOS, seed=1)]
        assert sizes == [979, 327, 326]

    def test_exact_division(self):
        data = tiny_labeled({"irrelevant": 10})
        sizes = [len(s) for s in stratified_split(data, self.RATIOS, seed=1)]
        assert sizes == [6, 2, 2]

    def test_partition_and_drift(self):
        data = tiny_labeled({"irrelevant": 53, "true": 31, "misinformation": 17})
        splits = stratified_split(data, self.RATIOS, seed=3)
        ids = [item.tweet.id for split in splits for item in split]
        assert sorted(ids) == sorted(item.tweet.id for item in data)
        assert len(set(ids)) == len(ids)
        totals = Counter(item.label for item in data)
        for ratio, split in zip(self.RATIOS, splits):
            counts = Counter(item.label for item in split)
            for label in totals:
                assert abs(counts[label] - ratio * totals[label]) <= 1

    def test_deterministic(self):
        data = tiny_labeled({"irrelevant": 20, "true": 12, "misinformation": 8})
        first = stratified_split(data, self.RATIOS, seed=4)
        second = stratified_split(data, self.RATIOS, seed=4)
        assert first == second

    def test_class_smaller_than_splits(self):
        data = tiny_labeled({"irrelevant": 10, "misinformation": 2})
        with pytest.raises(ValidationError, match="misinformation"):
            stratified_split(data, self.RATIOS, seed=0)

    def test_bad_ratios(self):
        data = tiny_labeled({"irrelevant": 10})
        with pytest.raises(ValidationError):
            stratified_split(data, (0.5, 0.2, 0.2), seed=0)
        with pytest.raises(ValidationError):
            stratified_split(data, (1.2, -0.1, -0.1), seed=0)


class TestLabeledCsv:
    def test_round_trip(self, tmp_path):
        data = tiny_labeled({"irrelevant": 3, "true": 2, "misinformation": 3})
        path = tmp_path / "d.csv"
        save_labeled(data, path)
        loaded = load_labeled(path)
        assert [(x.tweet.id, x.tweet.text, x.label) for x in loaded] == [
            (x.tweet.id, x.tweet.text, x.label) for x in data
        ]

    def test_header_required(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(DataFormatError, match="tweet_id"):
            load_labeled(path)

    def test_bad_label(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("tweet_id,text,label\nt1,halo,bogus\n")
        with pytest.raises(DataFormatError, match="bogus"):
            load_labeled(path)
