"""Shared fixtures: tiny corpora and the synthetic released-scale dataset."""

from datetime import date

import pytest

from misinfo import synthetic
from misinfo.corpus import LabeledTweet, Tweet, save_labeled, stratified_split


def make_tweet(tweet_id: str, text: str, **kwargs) -> Tweet:
    kwargs.setdefault("posted_at", date(2020, 8, 1))
    return Tweet(id=tweet_id, text=text, **kwargs)


@pytest.fixture
def small_corpus():
    return [
        make_tweet("t1", "Vaksin sudah datang di Jakarta"),
        make_tweet("t2", "kes baharu covid di malaysia"),
        make_tweet("t3", "Pasien sembuh dari rumah sakit", urls=("https://rs.id/a",)),
        make_tweet("t4", "Protokol kesehatan itu penting #masker"),
    ]


@pytest.fixture(scope="session")
def released_scale_dataset():
    """Synthetic dataset with the released 3,127/1,632/404 class counts."""
    return synthetic.generate_final_dataset(seed=7)


@pytest.fixture(scope="session")
def released_scale_splits(released_scale_dataset):
    return stratified_split(released_scale_dataset, (0.6, 0.2, 0.2), seed=42)


@pytest.fixture(scope="session")
def split_dir(tmp_path_factory, released_scale_splits):
    """train/val/test CSVs of the synthetic released-scale dataset."""
    out = tmp_path_factory.mktemp("splits")
    for name, split in zip(("train", "val", "test"), released_scale_splits):
        save_labeled(split, out / f"{name}.csv")
    return out


def tiny_labeled(counts: dict[str, int]) -> list[LabeledTweet]:
    """Quick labeled set; texts carry a class-specific token."""
    token = {"irrelevant": "masker", "true": "rsud", "misinformation": "konspirasi"}
    out = []
    i = 0
    for label, count in counts.items():
        for _ in range(count):
            out.append(
                LabeledTweet(make_tweet(f"x{i}", f"covid {token[label]} nomor {i}"), label)
            )
            i += 1
    return out
