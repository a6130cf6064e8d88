"""Deterministic synthetic stand-ins for the released datasets.

The real corpus and gold labels live in external repositories and cannot be
redistributed here, so tests and demos generate data with the same label
counts and a class-conditional vocabulary that mimics the topical split of
the source data (health-protocol chatter, hospital/case reporting, vaccine
rumor-mongering). Everything is deterministic per seed.
"""

from __future__ import annotations

from datetime import date, timedelta

import numpy as np

from misinfo.annotation import GoldLabel
from misinfo.corpus import LabeledTweet, Tweet

# Published label counts of the annotation round (4,500 tweets).
GOLD_LABEL_COUNTS = {
    "irrelevant": 2059,
    "true": 1632,
    "misinformation": 404,
    "not-sure": 237,
    "no-consensus": 146,
    "need-expert": 22,
}

# Final dataset counts after augmenting the irrelevant pool.
FINAL_DATASET_COUNTS = {"irrelevant": 3127, "true": 1632, "misinformation": 404}

SHARED_TOKENS = (
    "di dan yang untuk ini itu ada tidak akan dari karena dengan covid corona "
    "virus pandemi kasus indonesia hari orang pemerintah jakarta update info "
    "warga daerah masyarakat saat baru"
).split()

CLASS_TOKENS = {
    "irrelevant": (
        "protokol kesehatan masker vitamin cuci tangan jaga jarak olahraga "
        "sehat imun pakai selalu ingat tetap rumah aman keluarga semangat "
        "lupa patuhi hindari kerumunan istirahat minum sayur"
    ).split(),
    "true": (
        "rumah sakit rsud pasien sembuh tenaga kesehatan dokter positif "
        "kemenkes data jumlah meninggal isolasi zona ppkm vaksinasi dosis "
        "distribusi resmi laporan provinsi tambah angka turun satgas"
    ).split(),
    "misinformation": (
        "vaksin chip konspirasi haram 5g bawang putih obat rahasia bohong "
        "hoaks mikrochip elit global jahat bahaya sebar awas percaya racun "
        "palsu dibuat lab senjata biologis dajjal"
    ).split(),
}

MALAY_TEXTS = (
    "kes baharu covid dilaporkan hari ini di malaysia",
    "kkmputrajaya umum kes baharu minggu ini",
    "jumlah kes baharu di malaysia menurun",
)

COLLECTION_START = date(2020, 7, 21)
COLLECTION_DAYS = 201  # through 2021-02-07


def _synthetic_text(label: str, rng: np.random.Generator) -> str:
    n_tokens = int(rng.integers(8, 19))
    pool = CLASS_TOKENS[label]
    other_pools = [p for name, p in CLASS_TOKENS.items() if name != label]
    words = []
    for _ in range(n_tokens):
        draw = rng.random()
        if draw < 0.40:
            source = pool
        elif draw < 0.55:
            source = other_pools[int(rng.integers(0, len(other_pools)))]
        else:
            source = SHARED_TOKENS
        words.append(source[int(rng.integers(0, len(source)))])
    if rng.random() < 0.15:
        words.append("@kawalcovid")
    if rng.random() < 0.10:
        words.append("#dirumahaja")
    if rng.random() < 0.25:
        words.append("https://t.co/" + "".join(rng.choice(list("abcdefgh"), size=6)))
    return " ".join(words)


def _make_tweet(tweet_id: str, label: str, rng: np.random.Generator) -> Tweet:
    text = _synthetic_text(label, rng)
    urls = tuple(w for w in text.split() if w.startswith("https://"))
    posted = COLLECTION_START + timedelta(days=int(rng.integers(0, COLLECTION_DAYS)))
    return Tweet(id=tweet_id, text=text, urls=urls, posted_at=posted, lang_tag="in")


def generate_gold_labels(seed: int = 7) -> list[GoldLabel]:
    """The 4,500 adjudicated labels with the published per-label counts."""
    labels = [
        label for label, count in GOLD_LABEL_COUNTS.items() for _ in range(count)
    ]
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(labels))
    return [GoldLabel(f"g-{i:05d}", labels[j]) for i, j in enumerate(order)]


def generate_final_dataset(seed: int = 7) -> list[LabeledTweet]:
    """The 5,163-tweet experiment dataset with the published class counts."""
    rng = np.random.default_rng(seed)
    labels = [
        label for label, count in FINAL_DATASET_COUNTS.items() for _ in range(count)
    ]
    order = rng.permutation(len(labels))
    return [
        LabeledTweet(_make_tweet(f"syn-{i:05d}", labels[j], rng), labels[j])
        for i, j in enumerate(order)
    ]


def generate_corpus(count: int = 200, seed: int = 7, malay_every: int = 20) -> list[Tweet]:
    """Unlabeled tweet mix for corpus-filtering demos.

    Every ``malay_every``-th tweet is a Malay-context post that the exclusion
    phrases should catch.
    """
    rng = np.random.default_rng(seed)
    labels = list(FINAL_DATASET_COUNTS)
    tweets = []
    for i in range(count):
        if malay_every and i % malay_every == malay_every - 1:
            text = MALAY_TEXTS[i % len(MALAY_TEXTS)]
            tweets.append(Tweet(id=f"raw-{i:05d}", text=text, lang_tag="in"))
        else:
            label = labels[int(rng.integers(0, len(labels)))]
            tweets.append(_make_tweet(f"raw-{i:05d}", label, rng))
    return tweets
