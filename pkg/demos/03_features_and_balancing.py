"""Feature extraction and class balancing walkthrough.

Shows the shared preprocessing, the three pooled vectorizers (binary BoW,
TF-IDF, hash-encoder pooling), and what the SMOTE + undersampling chain does
to a skewed class distribution.
"""

from collections import Counter

import numpy as np

from misinfo.features import (
    FakeHashEncoder,
    balance,
    bow_binary,
    contextual_encode,
    fit_vocabulary,
    preprocess,
    tfidf,
)

# --- preprocessing
samples = [
    "Cek fakta: https://cekfakta.id @menkes #ProtokolKesehatan",
    "VAKSIN mengandung CHIP?! hoaks!!",
    "rsud menerima 7 pasien baru",
]
print("preprocessing:")
docs = []
for i, text in enumerate(samples):
    doc = preprocess(text, doc_id=f"d{i}")
    docs.append(doc)
    print(f"  {text!r}\n    -> {list(doc.tokens)}")

# --- vocabulary-based features
vocab = fit_vocabulary(docs, min_df=1)
print(f"\nvocabulary ({len(vocab)} tokens): {list(vocab.index)[:8]} ...")

bow = bow_binary(docs, vocab)
print(f"binary BoW shape: {bow.values.shape}, row sums: {bow.values.sum(axis=1)}")

weighted = tfidf(docs, vocab)
norms = np.linalg.norm(weighted.values, axis=1)
print(f"TF-IDF row L2 norms: {norms.round(6)}")

# --- deterministic hash encoder (stand-in for a pre-trained model)
encoder = FakeHashEncoder(dimension=32, max_tokens=16)
pooled, sequences = contextual_encode(docs, encoder)
print(f"\nencoder '{encoder.handle.name}': pooled {pooled.values.shape}, "
      f"sequences {sequences.arrays.shape}, lengths {sequences.lengths}")

# --- the balancing chain on a 100-vs-20 class skew
rng = np.random.default_rng(0)
X = np.vstack([rng.normal(0, 1, (100, 8)), rng.normal(4, 1, (20, 8))])
y = np.array(["majority"] * 100 + ["minority"] * 20)
print(f"\nbefore balancing: {dict(Counter(y.tolist()))}")

Xb, yb = balance(X, y, target_minority_ratio=1.0, k_neighbors=5, seed=1, oversample_to=0.6)
print(f"after oversample-to-60 + undersample-to-equality: {dict(Counter(yb.tolist()))}")

synthetic_rows = Xb[yb == "minority"][20:]
print(f"synthetic minority points created: {len(synthetic_rows)}")
print("each lies on a segment between a minority sample and one of its "
      "5 nearest minority neighbors")
