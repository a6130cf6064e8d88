"""Corpus curation walkthrough: keyword filtering and n-gram iteration.

Builds a small synthetic tweet mix, removes Malay-context posts with the
built-in exclusion phrases, then inspects top n-grams the way one would when
iterating on collection keywords.
"""

from misinfo.corpus import KeywordQuery, MALAY_EXCLUSION_PHRASES, filter_keywords, top_ngrams
from misinfo.synthetic import generate_corpus

corpus = generate_corpus(count=200, seed=7)
print(f"raw corpus: {len(corpus)} tweets")
print(f"example: {corpus[0].text!r}")

# Drop tweets that look Malaysian rather than Indonesian.
exclusion = KeywordQuery(MALAY_EXCLUSION_PHRASES, mode="exclude")
indonesian = filter_keywords(corpus, exclusion)
print(f"\nafter Malay-context exclusion {MALAY_EXCLUSION_PHRASES}: {len(indonesian)} tweets")
dropped = [t for t in corpus if t not in indonesian]
for tweet in dropped[:3]:
    print(f"  dropped: {tweet.text!r}")

# Inspect dominant unigrams/bigrams to refine the next keyword query.
print("\ntop 10 unigrams:")
for gram, count in top_ngrams(indonesian, n=1, k=10):
    print(f"  {count:4d}  {gram}")

print("\ntop 10 bigrams:")
for gram, count in top_ngrams(indonesian, n=2, k=10):
    print(f"  {count:4d}  {gram}")

# Keyword queries compose: keep only vaccine-related discussion.
vaccine = filter_keywords(indonesian, KeywordQuery(("vaksin", "vaksinasi"), mode="include"))
print(f"\nvaccine-related subset: {len(vaccine)} tweets")
