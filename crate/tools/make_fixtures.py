#!/usr/bin/env python3
"""Regenerate the bundled test vocabulary and tokenizer golden files.

Trains a small byte-pair-encoding vocabulary on the seed corpus below and
re-encodes the fixture strings with a reference encoder (greedy lowest-rank
merge over regex pre-tokenized chunks, whole-chunk fast path first). The
resulting counts are frozen into crates/qcopt/data/ and asserted by the
Rust test suite, so run this only when the vocabulary itself needs to
change.

Requires: pip install regex
"""

import base64
import collections
import json
import pathlib

import regex

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "crates" / "qcopt" / "data"

PATTERN = r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}+|\p{N}{1,3}| ?[^\s\p{L}\p{N}]++[\r\n]*|\s*[\r\n]|\s+(?!\S)|\s+"""

N_MERGES = 140
VOCAB_NAME = "test-bpe-396"

TRAIN_CORPUS = """
The routing engine estimates the cost of every model before a request is sent.
Each section of the document is measured in tokens, and the planner compares
the price of the cheap model against the strong model. When the budget is
tight, the optimizer prefers the model with the lowest cost that still meets
the quality floor. The cat sat on the mat and the dog sat on the rug.
We use a small dictionary to replace words, and we remove the dots between
the letters of an acronym such as U.S.A. or N.A.S.A. where applicable.
Stop words like the, a, an, of, on, in, at, and very are removed in cases
where there is a reduction in the tokens. Removing round parenthesis (like
this one) is found to save tokens. Compound words such as multicore and
preprocess can be split by adding a space after the prefix. The stemmer maps
running to run, computed to compute, and ponies to pony before checking the
word list. The simplified sentence should keep the meaning of the original
sentence while using fewer tokens. A summary of five sentences is requested
for each section, and the average number of tokens per sentence is observed
from the data. The total cost is the input cost per token times the number
of input tokens plus the output cost per token times the number of output
tokens plus a fixed cost per call. The latency of a call grows with the
token count, and calls to the same model have to be sequential. The flow
network sends one unit from the source through each section to a model and
then to the sink. The greedy rule picks the cheapest feasible model for each
section. The knapsack step selects the set of edits with the largest saving
whose estimated loss stays under the budget. We then search over the order
of application to find the order with the smallest final count. The report
lists the saving and the loss for every sentence in the passage. It was a
very long document, and we really just wanted a short summary of it. The
team will utilize the new tools to demonstrate that the approach works, and
they will purchase additional machines if the demand grows. Numbers such as
12345 and 2024 and 3.141 appear in the text. Quotes like "hello world" and
brackets [of this kind] appear as well. The quick brown fox jumps over the
lazy dog. She sells sea shells by the sea shore. It's a test of the encoder,
isn't it? Don't stop at the first answer; check the second one as well. The
supercomputer can overload the subsystem if we underestimate the workload.
"""

FIXTURE_STRINGS = [
    "",
    "a",
    "Z",
    "7",
    ".",
    " ",
    "the",
    "the cat sat on the mat",
    "The cat sat on the mat.",
    "cat sat mat",
    "The quick brown fox jumps over the lazy dog.",
    "She sells sea shells by the sea shore.",
    "It's a test, isn't it?",
    "Don't stop; don't even slow down.",
    "hello world",
    "Hello, World!",
    "HELLO WORLD",
    "  leading spaces",
    "trailing spaces  ",
    "tab\tseparated\tvalues",
    "line\nbreak",
    "two\n\nblank lines",
    "carriage\r\nreturn",
    "U.S.A.",
    "USA",
    "The U.S.A. team won the final.",
    "The USA team won the final.",
    "N.A.S.A. launched a probe (the second one) in 2024.",
    "Removing round parenthesis (like this one) is found to save tokens.",
    "Removing round parenthesis like this one is found to save tokens.",
    "multicore processors",
    "multi core processors",
    "preprocess the data before training",
    "the team will utilize the new tools",
    "the team will use the new tools",
    "running computed ponies",
    "run compute pony",
    "12345",
    "3.14159 is approximately pi",
    "version 2.0.1 released 2024-01-31",
    "a+b=c and x*y<z",
    "!!!",
    "???  ",
    "café naïve résumé",
    "Führer über Straße",
    "東京タワーは高い",
    "こんにちは世界",
    "emoji 🚀 rocket and 🎉 party",
    "mixed ASCII, 漢字, and emoji 🙂 in one line",
    "A very very very long sentence that keeps going and going and going until it finally stops after many many words.",
]

# Pairs used by heuristic and control-tag tests; counts are frozen alongside.
EXAMPLE_PAIRS = {
    "ra_acronym": ("The U.S.A. team won the final.", "The USA team won the final."),
    "rsw_stopwords": ("the cat sat on the mat", "cat sat mat"),
    "rb_parens": (
        "Removing round parenthesis (like this one) is found to save tokens.",
        "Removing round parenthesis like this one is found to save tokens.",
    ),
    "ratio_pair": (
        "A very very very long sentence that keeps going and going and going until it finally stops after many many words.",
        "A long sentence that stops.",
    ),
}


def pretokenize(text):
    return regex.findall(PATTERN, text)


def train(corpus, n_merges):
    ranks = {bytes([i]): i for i in range(256)}
    words = collections.Counter()
    for chunk in pretokenize(corpus):
        words[tuple(bytes([b]) for b in chunk.encode("utf-8"))] += 1
    next_rank = 256
    for _ in range(n_merges):
        pair_counts = collections.Counter()
        for parts, cnt in words.items():
            for a, b in zip(parts, parts[1:]):
                pair_counts[(a, b)] += cnt
        if not pair_counts:
            break
        best = sorted(pair_counts.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))[0][0]
        merged = best[0] + best[1]
        ranks[merged] = next_rank
        next_rank += 1
        new_words = collections.Counter()
        for parts, cnt in words.items():
            out = []
            i = 0
            while i < len(parts):
                if i + 1 < len(parts) and parts[i] == best[0] and parts[i + 1] == best[1]:
                    out.append(merged)
                    i += 2
                else:
                    out.append(parts[i])
                    i += 1
            new_words[tuple(out)] += cnt
        words = new_words
    return ranks


def byte_pair_merge(ranks, piece):
    parts = [bytes([b]) for b in piece]
    while True:
        min_rank = None
        min_idx = None
        for i in range(len(parts) - 1):
            rank = ranks.get(parts[i] + parts[i + 1])
            if rank is not None and (min_rank is None or rank < min_rank):
                min_rank = rank
                min_idx = i
        if min_rank is None:
            break
        parts = parts[:min_idx] + [parts[min_idx] + parts[min_idx + 1]] + parts[min_idx + 2 :]
    return [ranks[p] for p in parts]


def encode(ranks, text):
    ids = []
    for chunk in pretokenize(text):
        piece = chunk.encode("utf-8")
        if piece in ranks:
            ids.append(ranks[piece])
        else:
            ids.extend(byte_pair_merge(ranks, piece))
    return ids


def main():
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    ranks = train(TRAIN_CORPUS, N_MERGES)

    lines = []
    for token, rank in sorted(ranks.items(), key=lambda kv: kv[1]):
        lines.append(f"{base64.b64encode(token).decode()} {rank}")
    (DATA_DIR / "test_vocab.tiktoken").write_text("\n".join(lines) + "\n")

    config = {
        "name": VOCAB_NAME,
        "pattern": PATTERN,
        "ranks_file": "test_vocab.tiktoken",
        "special_tokens": {},
    }
    (DATA_DIR / "test_vocab.json").write_text(json.dumps(config, indent=2) + "\n")

    cases = [{"text": s, "tokens": len(encode(ranks, s))} for s in FIXTURE_STRINGS]
    golden = {"vocabulary": VOCAB_NAME, "cases": cases}
    (DATA_DIR / "golden_counts.json").write_text(json.dumps(golden, indent=2, ensure_ascii=False) + "\n")

    examples = {}
    for key, (before, after) in EXAMPLE_PAIRS.items():
        examples[key] = {
            "before": before,
            "after": after,
            "before_tokens": len(encode(ranks, before)),
            "after_tokens": len(encode(ranks, after)),
        }
    (DATA_DIR / "golden_examples.json").write_text(json.dumps(examples, indent=2) + "\n")

    total = len(ranks)
    print(f"vocabulary entries: {total}")
    for case in cases[:8]:
        print(f"  {case['tokens']:3d}  {case['text']!r}")
    for key, ex in examples.items():
        print(f"  {key}: {ex['before_tokens']} -> {ex['after_tokens']}")


if __name__ == "__main__":
    main()
