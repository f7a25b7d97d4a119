#!/usr/bin/env python3
"""Reference console autocomplete app over a weight<TAB>label TSV file.

Standalone on purpose: it is the kind of existing console program the
subprocess adapter wraps, so it shares no code with the server package.

Usage:
  console_autocomplete.py DATA.tsv QUERY    one answer, then exit
  console_autocomplete.py DATA.tsv          loop: read queries on stdin,
                                            print matches then a blank line
"""

import sys

K = 5


def fold(s):
    return "".join(ch.lower() for ch in s)


def load(path):
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip():
                continue
            weight, _, label = line.partition("\t")
            terms.append((int(weight), label.strip()))
    return terms


def matches(terms, query, k=K):
    hits = [t for t in terms if fold(t[1]).startswith(fold(query))]
    hits.sort(key=lambda t: (-t[0], fold(t[1]), t[1]))
    return hits[:k]


def main(argv):
    if len(argv) < 2 or len(argv) > 3:
        print("usage: console_autocomplete.py DATA.tsv [QUERY]", file=sys.stderr)
        return 2
    terms = load(argv[1])
    if len(argv) == 3:
        for weight, label in matches(terms, argv[2]):
            print(f"{weight} {label}")
        return 0
    for line in sys.stdin:
        for weight, label in matches(terms, line.rstrip("\n")):
            print(f"{weight} {label}")
        print(flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv))
