#!/usr/bin/env python3
"""Rebuild the vendored test corpora under crates/core/tests/data.

Sources are public-domain / CC0 texts published as npm packages:

  @stdlib/datasets-moby-dick   Moby Dick (Project Gutenberg text, boilerplate removed)
  @stdlib/datasets-sotu        US State of the Union addresses, 1790-2016
  @stdlib/datasets-spam-assassin  SpamAssassin public mail corpus (ham messages only)
  kjv                          King James Bible, 1769 text

Usage:
  mkdir /tmp/src && cd /tmp/src
  for p in @stdlib/datasets-moby-dick @stdlib/datasets-sotu \
           @stdlib/datasets-spam-assassin kjv; do npm pack "$p"; done
  for f in *.tgz; do mkdir -p "${f%.tgz}" && tar xzf "$f" -C "${f%.tgz}"; done
  python3 build_test_corpora.py /tmp/src <repo>/crates/core/tests/data
"""
import glob
import gzip
import json
import os
import random
import sys


def one(pattern):
    hits = sorted(glob.glob(pattern))
    if not hits:
        sys.exit(f"missing source: {pattern}")
    return hits[0]


def moby_dick(src):
    data = one(os.path.join(src, "stdlib-datasets-moby-dick-*", "package", "data"))
    parts = ["etymology.txt", "extracts.txt", "data.txt", "epilogue.txt"]
    return "\n\n".join(open(os.path.join(data, p), encoding="utf-8").read() for p in parts)


def documents(src, moby):
    docs = []
    sotu = one(os.path.join(src, "stdlib-datasets-sotu-*", "package", "data"))
    for f in sorted(glob.glob(os.path.join(sotu, "*.txt"))):
        docs.append(open(f, encoding="utf-8").read())

    kjv = one(os.path.join(src, "kjv-*", "package", "json", "verses-1769.json"))
    books = {}
    for ref, verse in json.load(open(kjv, encoding="utf-8")).items():
        book = ref.rsplit(" ", 1)[0]
        for ch in "#[]":
            verse = verse.replace(ch, "")
        books.setdefault(book, []).append(verse)
    docs.extend(" ".join(v) for v in books.values())

    mail = one(os.path.join(src, "stdlib-datasets-spam-assassin-*", "package", "data"))
    for group in ["easy-ham-1", "easy-ham-2", "hard-ham-1"]:
        for f in sorted(glob.glob(os.path.join(mail, group, "*.txt"))):
            text = open(f, encoding="utf-8", errors="replace").read()
            if "\n\n" in text:
                docs.append(text.split("\n\n", 1)[1])

    docs.append(moby)
    return docs


def main():
    src, out = sys.argv[1], sys.argv[2]
    moby = moby_dick(src)
    with gzip.GzipFile(os.path.join(out, "moby_dick.txt.gz"), "wb", mtime=0) as fh:
        fh.write(moby.encode("utf-8"))

    docs = documents(src, moby)
    random.Random(0).shuffle(docs)
    with gzip.GzipFile(os.path.join(out, "english_mix.txt.gz"), "wb", mtime=0) as fh:
        fh.write("\n\n".join(docs).encode("utf-8"))


if __name__ == "__main__":
    main()
