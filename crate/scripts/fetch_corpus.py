#!/usr/bin/env python3
"""Rebuild the bundled desk corpus and the default lexicon files.

Every text below is a public-domain novel that ships inside a package on
PyPI or npm (as a test fixture or a sample dataset), so the corpus can be
rebuilt from the package registries alone. Project Gutenberg headers and
license trailers are stripped; the remaining text is written unchanged.

Usage: python3 scripts/fetch_corpus.py [--corpus DIR] [--data DIR]
"""

import argparse
import bz2
import gzip
import html.parser
import io
import json
import re
import tarfile
import urllib.parse
import urllib.request
import zipfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def pypi_file(name, version, filename_suffix):
    meta = json.load(urllib.request.urlopen(f"https://pypi.org/pypi/{name}/json", timeout=60))
    for f in meta["releases"][version]:
        if f["filename"].endswith(filename_suffix):
            url = urllib.parse.urljoin(f"https://pypi.org/pypi/{name}/json", f["url"])
            return urllib.request.urlopen(url, timeout=600).read()
    raise RuntimeError(f"{name}=={version}: no file ending in {filename_suffix}")


def npm_tarball(name, version):
    quoted = name.replace("/", "%2F")
    meta = json.load(urllib.request.urlopen(f"https://registry.npmjs.org/{quoted}", timeout=60))
    url = meta["versions"][version]["dist"]["tarball"]
    return urllib.request.urlopen(url, timeout=600).read()


def tar_member(blob, member):
    with tarfile.open(fileobj=io.BytesIO(blob)) as t:
        return t.extractfile(member).read()


def strip_gutenberg(text):
    start = re.search(r"^\*\*\* ?START OF[^\n]*\*\*\*[^\n]*\n", text, re.M)
    if start:
        text = text[start.end():]
    end = re.search(r"^(End of (the )?Project Gutenberg|\*\*\* ?END OF)", text, re.M)
    if end:
        text = text[: end.start()]
    return text.strip() + "\n"


class _XhtmlText(html.parser.HTMLParser):
    BLOCK = {"p", "div", "h1", "h2", "h3", "h4", "br", "li", "tr"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts = []
        self.skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in ("style", "script", "head"):
            self.skip += 1
        if tag in self.BLOCK:
            self.parts.append("\n\n")

    def handle_endtag(self, tag):
        if tag in ("style", "script", "head"):
            self.skip -= 1

    def handle_data(self, data):
        if not self.skip:
            self.parts.append(data)


def epub_text(blob, chapters):
    z = zipfile.ZipFile(io.BytesIO(blob))
    out = []
    for name in chapters:
        p = _XhtmlText()
        p.feed(z.read(name).decode("utf-8"))
        out.append("".join(p.parts))
    text = "\n".join(out)
    text = re.sub(r"[ \t]+", " ", text)
    return re.sub(r"\n\s*\n+", "\n\n", text).strip() + "\n"


def big_txt_books(big):
    """Split Norvig's big.txt into its Gutenberg books and keep the novels."""
    wanted = {
        "THE ADVENTURES OF SHERLOCK HOLMES": "doyle_adventures_of_sherlock_holmes",
        "WAR AND PEACE": "tolstoy_war_and_peace",
    }
    books = {}
    for m in re.finditer(r"^\*\*\* ?START OF[^\n]*EBOOK,? ([^\n*]+?) ?\*\*\*", big, re.M):
        title = m.group(1).strip()
        if title not in wanted:
            continue
        rest = big[m.end():]
        end = re.search(r"^(End of (the )?Project Gutenberg|\*\*\* ?END OF)", rest, re.M)
        books[wanted[title]] = rest[: end.start()].strip() + "\n"
    return books


def build_corpus(out):
    out.mkdir(parents=True, exist_ok=True)
    books = {}

    blob = npm_tarball("@stdlib/datasets-moby-dick", "0.2.3")
    books["melville_moby_dick"] = tar_member(blob, "package/data/data.txt").decode("utf-8").strip() + "\n"

    blob = pypi_file("Brotli", "1.2.0", ".tar.gz")
    alice = tar_member(blob, "brotli-1.2.0/tests/testdata/alice29.txt").decode("latin-1")
    books["carroll_alice_in_wonderland"] = alice[: alice.index("THE END")].strip() + "\n"

    blob = pypi_file("sentencepiece", "0.2.2", ".tar.gz")
    botchan = tar_member(blob, "sentencepiece-0.2.2/test/botchan.txt").decode("utf-8-sig")
    botchan = strip_gutenberg(botchan)
    books["natsume_botchan"] = botchan[: botchan.index("--(THE END)--")].strip() + "\n"

    blob = npm_tarball("epub-parser", "0.2.5")
    epub = tar_member(blob, "package/example/testbook.epub")
    chapters = [f"OPS/main{i}.xml" for i in range(0, 30)]
    z = zipfile.ZipFile(io.BytesIO(epub))
    chapters = [c for c in chapters if c in z.namelist()]
    books["wells_war_of_the_worlds"] = epub_text(epub, chapters)

    blob = pypi_file("autocorrect", "0.1.0", ".tar.gz")
    words = tar_member(blob, "autocorrect-0.1.0/autocorrect/words.bz2")
    with tarfile.open(fileobj=io.BytesIO(bz2.decompress(words))) as t:
        big = t.extractfile("words/big.txt").read().decode("utf-8", errors="replace")
    books.update(big_txt_books(big))

    for stem, text in sorted(books.items()):
        (out / f"{stem}.txt").write_text(text, encoding="utf-8")
        print(f"{stem}: {len(text):,} bytes")


def build_lexicons(data):
    data.mkdir(parents=True, exist_ok=True)

    blob = pypi_file("stopwords", "1.0.2", ".tar.gz")
    raw = tar_member(blob, "stopwords-1.0.2/stopwords/languages/english/default.txt").decode("utf-8")
    words = sorted({w.strip().lower() for w in raw.splitlines() if w.strip()})
    (data / "stopwords-en.txt").write_text("\n".join(words) + "\n", encoding="utf-8")
    print(f"stopwords: {len(words)}")

    wheel = pypi_file("spacy-lookups-data", "1.0.5", ".whl")
    z = zipfile.ZipFile(io.BytesIO(wheel))
    lookup = json.loads(gzip.decompress(z.read("spacy_lookups_data/data/en_lemma_lookup.json.gz")))
    pairs = {}
    for surface, lemma in lookup.items():
        s, l = surface.lower(), lemma.lower()
        if not s or not l or s == l or any(c.isspace() for c in s + l):
            continue
        pairs.setdefault(s, l)
    lines = [f"{s}\t{l}" for s, l in sorted(pairs.items())]
    (data / "lemmas-en.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"lemmas: {len(lines)}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--corpus", type=Path, default=ROOT / "corpus")
    ap.add_argument("--data", type=Path, default=ROOT / "crates" / "core" / "data")
    ap.add_argument("--skip-corpus", action="store_true")
    ap.add_argument("--skip-lexicons", action="store_true")
    args = ap.parse_args()
    if not args.skip_corpus:
        build_corpus(args.corpus)
    if not args.skip_lexicons:
        build_lexicons(args.data)


if __name__ == "__main__":
    main()
