#!/usr/bin/env python3
"""End-to-end demo: generate a synthetic workspace, then run every pipeline
stage through the CLI (prepare, train x4, eval, build-lexicon, corr, alpha,
readability). A handy smoke test and a usage walkthrough in one place.
"""

import argparse
import random
import sys
from pathlib import Path

from make_demo_data import build, write_norms

from psynorms.cli import main as psynorms
from psynorms.lexicon import read_lexicon
from psynorms.norms import PropertyKind

PROPERTIES = ("concreteness", "aoa", "imageability", "subj_frequency")


def run(*args):
    print(f"\n$ psynorms {' '.join(args)}")
    code = psynorms(list(args))
    if code != 0:
        sys.exit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="demo")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    base = Path(args.dir)
    config = str(build(base, seed=args.seed))

    run("prepare", "-c", config)
    for prop in PROPERTIES:
        run("train", "-c", config, "--property", prop)
    run("eval", "-c", config, "--property", "aoa")
    run("build-lexicon", "-c", config)

    # fake a small independent rating list: the inferred values plus jitter
    lexicon = read_lexicon(base / "out/lexicon.csv")
    jitter = random.Random(args.seed)
    reference = base / "norms/reference_imageability.csv"
    write_norms(
        reference,
        [
            (e.word, round(min(7.0, max(1.0,
                e.ratings[PropertyKind.IMAGEABILITY] + jitter.gauss(0, 0.3))), 2))
            for e in lexicon[:40]
        ],
    )
    run("corr", "-c", config)
    run("alpha", "-c", config, "--property", "imageability",
        "--reference", str(reference))

    sample_text = next((base / "corpus").glob("text_*.txt"))
    run("readability", "-c", config, "--text", str(sample_text))
    run("readability", "-c", config, "--corpus", str(base / "corpus/manifest.csv"))

    print(f"\nall stages finished; outputs under {base / 'out'}")


if __name__ == "__main__":
    main()
