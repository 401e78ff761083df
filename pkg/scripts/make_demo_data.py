#!/usr/bin/env python3
"""Generate a synthetic demo workspace: rated word lists, frequency lists,
grade lexicons, embeddings, a dictionary, a labeled mini-corpus and a run
configuration. Everything is fake but structurally faithful, so the whole
pipeline can be exercised without the original (non-redistributable)
resources.
"""

import argparse
import csv
import re
from pathlib import Path

import numpy as np

SYLLABLES = [
    "ba", "ca", "da", "fa", "ga", "ja", "la", "ma", "na", "pa", "ra", "sa",
    "ta", "va", "za", "be", "ce", "de", "le", "me", "ne", "pe", "re", "se",
    "te", "ve", "bi", "di", "fi", "li", "mi", "ni", "ri", "si", "ti", "vi",
    "bo", "co", "do", "go", "lo", "mo", "no", "po", "ro", "so", "to", "vo",
]

CONFIG = """\
[output]
dir = out

[norms]
scale = 1,7
orthography = builtin

[norms.concreteness]
sources =
    norms/concreteness_ep.csv orthography=yes
    norms/concreteness_bp.csv

[norms.aoa]
sources =
    norms/aoa_seven.csv
    norms/aoa_nine.csv scale=1,9

[norms.imageability]
sources =
    norms/imageability_ep.csv orthography=yes

[norms.subj_frequency]
sources =
    norms/subj_frequency_ep.csv orthography=yes

[features]
subtlex = frequencies/subtlex.tsv
subimdb = frequencies/subimdb.tsv
written = frequencies/written.tsv
spoken = frequencies/spoken.tsv
mixed = frequencies/mixed.tsv
grade_lexicons = grades/g1.txt, grades/g2.txt, grades/g3.txt, grades/g4.txt, grades/g5.txt, grades/g6.txt
embedding_a = embeddings/view_a.txt
embedding_b = embeddings/view_b.txt

[regression]
lambda = 1.0

[evaluation]
k = 5
reps = 2
seed = 13

[lexicon]
dictionary = lexicon/dictionary.csv
loanwords = lexicon/loanwords.txt
min_count = 8
frequency = mixed

[readability]
manifest = corpus/manifest.csv
easy_words = lexicon/easy_words.txt
lexicon = out/lexicon.csv
folds = 5
mattr_window = 30
"""

SENTENCE_BANK = {
    3: [
        "O sol brilha no ceu azul.",
        "A bola rola na rua.",
        "O gato dorme na casa.",
        "Eu gosto de pao quente.",
        "A menina canta bem alto.",
    ],
    4: [
        "As criancas brincam juntas na praca da cidade.",
        "O professor explicou a tarefa com muita calma.",
        "Minha familia viajou para a praia nas ferias.",
        "O time treinou bastante antes do jogo importante.",
        "A bibliotecaria organizou os livros novos da escola.",
    ],
    5: [
        "A pesquisa considerou diversos fatores relevantes da regiao estudada.",
        "Os resultados indicaram tendencias consistentes durante varias decadas.",
        "O jornalista entrevistou especialistas sobre o fenomeno climatico.",
        "A prefeitura anunciou investimentos significativos em infraestrutura urbana.",
        "O documentario apresentou evidencias surpreendentes sobre a biodiversidade.",
    ],
    6: [
        "A metodologia empregada fundamentou conclusoes estatisticamente significativas.",
        "Interpretacoes contemporaneas questionam pressupostos epistemologicos tradicionais.",
        "Transformacoes socioeconomicas estruturais condicionam dinamicas demograficas complexas.",
        "A regulamentacao ambiental estabelece responsabilidades institucionais abrangentes.",
        "Perspectivas interdisciplinares enriquecem substancialmente o debate academico.",
    ],
}


def synthetic_vocabulary(rng, size):
    words = set()
    while len(words) < size:
        length = int(rng.integers(2, 5))
        words.add("".join(rng.choice(SYLLABLES) for _ in range(length)))
    return sorted(words)


def corpus_vocabulary():
    """Every word used by the demo texts, so the lexicon can cover them."""
    tokens = set()
    for bank in SENTENCE_BANK.values():
        for sentence in bank:
            tokens.update(re.findall(r"[a-zç]+", sentence.lower()))
    return sorted(tokens)


def write_norms(path, pairs):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["word", "rating"])
        writer.writerows(pairs)


def write_tsv(path, rows):
    path.write_text(
        "".join("\t".join(str(c) for c in row) + "\n" for row in rows),
        encoding="utf-8",
    )


def write_embedding(path, vocab, dim, rng):
    lines = [f"{len(vocab)} {dim}"]
    for word in vocab:
        vector = rng.uniform(-1, 1, size=dim)
        lines.append(word + " " + " ".join(f"{v:.6f}" for v in vector))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def build(base: Path, seed: int = 7, vocabulary: int = 300) -> Path:
    rng = np.random.default_rng(seed)
    for sub in ("norms", "frequencies", "grades", "embeddings", "lexicon", "corpus"):
        (base / sub).mkdir(parents=True, exist_ok=True)
    words = synthetic_vocabulary(rng, vocabulary)
    text_words = corpus_vocabulary()

    def rated(subset, top=7.0):
        return [(w, round(float(rng.uniform(1.0, top)), 2)) for w in subset]

    n = len(words)
    write_norms(
        base / "norms/concreteness_ep.csv",
        rated(words[: n // 2] + text_words) + [("acção", 5.1), ("faneca", 3.2)],
    )
    write_norms(base / "norms/concreteness_bp.csv", rated(words[n // 3 : 5 * n // 6]))
    write_norms(base / "norms/aoa_seven.csv", rated(words[: n // 2] + text_words))
    write_norms(base / "norms/aoa_nine.csv", rated(words[n // 3 :], top=9.0))
    write_norms(
        base / "norms/imageability_ep.csv", rated(words[: 4 * n // 5] + text_words)
    )
    write_norms(
        base / "norms/subj_frequency_ep.csv", rated(words[n // 5 :] + text_words)
    )

    vocab = words + text_words + ["ação"]
    write_tsv(
        base / "frequencies/subtlex.tsv",
        [(w, int(rng.integers(1, 5000)), int(rng.integers(1, 200))) for w in vocab],
    )
    for name in ("subimdb", "written", "spoken"):
        write_tsv(
            base / f"frequencies/{name}.tsv",
            [(w, int(rng.integers(1, 2000))) for w in vocab],
        )
    write_tsv(
        base / "frequencies/mixed.tsv",
        [(w, int(rng.integers(8, 20000))) for w in vocab] + [("raridade", 3)],
    )

    for grade in range(1, 7):
        # lower grades hold shorter, "easier" words
        pool = [w for w in vocab if len(w) <= 4 + grade]
        chosen = rng.choice(pool, size=min(40, len(pool)), replace=False)
        (base / f"grades/g{grade}.txt").write_text(
            "\n".join(sorted(chosen)) + "\n", encoding="utf-8"
        )

    write_embedding(base / "embeddings/view_a.txt", vocab, 16, rng)
    write_embedding(base / "embeddings/view_b.txt", vocab, 12, rng)

    with open(base / "lexicon/dictionary.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["word", "pos"])
        pos_cycle = ["noun", "noun", "verb", "adjective", "adverb"]
        for i, word in enumerate(words + text_words):
            writer.writerow([word, pos_cycle[i % len(pos_cycle)]])
        writer.writerow(["download", "noun"])
        writer.writerow(["raridade", "noun"])
        writer.writerow(["dumela", "other"])
    (base / "lexicon/loanwords.txt").write_text("download\n", encoding="utf-8")
    (base / "lexicon/easy_words.txt").write_text(
        "\n".join(["o", "a", "no", "na", "de", "sol", "casa", "gato", "bola"]) + "\n",
        encoding="utf-8",
    )

    with open(base / "corpus/manifest.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["file", "grade"])
        index = 0
        for grade, bank in SENTENCE_BANK.items():
            for copy in range(5):
                chosen = rng.choice(bank, size=3, replace=False)
                name = f"text_{index:02d}.txt"
                (base / "corpus" / name).write_text(" ".join(chosen), encoding="utf-8")
                writer.writerow([name, grade])
                index += 1

    config = base / "run.ini"
    config.write_text(CONFIG, encoding="utf-8")
    return config


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", default="demo", help="target directory (default: demo)")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--vocabulary", type=int, default=300)
    args = parser.parse_args()
    config = build(Path(args.dir), seed=args.seed, vocabulary=args.vocabulary)
    print(f"demo workspace ready; config at {config}")


if __name__ == "__main__":
    main()
