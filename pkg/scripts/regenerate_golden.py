#!/usr/bin/env python3
"""Rewrite the file corpus and every golden report from scratch.

Running this twice must produce bit-identical output; the test suite checks
that by regenerating into a temporary directory and diffing against
data/.  Corpus lattice/observable/system files are rendered from the
in-code builders, golden reports by invoking the CLI in `lines` format.
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from boolcover import corpus  # noqa: E402
from boolcover.algebra import format_lattice  # noqa: E402
from boolcover.cli import main as cli_main  # noqa: E402


def observable_file(name: str, k: int, cuts: list[str], target: str,
                    atoms: list[str]) -> str:
    lines = [f"observable {name}", f"frame {k}"]
    if cuts:
        lines.append("cuts " + " ".join(cuts))
    lines.append(f"target {target}")
    for i, img in enumerate(atoms):
        lines.append(f"atom {i} -> {img}")
    return "\n".join(lines) + "\n"


def hom_block(name: str, src, tgt, mapping: dict[str, str]) -> list[str]:
    lines = [f"hom {name} {src} -> {tgt}"]
    for k in mapping:
        lines.append(f"map {k} -> {mapping[k]}")
    return lines


def write_corpus(corpus_dir: Path) -> None:
    corpus_dir.mkdir(parents=True, exist_ok=True)
    (corpus_dir / "bad").mkdir(exist_ok=True)

    mo2f = corpus.mo2_family()
    b4f = corpus.b4_family()
    s16f = corpus.star16_family()

    algebras = dict(corpus.corpus_algebras())
    algebras["b16"] = corpus.b16()
    for fam in (mo2f, b4f, s16f):
        for blk in fam.blocks:
            algebras[blk.name] = blk
    for name, alg in sorted(algebras.items()):
        (corpus_dir / f"{name}.lat").write_text(format_lattice(alg), encoding="utf-8")

    # one-cell-frame observables: block-valued and quantum-valued
    for fam in (mo2f, b4f, s16f):
        (corpus_dir / f"{fam.target.name}.obs").write_text(
            observable_file(fam.target.name, 1, [], fam.algebra.name, ["one"]),
            encoding="utf-8",
        )
        for obs, blk in zip(fam.observables, fam.blocks):
            (corpus_dir / f"{obs.name}.obs").write_text(
                observable_file(obs.name, 1, [], blk.name, ["one"]),
                encoding="utf-8",
            )

    # two-cell-frame MO2 pair
    (corpus_dir / "xi_mo2_k2a.obs").write_text(
        observable_file("xi_mo2_k2a", 2, ["0"], "mo2", ["a", "astar"]),
        encoding="utf-8",
    )
    (corpus_dir / "th_a_k2.obs").write_text(
        observable_file("th_a_k2", 2, ["0"], "blk_a", ["a", "astar"]),
        encoding="utf-8",
    )
    (corpus_dir / "th_b_k2.obs").write_text(
        observable_file("th_b_k2", 2, ["0"], "blk_b", ["b", "bstar"]),
        encoding="utf-8",
    )

    def system_file(name: str, target: str, covers: list[tuple[str, str]],
                    homs: list[list[str]]) -> str:
        lines = [f"system {name} target {target}"]
        for obj, hom in covers:
            lines.append(f"cover {obj} : {hom}")
        for block in homs:
            lines.extend(block)
        return "\n".join(lines) + "\n"

    incl_a, incl_b = mo2f.inclusions
    (corpus_dir / "mo2_both.sys").write_text(
        system_file(
            "mo2_both",
            "xi_mo2",
            [("th_a", "incl_a"), ("th_b", "incl_b")],
            [
                hom_block("incl_a", "blk_a", "mo2", incl_a.mapping),
                hom_block("incl_b", "blk_b", "mo2", incl_b.mapping),
            ],
        ),
        encoding="utf-8",
    )
    (corpus_dir / "mo2_single_a.sys").write_text(
        system_file(
            "mo2_single_a",
            "xi_mo2",
            [("th_a", "incl_a")],
            [hom_block("incl_a", "blk_a", "mo2", incl_a.mapping)],
        ),
        encoding="utf-8",
    )
    (corpus_dir / "mo2_single_b.sys").write_text(
        system_file(
            "mo2_single_b",
            "xi_mo2",
            [("th_b", "incl_b")],
            [hom_block("incl_b", "blk_b", "mo2", incl_b.mapping)],
        ),
        encoding="utf-8",
    )
    (corpus_dir / "b4_identity.sys").write_text(
        system_file(
            "b4_identity",
            "xi_b4",
            [("th_b4", "incl_b4")],
            [hom_block("incl_b4", "blk_b4", "b4", b4f.inclusions[0].mapping)],
        ),
        encoding="utf-8",
    )
    (corpus_dir / "star16_blocks.sys").write_text(
        system_file(
            "star16_blocks",
            "xi_star16",
            [(obs.name, incl.name) for obs, incl in
             zip(s16f.observables, s16f.inclusions)],
            [hom_block(incl.name, blk.name, "star16", incl.mapping)
             for incl, blk in zip(s16f.inclusions, s16f.blocks)],
        ),
        encoding="utf-8",
    )

    # deliberately broken fixtures for the CLI exit-code contract
    (corpus_dir / "bad" / "b4_self_ortho.lat").write_text(
        "algebra b4_self_ortho\n"
        "elements zero a astar one\n"
        "top one\n"
        "leq zero a\nleq zero astar\nleq a one\nleq astar one\n"
        "ortho zero one\northo one zero\northo a a\northo astar astar\n",
        encoding="utf-8",
    )
    (corpus_dir / "bad" / "missing_top.lat").write_text(
        "algebra missing_top\nelements zero one\n"
        "ortho zero one\northo one zero\n",
        encoding="utf-8",
    )


GOLDEN_COMMANDS: dict[str, list[str]] = {
    "validate_corpus": [
        "validate", "b2.lat", "b4.lat", "b8.lat", "mo2.lat", "star16.lat",
        "blk_a.lat", "blk_b.lat", "xi_mo2.obs", "th_a.obs", "th_b.obs",
        "mo2_both.sys",
    ],
    "blocks_corpus": [
        "blocks", "b2.lat", "b4.lat", "b8.lat", "mo2.lat", "star16.lat",
    ],
    "observables_mo2_k2": ["observables", "mo2.lat", "--k", "2", "--cuts", "0"],
    "colimit_mo2_both": [
        "colimit", "mo2.lat", "blk_a.lat", "blk_b.lat", "xi_mo2.obs",
        "th_a.obs", "th_b.obs", "mo2_both.sys",
    ],
    "represent_mo2_both": [
        "represent", "mo2.lat", "blk_a.lat", "blk_b.lat", "xi_mo2.obs",
        "th_a.obs", "th_b.obs", "mo2_both.sys",
    ],
    "represent_mo2_single_a": [
        "represent", "mo2.lat", "blk_a.lat", "xi_mo2.obs", "th_a.obs",
        "mo2_single_a.sys",
    ],
    "represent_mo2_single_b": [
        "represent", "mo2.lat", "blk_b.lat", "xi_mo2.obs", "th_b.obs",
        "mo2_single_b.sys",
    ],
    "represent_b4_identity": [
        "represent", "b4.lat", "blk_b4.lat", "xi_b4.obs", "th_b4.obs",
        "b4_identity.sys",
    ],
    "represent_star16_blocks": [
        "represent", "star16.lat", "blk_pqr.lat", "blk_pst.lat", "blk_puv.lat",
        "xi_star16.obs", "th_pqr.obs", "th_pst.obs", "th_puv.obs",
        "star16_blocks.sys",
    ],
    "adjunction_mo2": [
        "adjunction", "mo2.lat", "blk_a.lat", "blk_b.lat", "xi_mo2.obs",
        "th_a.obs", "th_b.obs", "--target", "xi_mo2",
    ],
    "stone_boolean": ["stone", "b2.lat", "b4.lat", "b8.lat", "b16.lat"],
    "fibration_mo2": [
        "fibration", "mo2.lat", "blk_a.lat", "blk_b.lat", "xi_mo2.obs",
        "th_a.obs", "th_b.obs", "--target", "xi_mo2",
    ],
}

EXPECTED_EXIT = {
    "represent_mo2_single_a": 1,
    "represent_mo2_single_b": 1,
}


def golden_argv(name: str, corpus_dir: Path, out_path: Path) -> list[str]:
    argv = []
    for tok in GOLDEN_COMMANDS[name]:
        if tok.endswith((".lat", ".obs", ".sys")):
            argv.append(str(corpus_dir / tok))
        else:
            argv.append(tok)
    argv.extend(["--format", "lines", "--out", str(out_path)])
    return argv


def write_golden(corpus_dir: Path, golden_dir: Path) -> None:
    golden_dir.mkdir(parents=True, exist_ok=True)
    for name in GOLDEN_COMMANDS:
        out_path = golden_dir / f"{name}.txt"
        code = cli_main(golden_argv(name, corpus_dir, out_path))
        expected = EXPECTED_EXIT.get(name, 0)
        if code != expected:
            raise SystemExit(
                f"golden command {name} exited {code}, expected {expected}"
            )


def main() -> None:
    data = ROOT / "data"
    write_corpus(data / "corpus")
    write_golden(data / "corpus", data / "golden")
    print(f"corpus and golden files rewritten under {data}")


if __name__ == "__main__":
    main()
