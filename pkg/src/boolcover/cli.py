"""Batch command-line frontend.

Inputs are plain files; each is classified by its first content line
(``algebra``, ``observable``, ``system`` or ``presheaf``) and parsed by the
owning module.  Commands print deterministic reports: in ``lines`` format
every check is one ``PASS|FAIL <check> <witness...>`` line, which is what
the golden files under data/golden store.  Exit codes: 0 all checks pass,
1 some semantic check failed (witnesses printed), 2 structural, parse or
budget error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import algebra as alg_mod
from . import localization as loc_mod
from . import observables as obs_mod
from . import presheaves as psh_mod
from .adjunction import adjunction_bijection_check, colimit, colimit_dump
from .algebra import as_boolean, validate_boolean_algebra, validate_quantum_algebra
from .localization import boolean_representation_verdict, generate_system
from .observables import BorelFrame, enumerate_observables, validate_observable
from .presheaves import FiniteCategory, empty_presheaf, hom_functor_R, representable
from .reports import ToolkitError, ValidationReport
from .valuation import build_fibration, fibration_dump, stone, stone_dump

DEFAULT_BUDGET = 10_000_000


@dataclass
class RunConfig:
    paths: list[str]
    command: str
    budget: int = DEFAULT_BUDGET
    out: str | None = None
    fmt: str = "text"
    target: str | None = None
    k: int = 2
    cuts: list[str] = field(default_factory=list)


@dataclass
class LoadedInputs:
    algebras: dict[str, alg_mod.QuantumEventAlgebra]
    observables: dict[str, obs_mod.Observable]
    obs_order: list[str]
    systems: list[tuple[str, str, list[tuple[str, str]], dict]]
    presheaf_texts: list[str]


def load_inputs(paths: list[str]) -> LoadedInputs:
    texts = []
    for p in paths:
        texts.append((p, Path(p).read_text(encoding="utf-8")))

    def kind(text: str) -> str:
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            return line.split()[0]
        return ""

    algebras: dict[str, alg_mod.QuantumEventAlgebra] = {}
    for p, t in texts:
        if kind(t) == "algebra":
            a = alg_mod.parse_lattice(t)
            if a.name in algebras:
                raise alg_mod.ParseError(f"duplicate algebra name {a.name!r}")
            algebras[a.name] = a

    observables: dict[str, obs_mod.Observable] = {}
    obs_order: list[str] = []
    for p, t in texts:
        if kind(t) == "observable":
            o = obs_mod.parse_observable(t, algebras)
            if o.name in observables:
                raise obs_mod.ParseError(f"duplicate observable name {o.name!r}")
            observables[o.name] = o
            obs_order.append(o.name)

    systems = []
    for p, t in texts:
        if kind(t) == "system":
            systems.append(loc_mod.parse_system_file(t, algebras))

    presheaf_texts = [t for _, t in texts if kind(t) == "presheaf"]
    unknown = [p for p, t in texts if kind(t) not in
               {"algebra", "observable", "system", "presheaf"}]
    if unknown:
        raise alg_mod.ParseError(f"unrecognized input file {unknown[0]!r}")
    return LoadedInputs(algebras, observables, obs_order, systems, presheaf_texts)


def _boolean_observables(inputs: LoadedInputs) -> list[obs_mod.Observable]:
    out = []
    for name in inputs.obs_order:
        o = inputs.observables[name]
        if validate_boolean_algebra(as_boolean(o.target)).passed:
            out.append(o)
    return out


def _base_for(inputs: LoadedInputs, target: obs_mod.Observable,
              budget: int) -> FiniteCategory:
    objs = [
        o for o in _boolean_observables(inputs)
        if o.frame.same(target.frame)
    ]
    if not objs:
        raise alg_mod.StructuralError(
            "no Boolean-valued observables share the target's frame"
        )
    return FiniteCategory.full("base", objs, budget)


def _pick_target(inputs: LoadedInputs, cfg: RunConfig) -> obs_mod.Observable:
    if cfg.target:
        if cfg.target not in inputs.observables:
            raise alg_mod.StructuralError(f"unknown target observable {cfg.target!r}")
        return inputs.observables[cfg.target]
    for name in inputs.obs_order:
        o = inputs.observables[name]
        if not validate_boolean_algebra(as_boolean(o.target)).passed:
            return o
    raise alg_mod.StructuralError(
        "all loaded observables have Boolean targets; pick one with --target"
    )


def _build_systems(inputs: LoadedInputs, cfg: RunConfig):
    built = []
    for name, target_name, cover_lines, homs in inputs.systems:
        if target_name not in inputs.observables:
            raise alg_mod.StructuralError(
                f"system {name}: unknown target observable {target_name!r}"
            )
        target = inputs.observables[target_name]
        base = _base_for(inputs, target, cfg.budget)
        generators = []
        for obj_name, hom_name in cover_lines:
            if obj_name not in base.object_index:
                raise alg_mod.StructuralError(
                    f"system {name}: cover object {obj_name!r} is not a base object"
                )
            generators.append((obj_name, hom_name, homs[hom_name]))
        built.append(generate_system(name, base, target, generators))
    return built


# -- commands -----------------------------------------------------------------


def cmd_validate(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    reports: list[ValidationReport] = []
    for name in sorted(inputs.algebras):
        reports.append(validate_quantum_algebra(inputs.algebras[name]))
    for name in inputs.obs_order:
        reports.append(validate_observable(inputs.observables[name]))
    for system in _build_systems(inputs, cfg):
        reports.append(loc_mod.validate_system(system))
    lines = []
    for r in reports:
        lines.extend(r.lines())
    code = 0 if all(r.passed for r in reports) else 1
    return code, lines


def cmd_blocks(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    lines = []
    for name in sorted(inputs.algebras):
        a = inputs.algebras[name]
        lines.append(f"algebra {name}")
        for i, blk in enumerate(alg_mod.enumerate_blocks(a, cfg.budget)):
            lines.append(f"block {i} : " + " ".join(sorted(blk.elements)))
    return 0, lines


def cmd_observables(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    frame = BorelFrame.build(cfg.cuts if cfg.k > 1 else [])
    if cfg.k > 1 and not cfg.cuts:
        frame = BorelFrame.build([str(i) for i in range(cfg.k - 1)])
    lines = []
    for name in sorted(inputs.algebras):
        a = inputs.algebras[name]
        found = enumerate_observables(frame, a, cfg.budget)
        lines.append(f"target {name} k {frame.k} count {len(found)}")
        for i, o in enumerate(found):
            lines.append(f"observable {i} : " + " ".join(o.atom_images()))
    return 0, lines


def cmd_colimit(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    lines = []
    for system in _build_systems(inputs, cfg):
        lines.append(f"system {system.name}")
        carrier = colimit(system.as_presheaf())
        lines.extend(colimit_dump(carrier).splitlines())
    return 0, lines


def cmd_represent(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    lines = []
    code = 0
    for system in _build_systems(inputs, cfg):
        report = boolean_representation_verdict(system)
        lines.append(f"system {system.name} target {system.target.name} "
                     f"covers {system.cover_count()}")
        lines.extend(report.lines())
        if report.headline != "ISO":
            code = 1
    return code, lines


def cmd_adjunction(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    target = _pick_target(inputs, cfg)
    base = _base_for(inputs, target, cfg.budget)
    lines = []
    ok = True
    for obj in base.objects:
        carrier = colimit(representable(base, obj.name))
        want = len(obj.target.elements)
        good = len(carrier.classes) == want
        ok = ok and good
        status = "PASS" if good else "FAIL"
        lines.append(
            f"{status} representable-colimit.{obj.name} "
            f"{len(carrier.classes)} {want}"
        )
    probes = [("empty", empty_presheaf(base))]
    probes.extend(
        (f"y[{obj.name}]", representable(base, obj.name)) for obj in base.objects
    )
    probes.append((f"R[{target.name}]", hom_functor_R(base, target, cfg.budget)))
    for label, x in probes:
        rep = adjunction_bijection_check(x, target, cfg.budget)
        good = rep.equal and rep.bijection_ok
        ok = ok and good
        status = "PASS" if good else "FAIL"
        lines.append(
            f"{status} adjunction-bijection.{label} {rep.nat_count} {rep.hom_count}"
        )
    return (0 if ok else 1), lines


def cmd_stone(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    lines = []
    code = 0
    for name in sorted(inputs.algebras):
        a = inputs.algebras[name]
        if not validate_boolean_algebra(as_boolean(a)).passed:
            lines.append(f"FAIL {name}.stone not-boolean")
            code = 1
            continue
        lines.append(f"algebra {name}")
        lines.extend(stone_dump(stone(as_boolean(a))).splitlines())
    return code, lines


def cmd_fibration(inputs: LoadedInputs, cfg: RunConfig) -> tuple[int, list[str]]:
    target = _pick_target(inputs, cfg)
    base = _base_for(inputs, target, cfg.budget)
    fr = build_fibration(base, target, cfg.budget)
    lines = [f"target {target.name} fibers {len(fr.fibers)} "
             f"carrier {len(fr.carrier)}"]
    lines.extend(fibration_dump(fr).splitlines())
    return 0, lines


COMMANDS = {
    "validate": cmd_validate,
    "blocks": cmd_blocks,
    "observables": cmd_observables,
    "colimit": cmd_colimit,
    "represent": cmd_represent,
    "adjunction": cmd_adjunction,
    "stone": cmd_stone,
    "fibration": cmd_fibration,
}


def _render(cfg: RunConfig, lines: list[str]) -> str:
    if cfg.fmt == "lines":
        return "\n".join(lines) + "\n"
    header = [f"# boolcover {cfg.command}"]
    return "\n".join(header + lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="boolcover",
        description="Finite-model checks for Boolean coverings of quantum "
        "event and observable structures.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("paths", nargs="*", help="input files")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="max enumeration candidates (default 10^7)")
    parser.add_argument("--format", dest="fmt", choices=["text", "lines"],
                        default="text")
    parser.add_argument("--out", default=None, help="write report to file")
    parser.add_argument("--target", default=None,
                        help="target observable name (adjunction/fibration)")
    parser.add_argument("--k", type=int, default=2,
                        help="frame cell count for 'observables'")
    parser.add_argument("--cuts", nargs="*", default=[],
                        help="frame cut points for 'observables'")
    ns = parser.parse_args(argv)
    cfg = RunConfig(
        paths=ns.paths,
        command=ns.command,
        budget=ns.budget,
        out=ns.out,
        fmt=ns.fmt,
        target=ns.target,
        k=ns.k,
        cuts=ns.cuts,
    )
    if cfg.budget <= 0:
        print("ERROR budget must be positive", file=sys.stderr)
        return 2
    try:
        inputs = load_inputs(cfg.paths)
        code, lines = COMMANDS[cfg.command](inputs, cfg)
    except (ToolkitError, OSError) as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return 2
    text = _render(cfg, lines)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
