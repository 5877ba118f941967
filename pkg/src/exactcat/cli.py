"""Command-line entry point.

Loads a JSON session describing an algebra over GF(p), runs the requested
commands (indecomposables, exact_structures, verify, smodad), and writes a
plain-text report, a machine-readable JSON twin, and Graphviz DOT files into
the output directory.  Identical sessions produce byte-identical outputs.

Exit codes: 0 all checks pass, 1 verification failure, 2 input error,
3 cap or guard exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .algebra import Algebra, AlgebraError, QuiverPresentation, build_from_quiver
from .auslander import AuslanderContext, AuslanderError
from .exactstruct import (
    ExactStructure,
    GuardExceeded,
    brute_force_structures,
    is_exact_structure,
)
from .linalg import FieldPrime, LinalgError, Matrix
from .repmod import CapExceeded, RepmodError, ar_sequence, proj_dim, radical_submodule

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_CAP = 3


class SessionError(Exception):
    pass


class Session:
    def __init__(self, payload: dict):
        try:
            self.field = FieldPrime(int(payload["p"]))
        except (KeyError, TypeError, ValueError, LinalgError) as exc:
            raise SessionError(f"bad field: {exc}")
        caps = payload.get("caps", {})
        self.dim_cap = int(caps.get("dim", 12))
        self.resolution_cutoff = int(caps.get("resolution", 8))
        self.multiplicity_bound = int(caps.get("multiplicity", 2))
        if min(self.dim_cap, self.resolution_cutoff, self.multiplicity_bound) <= 0:
            raise SessionError("caps must be positive")
        self.seed = int(payload.get("seed", 0))
        self.algebra = self._load_algebra(payload)
        self.commands = self._load_commands(payload.get("commands", []))
        self.given_structures = payload.get("structures")
        generators = payload.get("generators", "all")
        if generators != "all" and not (
            isinstance(generators, list) and all(isinstance(i, int) for i in generators)
        ):
            raise SessionError("generators must be 'all' or a list of indecomposable ids")
        self.generators = generators

    def _load_algebra(self, payload) -> Algebra:
        if "quiver" in payload:
            q = payload["quiver"]
            try:
                relations = []
                for rel in q.get("relations", []):
                    if rel and isinstance(rel[0], str):
                        relations.append([(1, tuple(rel))])
                    else:
                        relations.append([(int(c), tuple(path)) for c, path in rel])
                pres = QuiverPresentation(
                    self.field,
                    list(q["vertices"]),
                    [tuple(a) for a in q["arrows"]],
                    relations,
                    int(q.get("path_length_cap", 8)),
                )
                return build_from_quiver(pres)
            except (KeyError, TypeError, ValueError) as exc:
                raise SessionError(f"bad quiver: {exc}")
        if "table" in payload:
            t = payload["table"]
            try:
                dim = len(t["basis"])
                mult = np.zeros((dim, dim, dim), dtype=np.int64)
                for key, row in t["products"].items():
                    i, j = (int(x) for x in key.split(","))
                    for k, c in row.items():
                        mult[i, j, int(k)] = int(c)
                return Algebra(
                    self.field,
                    len(t["vertices"]),
                    [str(x) for x in t["basis"]],
                    [int(x) for x in t["left"]],
                    [int(x) for x in t["right"]],
                    mult,
                )
            except (KeyError, TypeError, ValueError, AlgebraError) as exc:
                raise SessionError(f"bad table: {exc}")
        raise SessionError("session needs a 'quiver' or a 'table'")

    def _load_commands(self, raw) -> list[dict]:
        out = []
        for c in raw:
            if isinstance(c, str):
                out.append({"name": c})
            elif isinstance(c, dict) and "name" in c:
                out.append(dict(c))
            else:
                raise SessionError(f"bad command entry: {c!r}")
        if not out:
            raise SessionError("session lists no commands")
        known = {"indecomposables", "exact_structures", "verify", "smodad"}
        for c in out:
            if c["name"] not in known:
                raise SessionError(f"unknown command: {c['name']}")
        return out


class RunOutput:
    def __init__(self):
        self.lines: list[str] = []
        self.json: dict = {"commands": []}
        self.files: dict[str, str] = {}
        self.failed = False

    def emit(self, line: str = ""):
        self.lines.append(line)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _report_lines(out: RunOutput, report, indent="  "):
    for item in report.items:
        mark = "PASS" if item.ok else "FAIL"
        detail = f" ({item.detail})" if item.detail else ""
        out.emit(f"{indent}[{mark}] {item.label}{detail}")
        if not item.ok:
            out.failed = True
    for note in report.notes:
        out.emit(f"{indent}note: {note}")


def _ar_quiver_dot(ctx: AuslanderContext) -> str:
    index = ctx.index
    lines = ["digraph ar_quiver {"]
    for i, m in enumerate(index.modules):
        flags = []
        if index.is_projective[i]:
            flags.append("P")
        if index.is_injective[i]:
            flags.append("I")
        if index.is_simple[i]:
            flags.append("S")
        label = f"M{i} {list(m.dims)}" + (f" [{''.join(flags)}]" if flags else "")
        lines.append(f'  "M{i}" [label="{label}"];')
    edges: dict[tuple[int, int], int] = {}
    for i, m in enumerate(index.modules):
        if index.is_projective[i]:
            radm, _ = radical_submodule(m)
            if not radm.is_zero():
                for pid in index.parts(radm):
                    edges[(pid, i)] = edges.get((pid, i), 0) + 1
        else:
            ses = ar_sequence(m, index)
            if not ses.mid.is_zero():
                for pid in index.parts(ses.mid):
                    edges[(pid, i)] = edges.get((pid, i), 0) + 1
    for (src, tgt), mult in sorted(edges.items()):
        attr = f' [label="{mult}"]' if mult > 1 else ""
        lines.append(f'  "M{src}" -> "M{tgt}"{attr};')
    for i in range(len(index.modules)):
        if not index.is_projective[i]:
            ses = ar_sequence(index.modules[i], index)
            tid = index.identify(ses.sub)
            lines.append(f'  "M{i}" -> "M{tid}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _lattice_dot(structures: list[ExactStructure]) -> str:
    lines = ["digraph exact_structure_lattice {"]
    for i, e in enumerate(structures):
        lines.append(f'  "E{i}" [label="E{i} (dim {e.total_dim()})"];')
    leq = [[a.leq(b) and a.key() != b.key() for b in structures] for a in structures]
    for i in range(len(structures)):
        for j in range(len(structures)):
            if not leq[i][j]:
                continue
            if any(leq[i][k] and leq[k][j] for k in range(len(structures))):
                continue  # not a cover relation
            lines.append(f'  "E{i}" -> "E{j}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_indecomposables(session: Session, ctx: AuslanderContext, out: RunOutput, options: dict):
    out.emit("== indecomposables ==")
    index = ctx.index
    rows = []
    for i, m in enumerate(index.modules):
        flags = "".join(
            c
            for c, on in (
                ("P", index.is_projective[i]),
                ("I", index.is_injective[i]),
                ("S", index.is_simple[i]),
            )
            if on
        )
        out.emit(f"  M{i}: dims={list(m.dims)} total={m.total_dim} flags={flags or '-'}")
        rows.append({"id": i, "dims": list(m.dims), "flags": flags})
    out.files["ar_quiver.dot"] = _ar_quiver_dot(ctx)
    out.json["commands"].append({"name": "indecomposables", "modules": rows})


def _structures_payload(structures):
    return [{"id": i, "dim": e.total_dim(), "subspaces": e.as_payload()} for i, e in enumerate(structures)]


def cmd_exact_structures(session: Session, ctx: AuslanderContext, out: RunOutput, options: dict):
    out.emit("== exact structures ==")
    structures = ctx.structures()
    for i, e in enumerate(structures):
        out.emit(f"  E{i}: total Ext dimension {e.total_dim()}, {len(e.subspaces)} nonzero pairs")
    if options.get("oracle"):
        oracle = brute_force_structures(ctx.cat, session.multiplicity_bound)
        same = {e.key() for e in structures} == {e.key() for e in oracle}
        out.emit(f"  oracle cross-check: {'PASS' if same else 'FAIL'} ({len(oracle)} structures)")
        if not same:
            out.failed = True
    out.files["structures.dot"] = _lattice_dot(structures)
    out.json["commands"].append(
        {"name": "exact_structures", "structures": _structures_payload(structures)}
    )


def cmd_verify(session: Session, ctx: AuslanderContext, out: RunOutput, options: dict):
    out.emit("== verify ==")
    structures = ctx.structures()
    payload = {"name": "verify", "structures": len(structures), "sections": []}

    if session.given_structures is not None:
        out.emit("  [section] declared structures match the enumeration")
        given = _parse_given_structures(session, ctx)
        same = {e.key() for e in structures} == {e.key() for e in given}
        out.emit(f"    [{'PASS' if same else 'FAIL'}] {len(given)} declared vs {len(structures)} enumerated")
        payload["sections"].append({"name": "declared structures", "ok": same})
        if not same:
            out.failed = True

    sections = [
        ("exact structure axioms (bounded)", lambda e: is_exact_structure(e, session.multiplicity_bound)),
        ("Auslander exact axioms", ctx.check_auslander_axioms),
        ("Auslander formula and localization", ctx.verify_formula_and_localization),
        ("injectives and dominant dimension", ctx.verify_injective_projective_correspondence),
    ]
    for title, fn in sections:
        out.emit(f"  [section] {title}")
        ok_all = True
        for i, e in enumerate(structures):
            report = fn(e)
            status = "PASS" if report.ok else "FAIL"
            out.emit(f"    E{i}: {status}")
            if not report.ok:
                _report_lines(out, report, indent="      ")
                ok_all = False
        payload["sections"].append({"name": title, "ok": ok_all})
        if not ok_all:
            out.failed = True

    if session.generators != "all":
        out.emit("  [section] restricted description for the selected generators")
        bad = [i for i in session.generators if not (0 <= i < len(ctx.index.modules))]
        if bad:
            raise SessionError(f"unknown generator ids: {bad}")
        report = ctx.restricted_description(session.generators)
        out.emit(f"    {'PASS' if report.ok else 'FAIL'}")
        if not report.ok:
            _report_lines(out, report, indent="      ")
        payload["sections"].append({"name": "restricted description", "ok": report.ok})
        if not report.ok:
            out.failed = True

    out.emit("  [section] round trip and smallest resolving subcategory")
    rt_ok = True
    for i, e in enumerate(structures):
        quad = ctx.build_subcategories(e)
        ok = ctx.reconstruct_structure(quad.smodad) == e
        closure = ctx.resolving_closure(quad.eff.ids, "gamma", ctx.p2_ids("gamma"))
        ok = ok and closure == quad.smodad.ids
        out.emit(f"    E{i}: {'PASS' if ok else 'FAIL'}")
        rt_ok = rt_ok and ok
    payload["sections"].append({"name": "round trip and smallest resolving", "ok": rt_ok})
    if not rt_ok:
        out.failed = True

    out.emit("  [section] Auslander-Bridger sequence and grade dichotomy")
    ab_ok = all(ctx.auslander_bridger_check(m) for m in ctx.gamma_index.modules)
    dich_ok = True
    for e in structures:
        quad = ctx.build_subcategories(e)
        for i in sorted(quad.smodad.ids):
            if ctx.grade(ctx.gamma_module(i), "gamma") == 1:
                dich_ok = False
        for i in ctx.tr_subcategory(quad.smodad).sorted_ids():
            if ctx.grade(ctx.gop_index.modules[i], "gamma_op") == 1:
                dich_ok = False
    out.emit(f"    AB sequence pointwise: {'PASS' if ab_ok else 'FAIL'}")
    out.emit(f"    grade dichotomy: {'PASS' if dich_ok else 'FAIL'}")
    payload["sections"].append({"name": "AB sequence", "ok": ab_ok})
    payload["sections"].append({"name": "grade dichotomy", "ok": dich_ok})
    if not (ab_ok and dich_ok):
        out.failed = True
    out.json["commands"].append(payload)


def _parse_given_structures(session: Session, ctx: AuslanderContext) -> list[ExactStructure]:
    out = []
    for entry in session.given_structures:
        subs = {}
        for z, a, rows in entry.get("subspaces", entry if isinstance(entry, list) else []):
            expected = ctx.cat.ext_dim(int(z), int(a))
            mat = np.array(rows, dtype=np.int64).reshape(-1, expected)
            subs[(int(z), int(a))] = Matrix(session.field, mat)
        out.append(ExactStructure(ctx.cat, subs, "reconstructed"))
    return out


def cmd_smodad(session: Session, ctx: AuslanderContext, out: RunOutput, options: dict):
    structures = ctx.structures()
    sid = options.get("structure")
    if sid is None or not isinstance(sid, int) or not (0 <= sid < len(structures)):
        raise SessionError(f"smodad: unknown structure id {sid!r}")
    e = structures[sid]
    quad = ctx.build_subcategories(e)
    out.emit(f"== smodad of E{sid} ==")
    out.emit(f"  smodad ids: {quad.smodad.sorted_ids()}")
    out.emit(f"  eff ids: {quad.eff.sorted_ids()}")
    out.emit(f"  cogenQ ids: {quad.cogen_q.sorted_ids()}")
    table = []
    for i in quad.smodad.sorted_ids():
        m = ctx.gamma_module(i)
        g = ctx.grade(m, "gamma")
        pd = proj_dim(m, session.resolution_cutoff)
        out.emit(
            f"  F{i}: dims={list(m.dims)} grade={g if g is not None else f'>={ctx.cutoff}'} pd={pd}"
        )
        table.append({"id": i, "dims": list(m.dims), "grade": g, "pd": pd})
    out.json["commands"].append(
        {
            "name": "smodad",
            "structure": sid,
            "smodad": quad.smodad.sorted_ids(),
            "eff": quad.eff.sorted_ids(),
            "cogenQ": quad.cogen_q.sorted_ids(),
            "table": table,
        }
    )


COMMANDS = {
    "indecomposables": cmd_indecomposables,
    "exact_structures": cmd_exact_structures,
    "verify": cmd_verify,
    "smodad": cmd_smodad,
}


def run_session(payload: dict, out_dir: Path | None) -> tuple[int, RunOutput]:
    out = RunOutput()
    try:
        session = Session(payload)
    except SessionError as exc:
        out.emit(f"input error: {exc}")
        return EXIT_INPUT, out
    try:
        ctx = AuslanderContext(
            session.algebra,
            dim_cap=session.dim_cap,
            cutoff=session.resolution_cutoff,
            seed=session.seed,
        )
        for command in session.commands:
            COMMANDS[command["name"]](session, ctx, out, command)
    except SessionError as exc:
        out.emit(f"input error: {exc}")
        return EXIT_INPUT, out
    except (CapExceeded, GuardExceeded) as exc:
        out.emit(f"cap exceeded: {exc}")
        return EXIT_CAP, out
    except (AlgebraError, RepmodError, AuslanderError) as exc:
        out.emit(f"verification error: {exc}")
        return EXIT_VERIFY, out
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.txt").write_text(out.text(), encoding="utf-8")
        (out_dir / "report.json").write_text(
            json.dumps(out.json, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )
        for name, content in sorted(out.files.items()):
            (out_dir / name).write_text(content, encoding="utf-8")
    return (EXIT_VERIFY if out.failed else EXIT_OK), out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="exactcat",
        description="Verify exact-structure and functor-category theorems over a quiver algebra session.",
    )
    parser.add_argument("session", help="path to the JSON session file")
    parser.add_argument("--out", help="directory for report and DOT output", default=None)
    args = parser.parse_args(argv)
    try:
        payload = json.loads(Path(args.session).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, out = run_session(payload, Path(args.out) if args.out else None)
    sys.stdout.write(out.text())
    return code


if __name__ == "__main__":
    sys.exit(main())
