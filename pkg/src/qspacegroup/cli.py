"""Command-line front end.

Exit codes: 0 success, 1 domain error (unknown group, bad file, unsupported
case), 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from . import factorsys
from .clifford import (NoConstruction, SymmetryCase, build_standard_rep, check_algebra,
                       clifford_type, degeneracy_check, irrep_dim, signature, winding_detail)
from .groupcore import (WALLPAPER_NAMES, GroupDataError, SpaceGroupElement, dump_group, get_group,
                        load_group_file, validate as validate_group)
from .homology import (AbelianGroup, ComplexError, EquivariantComplex, borel_total_complex, build_resolution,
                       cohomology_from_uct, dump_complex, homology, load_complex_file, shipped_complex,
                       validate_equivariant_complex)
from .snf import elementary_divisors

SCHEMA = "qspacegroup/1"

# Reference values for H^2(G, Z2) and H^2(G, U(1)), in WALLPAPER_NAMES order.
REFERENCE_Z2 = dict(zip(WALLPAPER_NAMES, (1, 4, 4, 1, 2, 8, 4, 2, 5, 3, 6, 3, 1, 2, 2, 2, 2)))
REFERENCE_U1 = dict(zip(WALLPAPER_NAMES, (
    "U(1)", "U(1)", "Z2^2", "0", "Z2", "Z2^4", "Z2", "0", "Z2^2",
    "U(1)", "Z2^3", "Z2", "U(1)", "Z2", "Z2", "U(1)", "Z2^2")))


class DomainError(Exception):
    pass


@dataclass
class RunRecord:
    tool: str
    version: str
    subcommand: str
    input_digest: str
    payload: dict
    duration_s: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))


def _digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "record")}
    h.update(json.dumps(config, sort_keys=True, default=str).encode())
    for key in ("group_file", "complex", "file"):
        path = getattr(args, key, None)
        if path and Path(path).is_file():
            h.update(Path(path).read_bytes())
    return h.hexdigest()


# -- helpers ---------------------------------------------------------------------

def _resolve_group(args):
    if getattr(args, "group_file", None):
        return load_group_file(args.group_file)
    if not getattr(args, "group", None):
        raise DomainError("give --group NAME or --group-file PATH")
    return get_group(args.group)


def _resolve_complex(args, group) -> EquivariantComplex:
    if getattr(args, "complex", None):
        ec = load_complex_file(args.complex, group)
    else:
        ec = shipped_complex(group)
    problems = validate_equivariant_complex(ec)
    if problems:
        raise DomainError("invalid equivariant complex: " + "; ".join(problems))
    return ec


def _parse_element(text: str, group) -> SpaceGroupElement:
    try:
        t_part, r = text.split("|")
        t = tuple(int(x) for x in t_part.split(",")) if t_part.strip() else ()
    except ValueError:
        raise DomainError(f"cannot parse element {text!r}; expected 't1,t2|R'") from None
    if r not in group.labels:
        raise DomainError(f"unknown point-group label {r!r}; known: {', '.join(group.labels)}")
    if len(t) != group.dimension:
        raise DomainError(f"element {text!r} needs {group.dimension} translation components")
    return SpaceGroupElement(t, r)


def _matrix_text(rows) -> str:
    if not rows or not rows[0]:
        return "  (empty)"
    width = max(len(str(x)) for r in rows for x in r)
    return "\n".join("  [" + " ".join(str(x).rjust(width) for x in r) + "]" for r in rows)


def _smith_diagonal(m) -> list[int]:
    divs = elementary_divisors(m)
    return divs + [0] * (min(m.rows, m.cols) - len(divs))


# -- subcommands -----------------------------------------------------------------

def cmd_list_groups(args) -> dict:
    groups = []
    for name in WALLPAPER_NAMES:
        g = get_group(name)
        groups.append({"name": name, "order": g.order, "symmorphic": g.is_symmorphic_data,
                       "generators": list(g.generators)})
    return {"groups": groups}


def cmd_classify(args) -> dict:
    group = _resolve_group(args)
    if args.coeff == "u1":
        ec = _resolve_complex(args, group)
        tc = _total_complex(group, ec, 3)
        cg = cohomology_from_uct(homology(tc, 2), homology(tc, 1), "u1")
        return {"group": group.name, "coeff": "u1", "value": str(cg), "route": "homology",
                "u1_rank": cg.u1_rank, "torsion": list(cg.torsion)}
    res = factorsys.classify(group, representatives=args.representatives)
    out = res.to_payload(with_representatives=args.representatives)
    out["value"] = "0" if res.h2_dimension == 0 else ("Z2" if res.h2_dimension == 1 else f"Z2^{res.h2_dimension}")
    return out


def _total_complex(group, ec, top):
    res = build_resolution(group, top)
    tc = borel_total_complex(res, ec, top)
    bad = tc.validate()
    if bad:
        raise AssertionError("total complex: " + "; ".join(bad))
    return tc


def export_matrices(group, max_degree: int, ec: EquivariantComplex | None = None) -> dict:
    ec = ec or shipped_complex(group)
    tc = _total_complex(group, ec, max(1, max_degree))
    out = {"ranks": tc.ranks, "basis": {str(k): v for k, v in (tc.basis or {}).items()}, "boundaries": {}}
    for n in range(1, max_degree + 1):
        m = tc.boundary(n)
        out["boundaries"][str(n)] = {"matrix": m.tolist(), "smith_diagonal": _smith_diagonal(m)}
    return out


def cmd_homology(args) -> dict:
    group = _resolve_group(args)
    ec = _resolve_complex(args, group)
    top = args.max_degree
    tc = _total_complex(group, ec, top + 1)
    hs = [homology(tc, n) for n in range(top + 1)]
    out = {"group": group.name, "complex": ec.source or "file", "ranks": tc.ranks[:top + 1],
           "homology": {str(n): h.to_payload() for n, h in enumerate(hs)}}
    if args.coeff:
        out["cohomology"] = {str(n): cohomology_from_uct(hs[n], hs[n - 1] if n else AbelianGroup(), args.coeff)
                             .to_payload() for n in range(top + 1)}
    if args.show_matrices:
        out["matrices"] = export_matrices(group, top, ec)
    return out


def cmd_factor_systems(args) -> dict:
    group = _resolve_group(args)
    res = factorsys.classify(group, representatives=True)
    pairs = [(_parse_element(a, group), _parse_element(b, group)) for a, b in (args.pair or [])]
    reps = []
    for k, fs in enumerate(res.representatives):
        entry = {"index": k, **fs.to_payload()}
        if pairs:
            entry["values"] = [{"g1": _fmt_elem(a), "g2": _fmt_elem(b), "nu": factorsys.evaluate(fs, a, b)}
                               for a, b in pairs]
        reps.append(entry)
    return {"group": group.name, "dimension": res.h2_dimension, "representatives": reps,
            "unknowns": factorsys.layout_for(group).names()}


def _fmt_elem(g: SpaceGroupElement) -> str:
    return ",".join(str(x) for x in g.t) + "|" + g.r


def cmd_bands(args) -> dict:
    try:
        case = SymmetryCase(args.st, args.sp, args.qx, args.qy)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    sig = signature(case)
    out = {"case": case.to_payload(), "signature": [sig.n, sig.m], "clifford_type": clifford_type(sig),
           "irrep_dim": irrep_dim(sig)}
    if args.winding or args.degeneracy or args.algebra:
        try:
            rep = build_standard_rep(case)
        except NoConstruction as exc:
            raise DomainError(str(exc)) from None
        out["representation"] = {"name": rep.name, "dimension": rep.dimension}
        if args.algebra:
            report = check_algebra(rep)
            out["algebra"] = {r.name: {"passed": r.passed, "residual": r.residual} for r in report.relations}
        if args.winding:
            try:
                w = {d: winding_detail(rep, d, args.grid) for d in ("x", "y")}
            except ValueError as exc:
                raise DomainError(str(exc)) from None
            out["winding"] = {d: r.value for d, r in w.items()}
            out["winding_raw"] = {d: round(r.raw, 9) for d, r in w.items()}
        if args.degeneracy:
            out["degeneracy"] = degeneracy_check(case, args.samples, args.seed).to_payload()
    return out


def cmd_validate(args) -> dict:
    path = Path(args.file)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise DomainError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    kind = args.kind or ("complex" if isinstance(doc, dict) and "degrees" in doc else "group")
    if kind == "group":
        problems = validate_group(load_group_file(path))
    else:
        group = load_group_file(args.group_file) if args.group_file else None
        problems = validate_equivariant_complex(load_complex_file(path, group))
    return {"file": path.name, "kind": kind, "valid": not problems, "problems": problems}


def cmd_table1(args) -> dict:
    rows = []
    for name in WALLPAPER_NAMES:
        group = get_group(name)
        row = {"group": name}
        if args.coeff in ("z2", "both"):
            dim = factorsys.classify(group, representatives=False).h2_dimension
            row["z2"] = {"dimension": dim, "expected": REFERENCE_Z2[name], "match": dim == REFERENCE_Z2[name]}
        if args.coeff in ("u1", "both"):
            try:
                ec = shipped_complex(group)
            except ComplexError:
                row["u1"] = {"value": "no complex data", "expected": REFERENCE_U1[name], "match": None}
            else:
                tc = _total_complex(group, ec, 3)
                cg = cohomology_from_uct(homology(tc, 2), homology(tc, 1), "u1")
                row["u1"] = {"value": str(cg), "expected": REFERENCE_U1[name], "match": str(cg) == REFERENCE_U1[name]}
        rows.append(row)
    summary = {}
    for key in ("z2", "u1"):
        checked = [r[key]["match"] for r in rows if key in r and r[key]["match"] is not None]
        if key in rows[0]:
            summary[key] = {"matches": sum(checked), "checked": len(checked), "total": len(rows)}
    return {"rows": rows, "summary": summary}


def cmd_export(args) -> dict:
    group = _resolve_group(args)
    if args.what == "group":
        text = dump_group(group)
    elif args.what == "complex":
        if args.complex:
            ec = load_complex_file(args.complex, group)
        elif args.generate:
            from .torus import torus_complex
            ec = torus_complex(group)
        else:
            ec = shipped_complex(group)
        text = dump_complex(ec)
    else:
        ec = _resolve_complex(args, group)
        text = json.dumps(export_matrices(group, args.max_degree, ec), indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        return {"written": args.out, "what": args.what, "group": group.name}
    return {"text": text, "what": args.what, "group": group.name}


# -- human formatting ----------------------------------------------------------------

def _human(sub: str, p: dict) -> str:
    if sub == "list-groups":
        return "\n".join(f"{g['name']:5s} order {g['order']:2d}  {'symmorphic' if g['symmorphic'] else 'nonsymmorphic'}"
                         for g in p["groups"])
    if sub == "classify":
        lines = [f"H^2({p['group']}, {'Z2' if p['coeff'] == 'z2' else 'U(1)'}) = {p['value']}"]
        for k, rep in enumerate(p.get("representatives", [])):
            lines.append(f"  class {k}: sigma={rep['sigma_bits']} alpha={rep['alpha_bits']} "
                         + " ".join(f"g[{r}]={v['b']}/{v['q']}" for r, v in rep["g"].items()))
        return "\n".join(lines)
    if sub == "homology":
        lines = [f"{p['group']}: total complex ranks {p['ranks']}"]
        for n, h in p["homology"].items():
            line = f"  H_{n} = {h['text']}"
            if "cohomology" in p:
                c = p["cohomology"][n]
                line += f"    H^{n}(-, {'Z2' if c['coeff'] == 'z2' else 'U(1)'}) = {c['text']}"
            lines.append(line)
        if "matrices" in p:
            lines.append(_matrices_text(p["matrices"]))
        return "\n".join(lines)
    if sub == "factor-systems":
        lines = [f"{p['group']}: {len(p['representatives'])} classes (dimension {p['dimension']})"]
        for rep in p["representatives"]:
            lines.append(f"  class {rep['index']}: sigma={rep['sigma_bits']} alpha={rep['alpha_bits']}")
            for v in rep.get("values", []):
                lines.append(f"    nu({v['g1']}, {v['g2']}) = {v['nu']:+d}")
        return "\n".join(lines)
    if sub == "bands":
        lines = [f"case {p['case']}", f"  C^{{n,m}} = ({p['signature'][0]},{p['signature'][1]})  "
                 f"{p['clifford_type']}  D = {p['irrep_dim']}"]
        if "algebra" in p:
            bad = [k for k, v in p["algebra"].items() if not v["passed"]]
            lines.append("  algebra: all relations hold" if not bad else f"  algebra failures: {bad}")
        if "winding" in p:
            lines.append(f"  winding: x={p['winding']['x']} y={p['winding']['y']}")
        if "degeneracy" in p:
            lines.append(f"  minimal multiplicity: {p['degeneracy']['min_multiplicity']}")
        return "\n".join(lines)
    if sub == "validate":
        if p["valid"]:
            return f"{p['file']}: valid {p['kind']}"
        return "\n".join([f"{p['file']}: {len(p['problems'])} problem(s)"] + [f"  - {x}" for x in p["problems"]])
    if sub == "table1":
        lines = []
        for r in p["rows"]:
            parts = [f"{r['group']:5s}"]
            for key, label in (("z2", "Z2"), ("u1", "U(1)")):
                if key in r:
                    v = r[key]
                    got = v.get("dimension", v.get("value"))
                    got = got if key == "u1" else ("Z2^%d" % got if got != 1 else "Z2")
                    exp = v["expected"] if key == "u1" else ("Z2^%d" % v["expected"] if v["expected"] != 1 else "Z2")
                    mark = "n/a" if v["match"] is None else ("ok" if v["match"] else "MISMATCH")
                    parts.append(f"{label}: {got:16s} expected {exp:6s} {mark:8s}")
            lines.append("  ".join(parts))
        for key, s in p["summary"].items():
            lines.append(f"{key}: {s['matches']}/{s['checked']} matches ({s['total']} groups)")
        return "\n".join(lines)
    if sub == "export":
        return p["text"].rstrip("\n") if "text" in p else f"wrote {p['written']}"
    return json.dumps(p, indent=2)


def _matrices_text(m: dict) -> str:
    lines = [f"basis ordering: resolution degree descending, then cells in file order"]
    for n, b in m["boundaries"].items():
        rows = b["matrix"]
        lines.append(f"d_{n} ({len(rows)}x{len(rows[0]) if rows else 0}):")
        lines.append(_matrix_text(rows))
        lines.append(f"Sm(d_{n}) = diag({', '.join(str(x) for x in b['smith_diagonal'])})")
    return "\n".join(lines)


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qspacegroup", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qspacegroup {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, group=True):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--record", metavar="FILE", help="write a run record (payload, digest, timing)")
        if group:
            p.add_argument("--group", help="shipped group name (p1 ... p6m)")
            p.add_argument("--group-file", help="group definition file instead of a shipped name")

    p = sub.add_parser("list-groups", help="list the shipped wallpaper groups")
    common(p, group=False)
    p.set_defaults(func=cmd_list_groups)

    p = sub.add_parser("classify", help="second cohomology H^2(G, A)")
    common(p)
    p.add_argument("--coeff", choices=("z2", "u1"), default="z2")
    p.add_argument("--representatives", action="store_true", help="list one factor system per class")
    p.add_argument("--complex", help="equivariant complex file (u1 route)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("homology", help="integer homology through the Borel total complex")
    common(p)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--coeff", choices=("z2", "u1"))
    p.add_argument("--show-matrices", action="store_true")
    p.add_argument("--complex", help="equivariant complex file")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("factor-systems", help="representative factor systems and their values")
    common(p)
    p.add_argument("--pair", nargs=2, action="append", metavar=("G1", "G2"),
                   help="evaluate nu(G1, G2); elements written 't1,t2|R'")
    p.set_defaults(func=cmd_factor_systems)

    p = sub.add_parser("bands", help="Clifford signature, degeneracy and winding for a symmetry case")
    common(p, group=False)
    p.add_argument("--st", type=int, required=True)
    p.add_argument("--sp", type=int, required=True)
    p.add_argument("--qx", type=int, required=True)
    p.add_argument("--qy", type=int, required=True)
    p.add_argument("--winding", action="store_true")
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--degeneracy", action="store_true")
    p.add_argument("--algebra", action="store_true")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("validate", help="check a group or complex file")
    common(p, group=False)
    p.add_argument("file")
    p.add_argument("--kind", choices=("group", "complex"))
    p.add_argument("--group-file", help="group definition the complex refers to")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("table1", help="reproduce the classification table for all 17 groups")
    common(p, group=False)
    p.add_argument("--coeff", choices=("z2", "u1", "both"), default="both")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("export", help="write group data, complexes or boundary matrices")
    common(p)
    p.add_argument("--what", choices=("group", "complex", "matrices"), default="group")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--complex", help="equivariant complex file")
    p.add_argument("--generate", action="store_true", help="generate a grid complex when none ships")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_export)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    start = time.perf_counter()
    try:
        payload = {"schema": SCHEMA, **args.func(args)}
    except (DomainError, GroupDataError, ComplexError, NoConstruction, FileNotFoundError) as exc:
        msg = str(exc)
        if isinstance(exc, GroupDataError) and "unknown group" not in msg and getattr(args, "group", None) \
                and args.group not in WALLPAPER_NAMES:
            msg += f"; known: {', '.join(WALLPAPER_NAMES)}"
        print(f"error: {msg}", file=err)
        return 1
    except Exception as exc:  # invariant violations and bugs
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return 2
    duration = time.perf_counter() - start
    if args.json:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write(_human(args.subcommand, payload) + "\n")
    if args.record:
        rec = RunRecord("qspacegroup", __version__, args.subcommand, _digest(args), payload, round(duration, 6))
        Path(args.record).write_text(rec.to_json())
    return 0


def main(argv=None) -> int:
    return run(argv)
