"""Command-line front end.

Inputs are JSON documents:

    group    {"free_rank": r, "torsion": [d1, ...]}
             or {"generators": n, "relations": [[column], ...]}
    complex  {"terms": {"-1": group, "0": group}, "differentials": {"-1": [[row], ...]}}
    matrix   [[row], ...] or {"matrix": [[row], ...]}
    psi      {"R": complex, "Q": complex, "P": complex,
              "DR": {"n": matrix}, "DQ": {"n": matrix}, "h": {"n": matrix}}

A group wherever a complex is expected means that group in degree 0.
"""

from __future__ import annotations

import argparse
import itertools
import json
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .abelian import FgAbGroup, InvariantViolation, Unsupported, as_int_matrix, cyclic, smith_normal_form
from .barres import PsiInput, biext_via_bar, psi_groups, psi_low_formula
from .biext import DEFAULT_MAX_CANDIDATES, biext_group, brute_force_biext1
from .complexes import BoundedComplex, ChainMap, cohomology
from .derived import derived_tensor, ext_group
from .extensions import ext_classes
from .picard import PicardPresentation
from .samples import random_finite_two_term, random_psi_input

METHODS = ("cocycle", "bar", "derived", "formula")
COMMAND_METHODS = {
    "ext": ("derived", "cocycle"),
    "biext": ("cocycle", "bar", "derived"),
    "psi": ("derived", "formula"),
}

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3


class SchemaError(ValueError):
    """A JSON document does not match the expected shape; the message names the field."""


# ---------------------------------------------------------------------------
# parsing


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{where}: expected an integer, got {x!r}")
    return x


def _int_list(x: Any, where: str) -> list[int]:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected a list")
    return [_int(v, f"{where}[{i}]") for i, v in enumerate(x)]


def parse_matrix(doc: Any, rows: int | None = None, cols: int | None = None, where: str = "matrix") -> np.ndarray:
    if isinstance(doc, dict):
        if "matrix" not in doc:
            raise SchemaError(f"{where}: missing field 'matrix'")
        doc, where = doc["matrix"], f"{where}.matrix"
    if not isinstance(doc, list):
        raise SchemaError(f"{where}: expected a list of rows")
    data = [_int_list(r, f"{where}[{i}]") for i, r in enumerate(doc)]
    widths = {len(r) for r in data}
    if len(widths) > 1:
        raise SchemaError(f"{where}: rows have different lengths")
    n_cols = widths.pop() if widths else (cols or 0)
    if rows is not None and len(data) != rows:
        if not (len(data) == 0 and (rows == 0 or cols == 0)):
            raise SchemaError(f"{where}: expected {rows} rows, got {len(data)}")
    if cols is not None and data and n_cols != cols:
        raise SchemaError(f"{where}: expected {cols} columns, got {n_cols}")
    return as_int_matrix(data, rows if rows is not None else len(data), cols if cols is not None else n_cols)


def parse_group(doc: Any, where: str = "group") -> FgAbGroup:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    if "free_rank" in doc or "torsion" in doc:
        extra = set(doc) - {"free_rank", "torsion"}
        if extra:
            raise SchemaError(f"{where}: unexpected fields {sorted(extra)}")
        r = _int(doc.get("free_rank", 0), f"{where}.free_rank")
        t = _int_list(doc.get("torsion", []), f"{where}.torsion")
        if r < 0 or any(d < 2 for d in t):
            raise SchemaError(f"{where}: free_rank must be ≥ 0 and torsion entries ≥ 2")
        return FgAbGroup.from_invariants(r, t)
    if "generators" in doc:
        extra = set(doc) - {"generators", "relations"}
        if extra:
            raise SchemaError(f"{where}: unexpected fields {sorted(extra)}")
        n = _int(doc["generators"], f"{where}.generators")
        cols = doc.get("relations", [])
        if not isinstance(cols, list):
            raise SchemaError(f"{where}.relations: expected a list of columns")
        for i, c in enumerate(cols):
            if len(_int_list(c, f"{where}.relations[{i}]")) != n:
                raise SchemaError(f"{where}.relations[{i}]: expected {n} entries")
        rel = as_int_matrix([list(c) for c in cols], len(cols), n).T.copy() if cols else as_int_matrix([], n, 0)
        return FgAbGroup(n, rel)
    raise SchemaError(f"{where}: needs 'free_rank'/'torsion' or 'generators'/'relations'")


def parse_complex(doc: Any, where: str = "complex") -> BoundedComplex:
    if isinstance(doc, dict) and "terms" not in doc:
        return BoundedComplex.concentrated(parse_group(doc, where), 0)
    if not isinstance(doc, dict) or not isinstance(doc["terms"], dict):
        raise SchemaError(f"{where}.terms: expected an object keyed by degree")
    terms = {}
    for key, g in doc["terms"].items():
        terms[_degree_key(key, f"{where}.terms")] = parse_group(g, f"{where}.terms[{key}]")
    diffs = {}
    raw = doc.get("differentials", {})
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}.differentials: expected an object keyed by degree")
    for key, m in raw.items():
        n = _degree_key(key, f"{where}.differentials")
        src, tgt = terms.get(n), terms.get(n + 1)
        rows = tgt.num_generators if tgt else 0
        cols = src.num_generators if src else 0
        diffs[n] = parse_matrix(m, rows, cols, f"{where}.differentials[{key}]")
    try:
        return BoundedComplex(terms, diffs)
    except (InvariantViolation, ValueError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _degree_key(key: str, where: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise SchemaError(f"{where}: degree key {key!r} is not an integer") from None


def parse_chain_map(doc: Any, source: BoundedComplex, target: BoundedComplex, where: str) -> ChainMap:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object keyed by degree")
    comps = {}
    for key, m in doc.items():
        n = _degree_key(key, where)
        comps[n] = parse_matrix(m, target.term(n).num_generators, source.term(n).num_generators, f"{where}[{key}]")
    try:
        return ChainMap(source, target, comps)
    except (InvariantViolation, ValueError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def parse_psi(doc: Any, where: str = "psi") -> PsiInput:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    for k in ("R", "Q", "P", "DR", "DQ"):
        if k not in doc:
            raise SchemaError(f"{where}: missing field {k!r}")
    r, q, p = (parse_complex(doc[k], f"{where}.{k}") for k in ("R", "Q", "P"))
    dr = parse_chain_map(doc["DR"], r, q, f"{where}.DR")
    dq = parse_chain_map(doc["DQ"], q, p, f"{where}.DQ")
    h = {}
    for key, m in doc.get("h", {}).items():
        n = _degree_key(key, f"{where}.h")
        h[n] = parse_matrix(m, p.term(n - 1).num_generators, r.term(n).num_generators, f"{where}.h[{key}]")
    try:
        return PsiInput(r, q, p, dr, dq, h)
    except InvariantViolation as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from None


def parse_inputs(paths: dict[str, str | None]) -> dict[str, BoundedComplex]:
    """Load complexes from the given files; field names in errors carry the path."""
    out = {}
    for name, path in paths.items():
        if path is not None:
            out[name] = parse_complex(load_json(path), str(path))
    return out


# ---------------------------------------------------------------------------
# serialization


def group_to_json(g: FgAbGroup) -> dict:
    """Invariant form when it reproduces the presentation, generators/relations otherwise."""
    free_rank, tors = g.canonical_form()
    canon = FgAbGroup.from_invariants(free_rank, tors)
    if canon.num_generators == g.num_generators and np.array_equal(canon.relations, g.relations):
        return {"free_rank": free_rank, "torsion": list(tors)}
    return {"generators": g.num_generators, "relations": [[int(x) for x in c] for c in g.relations.T]}


def canonical_group_json(g: FgAbGroup) -> dict:
    free_rank, tors = g.canonical_form()
    return {"free_rank": free_rank, "torsion": list(tors)}


def complex_to_json(k: BoundedComplex) -> dict:
    return {
        "terms": {str(n): group_to_json(k.term(n)) for n in k.degrees},
        "differentials": {
            str(n): [[int(x) for x in row] for row in k.d(n).matrix]
            for n in k.degrees
            if k.term(n + 1).num_generators
        },
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# reports


@dataclass
class CaseRow:
    key: str
    inputs: dict[str, str]
    results: dict[str, str]
    agree: bool
    refused: dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class VerificationReport:
    name: str
    rows: list[CaseRow]

    @property
    def summary(self) -> dict[str, int]:
        return {
            "cases": len(self.rows),
            "agree": sum(r.agree for r in self.rows),
            "disagree": sum(not r.agree for r in self.rows),
            "with_refusals": sum(bool(r.refused) for r in self.rows),
        }

    @property
    def ok(self) -> bool:
        return all(r.agree for r in self.rows)

    def to_json(self, timings: bool = False) -> dict:
        rows = []
        for r in sorted(self.rows, key=lambda r: r.key):
            row = {"key": r.key, "inputs": r.inputs, "results": r.results, "agree": r.agree, "refused": r.refused}
            if timings:
                row["seconds"] = round(r.seconds, 3)
            rows.append(row)
        return {"report": self.name, "rows": rows, "summary": self.summary}

    @classmethod
    def from_json(cls, doc: dict) -> "VerificationReport":
        rows = [CaseRow(r["key"], r["inputs"], r["results"], r["agree"], r.get("refused", {}), r.get("seconds", 0.0))
                for r in doc["rows"]]
        rep = cls(doc["report"], rows)
        if rep.summary != doc["summary"]:
            raise SchemaError("report.summary: counts do not match the rows")
        return rep

    def to_markdown(self, timings: bool = False) -> str:
        routes = sorted({k for r in self.rows for k in r.results} | {k for r in self.rows for k in r.refused})
        head = ["case"] + routes + ["agree"] + (["seconds"] if timings else [])
        lines = [f"# {self.name}", "", "| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        for r in sorted(self.rows, key=lambda r: r.key):
            cells = [r.key]
            for route in routes:
                cells.append(r.results.get(route) or (f"refused: {r.refused[route]}" if route in r.refused else ""))
            cells.append("yes" if r.agree else "NO")
            if timings:
                cells.append(f"{r.seconds:.3f}")
            lines.append("| " + " | ".join(c.replace("|", "\\|") for c in cells) + " |")
        s = self.summary
        lines += ["", f"cases: {s['cases']}, agree: {s['agree']}, disagree: {s['disagree']}, "
                      f"with refusals: {s['with_refusals']}", ""]
        return "\n".join(lines)


def _cells(line: str) -> list[str]:
    return [c.strip().replace("\\|", "|") for c in re.split(r"(?<!\\)\|", line.strip())[1:-1]]


def markdown_counts(text: str) -> dict[str, int]:
    """Tally a markdown report's table rows, for cross-checking against its JSON form."""
    lines = [ln for ln in text.splitlines() if ln.startswith("|")]
    if not lines:
        return {"cases": 0, "agree": 0, "disagree": 0}
    col = _cells(lines[0]).index("agree")
    flags = [_cells(ln)[col] for ln in lines[2:]]
    agree = flags.count("yes")
    return {"cases": len(flags), "agree": agree, "disagree": len(flags) - agree}


# ---------------------------------------------------------------------------
# computations


def _finite_plain(k: BoundedComplex) -> FgAbGroup | None:
    if all(n == 0 for n in k.degrees):
        return k.term(0)
    return None


def biext_by_method(p: BoundedComplex, q: BoundedComplex, g: BoundedComplex, i: int, method: str) -> FgAbGroup:
    if method == "cocycle":
        groups = [_finite_plain(x) for x in (p, q, g)]
        if any(x is None for x in groups):
            raise Unsupported("the cocycle route needs plain groups (complexes concentrated in degree 0)")
        return biext_group(*groups, i)
    if method == "bar":
        return biext_via_bar(p, q, g, i)
    if method == "derived":
        return ext_group(derived_tensor(p, q), g, i)
    raise ValueError(f"method {method!r} does not apply to biext")


def ext_by_method(k: BoundedComplex, g: BoundedComplex, i: int, method: str) -> FgAbGroup:
    if method == "derived":
        return ext_group(k, g, i)
    if method == "cocycle":
        kp, gp = _finite_plain(k), _finite_plain(g)
        if kp is None or gp is None or i != 1:
            raise Unsupported("the cocycle route computes Ext^1 of plain groups only")
        return ext_classes(kp, gp)
    raise ValueError(f"method {method!r} does not apply to ext")


def psi_by_method(l: PsiInput, g: BoundedComplex, i: int, method: str) -> FgAbGroup:
    if method == "derived":
        return psi_groups(l, g, i)
    if method == "formula":
        if i not in (0, -1):
            raise Unsupported("the low-degree formula covers degrees 0 and −1 only")
        h0, hm1 = psi_low_formula(l, g)
        return h0 if i == 0 else hm1
    raise ValueError(f"method {method!r} does not apply to psi")


# ---------------------------------------------------------------------------
# verification grids


def _two_term_family(orders: Sequence[int]) -> list[tuple[str, BoundedComplex]]:
    out = []
    for a in orders:
        ga = cyclic(a)
        out.append((f"[0→Z/{a}]", BoundedComplex.concentrated(ga, 0)))
        out.append((f"[Z/{a}→0]", BoundedComplex.concentrated(ga, -1)))
        out.append((f"[Z/{a}→0→Z/{a}]", PicardPresentation.of(ga, ga).complex))
        p = min(d for d in range(2, a + 1) if a % d == 0)
        if p != a:
            out.append((f"[Z/{a}→Z/{p}]", PicardPresentation.of(ga, cyclic(p), [[1]]).complex))
    return out


def _thm01_case(args: tuple) -> CaseRow:
    key, names, p, q, g, i, plain, max_candidates = args
    t = time.perf_counter()
    found: dict[str, FgAbGroup] = {}
    results, refused = {}, {}
    routes = {"bar": lambda: biext_via_bar(p, q, g, i), "derived": lambda: ext_group(derived_tensor(p, q), g, i)}
    if plain:
        routes["cocycle"] = lambda: biext_group(p.term(0), q.term(0), g.term(0), i)
    for name, fn in routes.items():
        try:
            found[name] = fn()
            results[name] = str(found[name])
        except Unsupported as exc:
            refused[name] = str(exc)
    agree = len({x.canonical_form() for x in found.values()}) <= 1
    if plain and i == 1:
        try:
            n = brute_force_biext1(p.term(0), q.term(0), g.term(0), max_candidates=max_candidates)
            results["raw_order"] = str(n)
            agree = agree and all(x.order() == n for x in found.values())
        except Unsupported as exc:
            refused["raw_order"] = str(exc)
    inputs = {"P": names[0], "Q": names[1], "G": names[2], "i": str(i)}
    return CaseRow(key, inputs, results, agree, refused, time.perf_counter() - t)


def verify_thm01(orders: Sequence[int], plain: bool, max_candidates: int, jobs: int = 1) -> VerificationReport:
    """Compare the biextension routes over a grid built from cyclic groups of the given orders."""
    if plain:
        family = [(f"Z/{a}", BoundedComplex.concentrated(cyclic(a), 0)) for a in orders]
        coeffs = family
    else:
        family = _two_term_family(orders)
        coeffs = [(n, k) for n, k in family if k.term(0).num_generators]
    cases = []
    width = len(str(len(family) * len(family) * len(coeffs) * 3))
    idx = 0
    for (pn, p), (qn, q), (gn, g) in itertools.product(family, family, coeffs):
        for i in (-1, 0, 1):
            key = f"{idx:0{width}d} P={pn} Q={qn} G={gn} i={i}"
            cases.append((key, (pn, qn, gn), p, q, g, i, plain, max_candidates))
            idx += 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_thm01_case, cases))
    else:
        rows = [_thm01_case(c) for c in cases]
    return VerificationReport("thm01 " + ("plain" if plain else "two-term"), rows)


def verify_psi(cases: int, seed: int) -> VerificationReport:
    """Low-degree formula against Ext of the total complex on random inputs."""
    rng = np.random.default_rng(seed)
    rows = []
    for c in range(cases):
        t = time.perf_counter()
        l = random_psi_input(rng)
        g = random_finite_two_term(rng, max_terms=2)
        h0, hm1 = psi_low_formula(l, g)
        d0, dm1 = psi_groups(l, g, 0), psi_groups(l, g, -1)
        results = {"formula_0": str(h0), "derived_0": str(d0), "formula_-1": str(hm1), "derived_-1": str(dm1)}
        agree = h0.is_isomorphic(d0) and hm1.is_isomorphic(dm1)
        ranks = lambda k: ",".join(str(k.term(n).num_generators) for n in (-1, 0))  # noqa: E731
        inputs = {"R": ranks(l.R), "Q": ranks(l.Q), "P": ranks(l.P), "G": f"[{g.term(-1)} → {g.term(0)}]"}
        rows.append(CaseRow(f"{c:03d}", inputs, results, agree, {}, time.perf_counter() - t))
    return VerificationReport(f"psi seed={seed}", rows)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="biextlab", description="Exact Ext, Biext and Ψ-group computations.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, *, degree: bool = True):
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--format", choices=("md", "json"), default="md")
        if degree:
            sp.add_argument("-n", "--degree", type=int, default=1, choices=(-1, 0, 1))

    sp = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    sp.add_argument("-k", required=True, help="matrix JSON")
    common(sp, degree=False)

    sp = sub.add_parser("homology", help="cohomology of a complex")
    sp.add_argument("-k", required=True, help="complex JSON")
    sp.add_argument("-n", "--degree", type=int, help="a single degree (default: every degree)")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("md", "json"), default="md")

    sp = sub.add_parser("ext", help="Ext^i(K, G)")
    sp.add_argument("-k", required=True)
    sp.add_argument("-g", required=True)
    sp.add_argument("--method", choices=METHODS, default="derived")
    common(sp)

    sp = sub.add_parser("biext", help="Biext^i(P, Q; G)")
    sp.add_argument("-p", required=True)
    sp.add_argument("-q", required=True)
    sp.add_argument("-g", required=True)
    sp.add_argument("--method", choices=METHODS, default="cocycle")
    common(sp)

    sp = sub.add_parser("psi", help="Ψ^i of a three-term input")
    sp.add_argument("-k", required=True, help="psi input JSON")
    sp.add_argument("-g", required=True)
    sp.add_argument("--method", choices=METHODS, default="derived")
    common(sp)

    sp = sub.add_parser("verify", help="run a verification grid")
    sp.add_argument("suite", choices=("thm01", "psi"))
    sp.add_argument("--orders", default="2,3,4", help="comma-separated cyclic orders for thm01")
    shape = sp.add_mutually_exclusive_group()
    shape.add_argument("--plain", dest="plain", action="store_true", default=True)
    shape.add_argument("--two-term", dest="plain", action="store_false")
    sp.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cases", type=int, default=20, help="number of random inputs for the psi suite")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes for the grid")
    sp.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identical output)")
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("md", "json"), default="md")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _group_result(command: str, args, g: FgAbGroup, extra: dict | None = None) -> str:
    if args.format == "json":
        doc = {"command": command, "group": canonical_group_json(g), "text": str(g), "order": g.order()}
        doc.update(extra or {})
        return dumps(doc)
    return f"{g}\n"


def _check_method(command: str, method: str) -> None:
    if method not in COMMAND_METHODS[command]:
        allowed = ", ".join(COMMAND_METHODS[command])
        raise SchemaError(f"--method {method} is not valid for {command} (use one of: {allowed})")


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Unsupported as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "snf":
        m = parse_matrix(load_json(args.k), where=args.k)
        s = smith_normal_form(m)
        diag = [int(x) for x in s.diagonal]
        if args.format == "json":
            text = dumps({"command": "snf", "diagonal": diag, "rank": int(s.rank),
                          "U": s.U.tolist(), "V": s.V.tolist()})
        else:
            text = "diagonal: " + " ".join(map(str, diag)) + f"\nrank: {s.rank}\n"
        _emit(text, args.out)
        return EXIT_OK
    if cmd == "homology":
        k = parse_complex(load_json(args.k), args.k)
        degs = [args.degree] if args.degree is not None else k.degrees
        groups = {n: cohomology(k, n) for n in degs}
        if args.format == "json":
            text = dumps({"command": "homology",
                          "cohomology": {str(n): canonical_group_json(g) for n, g in groups.items()}})
        else:
            text = "".join(f"H^{n} = {g}\n" for n, g in groups.items())
        _emit(text, args.out)
        return EXIT_OK
    if cmd == "ext":
        _check_method("ext", args.method)
        ins = parse_inputs({"k": args.k, "g": args.g})
        g = ext_by_method(ins["k"], ins["g"], args.degree, args.method)
        _emit(_group_result("ext", args, g, {"degree": args.degree, "method": args.method}), args.out)
        return EXIT_OK
    if cmd == "biext":
        _check_method("biext", args.method)
        ins = parse_inputs({"p": args.p, "q": args.q, "g": args.g})
        g = biext_by_method(ins["p"], ins["q"], ins["g"], args.degree, args.method)
        _emit(_group_result("biext", args, g, {"degree": args.degree, "method": args.method}), args.out)
        return EXIT_OK
    if cmd == "psi":
        _check_method("psi", args.method)
        l = parse_psi(load_json(args.k), args.k)
        gc = parse_complex(load_json(args.g), args.g)
        g = psi_by_method(l, gc, args.degree, args.method)
        _emit(_group_result("psi", args, g, {"degree": args.degree, "method": args.method}), args.out)
        return EXIT_OK
    if cmd == "verify":
        if args.suite == "thm01":
            try:
                orders = [int(x) for x in args.orders.split(",") if x.strip()]
            except ValueError:
                raise SchemaError(f"--orders: expected comma-separated integers, got {args.orders!r}") from None
            if not orders or any(o < 2 for o in orders):
                raise SchemaError("--orders: every order must be at least 2")
            rep = verify_thm01(orders, args.plain, args.max_candidates, args.jobs)
        else:
            rep = verify_psi(args.cases, args.seed)
        text = dumps(rep.to_json(args.timings)) if args.format == "json" else rep.to_markdown(args.timings)
        _emit(text, args.out)
        return EXIT_OK if rep.ok else EXIT_DISAGREE
    raise AssertionError(cmd)


def main() -> None:
    sys.exit(run())
