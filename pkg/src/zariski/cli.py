"""Command line front end.

Exit codes: 0 success, 1 usage error, 2 computation out of scope (or
insufficient precision), 3 partial census failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from . import __version__
from .binforms import enumerate_even_classes, sl2_fiber_size
from .cm import (PrecisionError, embedding_lattices, format_polynomial, hilbert_class_polynomial,
                 reduced_forms)
from .lattice import DynkinError, DynkinType
from .moduli import OutOfScopeError, component_report

SCHEMA_VERSION = 1

EXIT_OK, EXIT_USAGE, EXIT_SCOPE, EXIT_PARTIAL = 0, 1, 2, 3


@dataclass
class ReportDocument:
    command: str
    invocation: List[str]
    payload: Dict[str, Any]
    schema_version: int = SCHEMA_VERSION

    def to_dict(self):
        return {"schema_version": self.schema_version, "command": self.command,
                "invocation": list(self.invocation), "payload": self.payload}

    def render(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def parse(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        if "schema_version" not in d:
            raise ValueError("missing schema_version")
        return cls(d["command"], d["invocation"], d["payload"], d["schema_version"])


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# payload builders ------------------------------------------------------------


def components_payload(type_string: str) -> Dict[str, Any]:
    try:
        R = DynkinType.parse(type_string)
    except DynkinError as e:
        raise UsageError(str(e)) from e
    return component_report(R).to_dict()


def forms_payload(det: Optional[int] = None, disc: Optional[int] = None) -> Dict[str, Any]:
    if det is not None:
        if det < 1:
            raise UsageError("--det must be positive")
        forms = enumerate_even_classes(det)
        return {"mode": "det", "det": det,
                "classes": [{"form": f.name(), "abc": [f.a, f.b, f.c], "sl2_fiber": sl2_fiber_size(f)}
                            for f in forms]}
    if disc is None or disc >= 0 or disc % 4 not in (0, 1):
        raise UsageError("--disc must be a negative discriminant (0 or 1 mod 4)")
    forms = reduced_forms(disc)
    return {"mode": "disc", "disc": disc,
            "forms": [{"form": str(f), "abc": [f.a, f.b, f.c]} for f in forms]}


def cm_payload(disc: int, hilbert: bool = False, precision_digits: int = 80, q_terms: int = 60) -> Dict[str, Any]:
    try:
        out = embedding_lattices(disc).to_dict()
    except ValueError as e:
        raise OutOfScopeError(str(e)) from e
    if hilbert:
        h = hilbert_class_polynomial(disc, precision_digits, q_terms)
        out["hilbert"] = h.to_dict()
        out["hilbert"]["polynomial"] = format_polynomial(h.coefficients)
    return out


# table rendering -------------------------------------------------------------


def _group_name(factors):
    return " x ".join(f"Z/{d}" for d in factors) if factors else "0"


def render_components(p: Dict[str, Any]) -> str:
    lines = [f"Dynkin type {p['dynkin_type']} (rank {p['rank']})",
             f"Ms classes: {p['ms_classes']}   with Ns nonempty: {p['ms_sharp_classes']}"]
    for k, c in enumerate(p["classes"]):
        lines.append(f"[M{k}] index {c['index']}, orbit size {c['orbit_size']}, "
                     f"G_M = {_group_name(c['discriminant_group'])}")
        if not c["fibers"]:
            lines.append("    Ns empty (excluded from the count)")
            continue
        lines.append(f"    {'N':<14}{'|Ls|':>6}{'orbits':>8}{'real':>6}{'non-real':>10}")
        for f in c["fibers"]:
            lines.append(f"    {f['N']:<14}{f['ls_size']:>6}{f['orbit_count']:>8}"
                         f"{f['real_orbits']:>6}{f['nonreal_orbits']:>10}")
    lines.append(f"Total connected components: {p['total_components']}")
    if p["candidate_pairs"]:
        for pair in p["candidate_pairs"]:
            lines.append(f"Candidate arithmetic Zariski pair over [M{pair['class']}]: "
                         f"{pair['N1']} vs {pair['N2']} (non-isomorphic N)")
    else:
        lines.append("No pair of components over one [M] is distinguished by N.")
    lines.append(f"Note: {p['note']}")
    return "\n".join(lines)


def render_forms(p: Dict[str, Any]) -> str:
    if p["mode"] == "det":
        lines = [f"GL2-classes of even positive definite forms with det {p['det']}: {len(p['classes'])}"]
        for c in p["classes"]:
            lines.append(f"  {c['form']:<16} SL2 fiber {c['sl2_fiber']}")
        return "\n".join(lines)
    lines = [f"Reduced forms of discriminant {p['disc']}: {len(p['forms'])}"]
    lines += [f"  {f['form']}" for f in p["forms"]]
    return "\n".join(lines)


def render_cm(p: Dict[str, Any]) -> str:
    g = p["class_group"]
    struct = _group_name(g["structure"])
    lines = [f"Class group of discriminant {g['discriminant']}: order {g['class_number']}, {struct}"
             + (f", generated by {g['generator']}" if g["generator"] else "")]
    lines.append(f"  {'i':>2}  {'[I_i]':<12}{'[I_i]^2':<12}lattice")
    for e in p["embeddings"]:
        lines.append(f"  {e['i']:>2}  {e['class']:<12}{e['square']:<12}{e['lattice']}")
    if "hilbert" in p:
        h = p["hilbert"]
        lines.append(f"Hilbert class polynomial: {h['polynomial']}")
        lines.append(f"  rounding error {h['rounding_error']:.3g}, truncation bound {h['truncation_bound']:.3g}")
    return "\n".join(lines)


# census ----------------------------------------------------------------------


def _write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _census_job(canon: str, path: str, argv: List[str]) -> Dict[str, Any]:
    try:
        payload = components_payload(canon)
    except (UsageError, OutOfScopeError, ValueError) as e:
        return {"type": canon, "status": "failed", "error": str(e)}
    doc = ReportDocument("components", argv + [canon], payload)
    _write_atomic(path, doc.render())
    return {"type": canon, "status": "computed", "total": payload["total_components"], "file": path}


def read_census_input(path: str) -> List[str]:
    with open(path, encoding="utf-8") as fh:
        lines = []
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    return lines


def census_payload(input_path: str, out_dir: str, resume: bool = False, workers: int = 1,
                   argv: Optional[List[str]] = None) -> Dict[str, Any]:
    os.makedirs(out_dir, exist_ok=True)
    argv = argv or []
    results: List[Optional[Dict[str, Any]]] = []
    jobs = []
    seen = set()
    for line in read_census_input(input_path):
        try:
            canon = str(DynkinType.parse(line))
        except DynkinError as e:
            results.append({"type": line, "status": "failed", "error": str(e)})
            continue
        if canon in seen:
            continue
        seen.add(canon)
        path = os.path.join(out_dir, canon + ".json")
        if resume and os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                doc = ReportDocument.parse(fh.read())
            results.append({"type": canon, "status": "skipped",
                            "total": doc.payload["total_components"], "file": path})
            continue
        results.append(None)
        jobs.append((len(results) - 1, canon, path))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [(k, pool.submit(_census_job, canon, path, argv)) for k, canon, path in jobs]
            for k, fut in futs:
                results[k] = fut.result()
    else:
        for k, canon, path in jobs:
            results[k] = _census_job(canon, path, argv)
    failures = sum(1 for r in results if r["status"] == "failed")
    return {"results": results, "failures": failures}


def render_census(p: Dict[str, Any]) -> str:
    lines = [f"{'type':<20}{'status':<10}total"]
    for r in p["results"]:
        total = r.get("total", "-")
        lines.append(f"{r['type']:<20}{r['status']:<10}{total}")
        if r["status"] == "failed":
            lines.append(f"    error: {r['error']}")
    lines.append(f"{len(p['results'])} types, {p['failures']} failed")
    return "\n".join(lines)


# entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zariski", description="Lattice invariants of maximizing plane sextics.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("components", help="connected components of the moduli of a rank-19 type")
    p.add_argument("type", help='Dynkin type, e.g. "A16+A2+A1"')
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("forms", help="even binary forms by determinant, or reduced forms by discriminant")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--det", type=int)
    g.add_argument("--disc", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cm", help="class group and singular K3 lattices for a discriminant")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--hilbert", action="store_true", help="also compute the Hilbert class polynomial")
    p.add_argument("--precision-digits", type=int, default=80)
    p.add_argument("--q-terms", type=int, default=60)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("census", help="run 'components' for every type listed in a file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    code = EXIT_OK
    try:
        if args.command == "components":
            payload = components_payload(args.type)
            text = render_components
        elif args.command == "forms":
            payload = forms_payload(args.det, args.disc)
            text = render_forms
        elif args.command == "cm":
            payload = cm_payload(args.disc, args.hilbert, args.precision_digits, args.q_terms)
            text = render_cm
        else:
            payload = census_payload(args.input, args.out, args.resume, args.workers, ["census"])
            text = render_census
            if payload["failures"]:
                code = EXIT_PARTIAL
    except UsageError as e:
        print(f"zariski: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OutOfScopeError as e:
        print(f"zariski: out of scope: {e}", file=sys.stderr)
        return EXIT_SCOPE
    except PrecisionError as e:
        print(f"zariski: {e}", file=sys.stderr)
        return EXIT_SCOPE
    except FileNotFoundError as e:
        print(f"zariski: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    doc = ReportDocument(args.command, argv, payload)
    print(doc.render() if args.json else text(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
