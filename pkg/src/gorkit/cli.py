"""Command-line front end: ``gorkit <command> <input> [options]``.

Polytope files hold a header ``d n`` followed by ``n`` rows of ``d``
integers. Nef files hold a header ``d r`` followed by ``r`` blocks, each a
count line ``n_i`` and ``n_i`` rows. Lines starting with ``#`` are comments.
Files ending in ``.nef`` are read as nef files, everything else as polytopes.

Exit codes: 0 success, 2 parse error, 3 precondition violation, 4 cap hit.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .cayley import cayley_gorenstein_check, cayley_polytope, cayley_structures, special_simplices
from .errors import EnumerationCapError, GorkitError, ParseError, PreconditionError
from .gorenstein import dual_gorenstein, gorenstein_data
from .nef import (
    NefPartition,
    cancel_check,
    center_and_properize,
    collect,
    decompose_irreducible,
    detect_nef,
    dual_nef,
    lattice_point_count_identity,
    nef_vertex_formula,
    project_nef,
)
from .poly import LaurentPoly2, UniPoly
from .polytope import LatticePolytope, dual_polytope, enumeration_cap
from .stringy import conjecture_diagnostics, est, est_specializations, hstar, stilde, weighted_simplex

COMMANDS = (
    "dual",
    "gorenstein",
    "hstar",
    "stilde",
    "est",
    "check",
    "special",
    "cayley",
    "nef-dual",
    "nef-collect",
    "nef-project",
    "nef-decompose",
    "nef-cancel",
    "weighted",
    "batch",
)

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_CAP = 0, 2, 3, 4

# --------------------------------------------------------------------------
# parsing


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        out.append((no, s.split()))
    return out


def _ints(tokens: Sequence[str], line: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        bad = next(t for t in tokens if not _is_int(t))
        raise ParseError(f"not an integer: {bad!r}", line) from None


def _is_int(t: str) -> bool:
    try:
        int(t)
    except ValueError:
        return False
    return True


class _Reader:
    def __init__(self, text: str):
        self.lines = _content_lines(text)
        self.pos = 0
        self.last_line = len(text.splitlines()) + 1

    def next(self, what: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of file, expected {what}", self.last_line)
        item = self.lines[self.pos]
        self.pos += 1
        return item

    def row(self, d: int) -> tuple[int, ...]:
        no, toks = self.next("a vertex row")
        if len(toks) != d:
            raise ParseError(f"expected {d} entries, found {len(toks)}", no)
        return tuple(_ints(toks, no))

    def header(self, names: str) -> tuple[int, int]:
        no, toks = self.next("a header")
        if len(toks) != 2:
            raise ParseError(f"malformed header, expected '{names}'", no)
        a, b = _ints(toks, no)
        if a < 0 or b < 1:
            raise ParseError(f"malformed header, expected '{names}' with positive counts", no)
        return a, b

    def finish(self) -> None:
        if self.pos < len(self.lines):
            raise ParseError("unexpected trailing data", self.lines[self.pos][0])


def parse_polytope(text: str) -> LatticePolytope:
    rd = _Reader(text)
    d, n = rd.header("d n")
    rows = [rd.row(d) for _ in range(n)]
    rd.finish()
    return LatticePolytope(rows)


def parse_nef(text: str) -> list[LatticePolytope]:
    rd = _Reader(text)
    d, r = rd.header("d r")
    parts = []
    for _ in range(r):
        no, toks = rd.next("a block size")
        if len(toks) != 1:
            raise ParseError("expected a single block size", no)
        (n,) = _ints(toks, no)
        if n < 1:
            raise ParseError("block size must be positive", no)
        parts.append(LatticePolytope([rd.row(d) for _ in range(n)]))
    rd.finish()
    return parts


def parse_input(source: str | TextIO, kind: str | None = None):
    """Parse a path or stream; ``kind`` is ``"poly"`` or ``"nef"`` (default: by extension)."""
    if isinstance(source, str):
        if kind is None:
            kind = "nef" if source.endswith(".nef") else "poly"
        try:
            with open(source, encoding="ascii", newline="") as fh:
                text = fh.read()
        except UnicodeDecodeError:
            raise ParseError("file is not ASCII") from None
    else:
        text = source.read()
        kind = kind or "poly"
    return parse_nef(text) if kind == "nef" else parse_polytope(text)


def format_polytope(P: LatticePolytope) -> str:
    lines = [f"{P.ambient_dim} {P.n_vertices}"]
    lines += [" ".join(str(x) for x in v) for v in P.vertices]
    return "\n".join(lines) + "\n"


def format_nef(parts: Sequence[LatticePolytope]) -> str:
    lines = [f"{parts[0].ambient_dim} {len(parts)}"]
    for P in parts:
        lines.append(str(P.n_vertices))
        lines += [" ".join(str(x) for x in v) for v in P.vertices]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# reports

_INT64 = 2**63


def to_json(obj):
    """Convert report values to JSON-ready data.

    Integers outside the signed 64-bit range become decimal strings, fractions
    become ``"p/q"`` strings, polynomials are tagged objects.
    """
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj if -_INT64 <= obj < _INT64 else str(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, UniPoly):
        return {"unipoly": [to_json(c) for c in obj.coeffs]}
    if isinstance(obj, LaurentPoly2):
        return {"laurent2": [[i, j, to_json(c)] for (i, j), c in obj.sorted_terms()]}
    if isinstance(obj, LatticePolytope):
        return [to_json(list(v)) for v in obj.vertices]
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(x) for x in obj]
    return str(obj)


def _text(obj, indent: str = "") -> str:
    if isinstance(obj, (UniPoly, LaurentPoly2, Fraction)):
        return str(obj)
    if isinstance(obj, LatticePolytope):
        return "; ".join(" ".join(str(x) for x in v) for v in obj.vertices)
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{indent}{k}:")
                lines.append(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_text(v, indent)}")
        return "\n".join(lines)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_text(x, indent) for x in obj) + "]"
    return str(obj)


def emit_report(report, fmt: str = "json") -> bytes:
    if fmt == "json":
        out = json.dumps(to_json(report), separators=(",", ":"))
    elif fmt == "text":
        out = report if isinstance(report, str) else _text(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return (out.rstrip("\n") + "\n").encode("ascii", errors="backslashreplace")


# --------------------------------------------------------------------------
# commands


def _need_poly(x) -> LatticePolytope:
    if not isinstance(x, LatticePolytope):
        raise PreconditionError("this command needs a polytope file")
    return x


def _need_parts(x) -> list[LatticePolytope]:
    if isinstance(x, LatticePolytope):
        raise PreconditionError("this command needs a nef file")
    return x


def _centered_nef(parts) -> NefPartition:
    np_ = detect_nef(parts)
    if np_ is None:
        raise PreconditionError("parts do not form a nef-partition")
    return center_and_properize(np_) if not np_.centered else np_


def _parse_pair(s: str) -> tuple[Fraction, Fraction]:
    bits = s.split(",")
    if len(bits) != 2:
        raise PreconditionError("--at expects u,v")
    return Fraction(bits[0]), Fraction(bits[1])


def _parse_blocks(s: str) -> list[list[int]]:
    return [[int(x) for x in b.split(",") if x.strip()] for b in s.split(";")]


def cmd_dual(x, args):
    P = _need_poly(x)
    pair = dual_gorenstein(P)
    g = gorenstein_data(P)
    polar = dual_polytope(g.reflexive)
    return {
        "index": pair.index,
        "dual_vertices": pair.P_dual,
        "polar_vertices": polar.to_lattice() if polar.is_lattice else polar.vertices,
    }


def cmd_gorenstein(x, args):
    g = gorenstein_data(_need_poly(x))
    if g is None:
        return {"index": None, "interior_point": None}
    return {"index": g.index, "interior_point": [Fraction(c) for c in g.interior_point]}


def cmd_hstar(x, args):
    return hstar(_need_poly(x))


def cmd_stilde(x, args):
    return stilde(_need_poly(x))


def cmd_est(x, args):
    E = est(_need_poly(x))
    if args.at:
        return E(*_parse_pair(args.at))
    return E


def cmd_check(x, args):
    P = _need_poly(x)
    rep = conjecture_diagnostics(P)
    spec = est_specializations(P, E=rep.est)
    out = {
        "cy_dim": rep.cy_dim,
        "index": rep.index,
        "est": rep.est,
        "checks": dict(rep.checks),
        "specializations": spec.agree,
    }
    if rep.k is not None:
        out["k"] = rep.k
    if rep.l is not None:
        out["l"] = rep.l
    out["all_pass"] = rep.all_pass and spec.agree
    return out


def cmd_special(x, args):
    P = _need_poly(x)
    sims = special_simplices(P)
    return {
        "index": gorenstein_data(P).index,
        "count": len(sims),
        "simplices": [list(s.vertices) for s in sims],
        "barycenters": [list(s.barycenter) for s in sims],
    }


def cmd_cayley(x, args):
    if isinstance(x, LatticePolytope):
        sts = cayley_structures(x)
        return {
            "count": len(sts),
            "structures": [{"functionals": s.functionals, "parts": s.parts} for s in sts],
        }
    chk = cayley_gorenstein_check(x)
    return {
        "cayley_polytope": cayley_polytope(x),
        "cone_reflexive_index_r": chk.cone_reflexive_index_r,
        "cayley_gorenstein_index_r": chk.cayley_gorenstein_index_r,
        "sum_reflexive": chk.sum_reflexive,
        "m_dual": chk.m_dual,
        "equivalent": chk.equivalent,
        "holds": chk.holds,
    }


def _nef_json(np_: NefPartition) -> dict:
    return {"r": np_.r, "parts": list(np_.parts)}


def cmd_nef_dual(x, args):
    np_ = _centered_nef(_need_parts(x))
    nab = dual_nef(np_)
    if args.format == "text":
        return format_nef(nab.parts)
    vf = nef_vertex_formula(np_)
    cnt = lattice_point_count_identity(np_)
    return {
        "r": nab.r,
        "dropped": np_.dropped,
        "parts": list(nab.parts),
        "vertex_formula": vf.agree,
        "count_identity": cnt.equal,
    }


def cmd_nef_collect(x, args):
    if not args.blocks:
        raise PreconditionError("nef-collect needs --blocks, e.g. '0,1;2'")
    np_ = _centered_nef(_need_parts(x))
    rep = collect(np_, _parse_blocks(args.blocks))
    if args.format == "text":
        return format_nef(rep.partition.parts)
    return {
        "blocks": rep.blocks,
        "partition": _nef_json(rep.partition),
        "dual": _nef_json(rep.dual),
        "verified": rep.verified,
    }


def cmd_nef_project(x, args):
    if not args.J:
        raise PreconditionError("nef-project needs --J, e.g. '1'")
    np_ = _centered_nef(_need_parts(x))
    rep = project_nef(np_, [int(j) for j in args.J.split(",")])
    return {
        "J": rep.J,
        "quotient_matrix": rep.quotient.matrix,
        "partition": _nef_json(rep.partition),
        "face": rep.face,
        "face_quotient": rep.face_quotient,
        "dual": _nef_json(rep.dual),
        "dual_ok": rep.dual_ok,
        "polar_ok": rep.polar_ok,
        "smallest_face": rep.smallest_face,
        "dimension_law": rep.dimension_law,
    }


def cmd_nef_decompose(x, args):
    np_ = _centered_nef(_need_parts(x))
    rep = decompose_irreducible(np_)
    return {
        "blocks": rep.blocks,
        "bases": rep.bases,
        "components": [_nef_json(c) for c in rep.components],
        "direct_sum": rep.direct_sum,
        "length_bound": rep.length_bound,
        "crosspolytope": rep.crosspolytope,
        "ok": rep.ok,
    }


def cmd_nef_cancel(x, args):
    parts = _need_parts(x)
    if len(parts) != 2:
        raise PreconditionError("nef-cancel needs exactly two parts")
    rep = cancel_check(*parts)
    return {
        "sum_reflexive": rep.sum_reflexive,
        "sum_interior_points": rep.sum_interior_points,
        "p_interior_point": rep.p_interior_point,
        "q_interior_point": rep.q_interior_point,
        "p_reflexive": rep.p_reflexive,
        "q_reflexive": rep.q_reflexive,
        "partition": None if rep.partition is None else rep.partition.points,
        "failures": list(rep.failures),
        "consistent": rep.consistent,
    }


def cmd_weighted(weights: str, args):
    ws = [int(t) for t in weights.replace(",", " ").split()]
    w = args.w if args.w is not None else sum(ws)
    rep = weighted_simplex(ws, w)
    return {
        "k": rep.k,
        "polytope": rep.polytope,
        "reciprocal_sum": rep.reciprocal_sum,
        "index": rep.index,
        "index_matches": rep.index_matches,
        "pyramid": rep.pyramid,
        "est_zero": rep.est_zero,
        "s": rep.s,
        "cy_dim": rep.cy_dim,
        "bound_holds": rep.bound_holds,
    }


HANDLERS = {
    "dual": cmd_dual,
    "gorenstein": cmd_gorenstein,
    "hstar": cmd_hstar,
    "stilde": cmd_stilde,
    "est": cmd_est,
    "check": cmd_check,
    "special": cmd_special,
    "cayley": cmd_cayley,
    "nef-dual": cmd_nef_dual,
    "nef-collect": cmd_nef_collect,
    "nef-project": cmd_nef_project,
    "nef-decompose": cmd_nef_decompose,
    "nef-cancel": cmd_nef_cancel,
}


def execute(command: str, source, args) -> tuple[int, object, str | None]:
    """Run one command; returns ``(exit code, report, error message)``."""
    try:
        with enumeration_cap(args.cap):
            if command == "weighted":
                return EXIT_OK, cmd_weighted(source, args), None
            if command not in HANDLERS:
                raise PreconditionError(f"unknown command {command!r}")
            x = parse_input(source)
            return EXIT_OK, HANDLERS[command](x, args), None
    except ParseError as e:
        return EXIT_PARSE, None, f"parse error: {e}"
    except EnumerationCapError as e:
        return EXIT_CAP, None, str(e)
    except OSError as e:
        return EXIT_PARSE, None, f"cannot read input: {e}"
    except (PreconditionError, GorkitError) as e:
        return EXIT_PRECONDITION, None, str(e)


def _batch_one(job):
    command, path, ns = job
    code, rep, err = execute(command, path, argparse.Namespace(**ns))
    return {"input": path, "exit": code, "result": to_json(rep) if code == 0 else None, "error": err}


def run_batch(command: str, paths: Iterable[str], args, jobs: int | None = None) -> list[dict]:
    """Run ``command`` on every path; output order follows input order."""
    if command == "batch":
        raise PreconditionError("batch cannot be nested")
    ns = {k: v for k, v in vars(args).items() if k in ("cap", "format", "at", "blocks", "J", "w")}
    ns["format"] = "json"
    work = [(command, p, ns) for p in paths]
    if jobs == 1 or len(work) <= 1:
        return [_batch_one(j) for j in work]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_batch_one, work))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gorkit", description="Gorenstein polytopes, nef-partitions and stringy E-functions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("inputs", nargs="+", help="input file(s); for 'weighted' the weights, for 'batch' a command then files")
    p.add_argument("--cap", type=int, default=None, help="enumeration cap")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--at", default=None, help="evaluation point u,v for est")
    p.add_argument("--blocks", default=None, help="block partition for nef-collect, e.g. '0,1;2'")
    p.add_argument("--J", default=None, help="indices to project along for nef-project, e.g. '1'")
    p.add_argument("--w", type=int, default=None, help="degree for weighted (default: sum of weights)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for batch")
    return p


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.cap is None:
        from .polytope import get_enumeration_cap

        args.cap = get_enumeration_cap()

    def write(data: bytes):
        if isinstance(stdout, io.TextIOBase) or hasattr(stdout, "encoding"):
            stdout.write(data.decode("ascii"))
        else:
            stdout.write(data)

    if args.command == "batch":
        if len(args.inputs) < 2:
            print("batch needs a command and at least one file", file=stderr)
            return EXIT_PRECONDITION
        try:
            rows = run_batch(args.inputs[0], args.inputs[1:], args, args.jobs)
        except PreconditionError as e:
            print(str(e), file=stderr)
            return EXIT_PRECONDITION
        write(emit_report(rows, "json"))
        codes = [r["exit"] for r in rows]
        return max(codes) if codes else EXIT_OK

    if len(args.inputs) != 1:
        print(f"{args.command} takes exactly one input", file=stderr)
        return EXIT_PRECONDITION
    code, rep, err = execute(args.command, args.inputs[0], args)
    if code != EXIT_OK:
        print(err, file=stderr)
        return code
    write(emit_report(rep, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
