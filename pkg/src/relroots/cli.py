"""Command-line front end: ``relroots <subcommand> ...``.

Exit codes: 0 success, 1 validation/domain error or failed verification,
2 internal integrity failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from . import enumeration, relpoly, rootlab, survey
from . import multigraph as mg
from .errors import DomainError, IntegrityError, RelRootsError
from .graphio import FORMATS, parse_graph, to_graph6, to_sparse6
from .multigraph import GraphClass, Multigraph
from .poly import Poly
from .rootlab import fraction_str

JSON_SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(obj: dict, cmd: str, out) -> None:
    payload = {"schema": f"relroots.cli.{cmd}/{JSON_SCHEMA_VERSION}", **obj}
    out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _rationals_text(xs) -> str:
    xs = sorted(xs, key=lambda x: (x < 0, -x if x > 0 else 1 / -x))
    return "{" + ", ".join(fraction_str(x) for x in xs) + "}"


def _graph_from_args(args) -> tuple[Multigraph, str]:
    sources = [s for s in ("family", "graph6", "sparse6", "edges", "input") if getattr(args, s)]
    if len(sources) != 1:
        raise DomainError("give exactly one of --family, --graph6, --sparse6, --edges, --input")
    src = sources[0]
    if src == "family":
        return mg.make_family(mg.parse_family(args.family)), args.family
    if src == "graph6":
        return parse_graph(args.graph6, "graph6"), args.graph6
    if src == "sparse6":
        return parse_graph(args.sparse6, "sparse6"), args.sparse6
    if src == "edges":
        return parse_graph(args.edges, "json"), "json"
    path = Path(args.input)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(data.strip(), args.format), str(path)


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("graph input (exactly one)")
    g.add_argument("--family", help="named family, e.g. cycle:5, theta:1,2,2, pendantcycle:3,7")
    g.add_argument("--graph6", help="graph6 string")
    g.add_argument("--sparse6", help="sparse6 string")
    g.add_argument("--edges", help='edge-list JSON, e.g. \'{"n":3,"edges":[[0,1],[1,2]]}\'')
    g.add_argument("--input", help="file holding one graph")
    g.add_argument("--format", choices=FORMATS, default="graph6", help="format of --input")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _add_universe_args(p: argparse.ArgumentParser, order_required: bool = True) -> None:
    p.add_argument("--order", type=int, required=order_required)
    p.add_argument("--class", dest="gclass", default="connected",
                   help="connected | 2ec | 2c (default: connected)")
    p.add_argument("--source", choices=("corpus", "generated"), default="corpus",
                   help="shipped graph6 snapshot or regenerate (default: corpus)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relroots", allow_abbrev=False,
                description="Exact all-terminal reliability polynomials and their roots.")
    p.add_argument("--version", action="version", version=f"relroots {__version__}")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    for name, help_ in [("poly", "reliability polynomial"), ("hvector", "F- and H-vectors"),
                        ("roots", "roots of the reliability polynomial"),
                        ("rational", "exact rational reliability roots"),
                        ("family", "build a named family graph")]:
        sp = sub.add_parser(name, help=help_, allow_abbrev=False)
        _add_graph_args(sp)
        if name == "poly":
            sp.add_argument("--form", choices=("q", "f", "h"), default="q",
                            help="print in powers of q, F-form or H-form")
        if name == "family":
            sp.add_argument("--encode", choices=FORMATS, default="json")

    sp = sub.add_parser("enumerate", help="connected simple graphs of an order", allow_abbrev=False)
    _add_universe_args(sp)
    sp.add_argument("--output", help="write graph6 lines here instead of stdout")

    sp = sub.add_parser("survey", help="census over a universe", allow_abbrev=False)
    _add_universe_args(sp)
    sp.add_argument("--outdir", default=".", help="directory for census/summary files")
    sp.add_argument("--timing", action="store_true", help="record wall time in the summary")

    sp = sub.add_parser("scatter", help="root scatter CSV + SVG", allow_abbrev=False)
    _add_universe_args(sp)
    sp.add_argument("--output", help="output path prefix (default roots-<order>)")

    sp = sub.add_parser("mc", help="Monte Carlo cross-check", allow_abbrev=False)
    _add_graph_args(sp)
    sp.add_argument("--q", required=True, help="failure probability, e.g. 1/2")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("verify", help="run the property suite over a universe", allow_abbrev=False)
    _add_universe_args(sp)
    sp.add_argument("--expect-rationals", help='comma list, e.g. "1,-1/2,-1/3"')
    sp.add_argument("--oracle-max-edges", type=int, default=12,
                    help="check deletion-contraction against subset enumeration up to this size")
    return p


# ---------------------------------------------------------------------------
# subcommands


def cmd_poly(args, out) -> int:
    G, label = _graph_from_args(args)
    rel = relpoly.reliability_poly(G)
    G0 = G.without_loops()
    if args.form == "q" or not G0.is_connected():
        if args.json:
            _emit({"graph": label, "rel": rel.to_json()}, "poly", out)
        else:
            out.write(f"{rel}\n")
        return 0
    d = G0.m - G0.n + 1
    if args.form == "f":
        F = relpoly.poly_to_f_form(rel, G0.m, d)
        text = " + ".join(f"{f}*q^{i}*(1-q)^{G0.m - i}" for i, f in enumerate(F) if f)
        vec = F
    else:
        H = relpoly.h_from_rel(rel, G0.n, d)
        text = f"(1-q)^{G0.n - 1} * ({Poly(H)})"
        vec = H
    if args.json:
        _emit({"graph": label, "form": args.form, "coeffs": [str(x) for x in vec]}, "poly", out)
    else:
        out.write(text + "\n")
    return 0


def cmd_hvector(args, out) -> int:
    G, label = _graph_from_args(args)
    H = relpoly.h_vector(G)
    F = relpoly.h_to_f(H)
    if args.json:
        _emit({"graph": label, "h_vector": [str(h) for h in H],
               "f_vector": [str(f) for f in F]}, "hvector", out)
    else:
        out.write(f"H = {list(H)}\nF = {list(F)}\n")
    return 0


def cmd_roots(args, out) -> int:
    G, label = _graph_from_args(args)
    rs = rootlab.reliability_roots(G)
    checks = rootlab.root_location_checks(G.without_loops(), rs)
    if args.json:
        _emit({"graph": label, **rs.to_json(),
               "min_modulus": survey.dec(rs.min_modulus()) if rs.min_modulus() else None,
               "checks": checks.__dict__}, "roots", out)
        return 0
    if rs.trivial_root_one_multiplicity:
        out.write(f"1  (multiplicity {rs.trivial_root_one_multiplicity}, exact)\n")
    for r in rs.complex_roots:
        j = r.to_json()
        mult = f"  x{r.multiplicity}" if r.multiplicity > 1 else ""
        out.write(f"{j['re']} {'+' if not j['im'].startswith('-') else '-'} "
                  f"{j['im'].lstrip('-')}i  |z|={survey.dec(r.modulus_mp())}"
                  f"  residual<={j['residual']}{mult}\n")
    out.write(f"rational: {_rationals_text(rs.rational_roots)}\n")
    return 0


def cmd_rational(args, out) -> int:
    G, label = _graph_from_args(args)
    rat = rootlab.rational_roots(G)
    if args.json:
        _emit({"graph": label, "rational_roots": [fraction_str(x) for x in sorted(rat)]},
              "rational", out)
    else:
        out.write(_rationals_text(rat) + "\n")
    return 0


def cmd_family(args, out) -> int:
    G, label = _graph_from_args(args)
    if args.encode == "json":
        data = {"n": G.n, "edges": [list(e) for e in G.edges]}
    elif args.encode == "graph6":
        if not G.is_simple():
            raise DomainError("graph is not simple; use --encode sparse6")
        data = to_graph6(G).decode()
    else:
        data = to_sparse6(G).decode()
    if args.json:
        _emit({"graph": label, "n": G.n, "m": G.m, "corank": G.corank,
               "encoding": args.encode, "data": data}, "family", out)
    else:
        text = data if isinstance(data, str) else json.dumps(data)
        out.write(f"n={G.n} m={G.m} corank={G.corank}\n{text}\n")
    return 0


def _universe(args) -> tuple[int, GraphClass]:
    c = GraphClass.parse(args.gclass)
    if not 1 <= args.order <= enumeration.MAX_ORDER:
        raise DomainError(f"--order must be in 1..{enumeration.MAX_ORDER}")
    return args.order, c


def cmd_enumerate(args, out) -> int:
    n, c = _universe(args)
    stream = enumeration.filter_class(enumeration.connected_simple(n, args.source), c)
    data = b"".join(to_graph6(G) + b"\n" for G in stream)
    if args.output:
        Path(args.output).write_bytes(data)
    if args.json:
        _emit({"order": n, "class": c.value, "count": len(stream),
               "provenance": stream.provenance, "output": args.output}, "enumerate", out)
    elif not args.output:
        out.write(data.decode())
    else:
        out.write(f"{len(stream)} graphs written to {args.output}\n")
    return 0


def cmd_survey(args, out) -> int:
    n, c = _universe(args)
    records, report = survey.run_census(n, c, args.source, timing=args.timing)
    jl, sm = survey.write_census(records, report, args.outdir, n, c)
    j = report.to_json()
    if args.json:
        _emit({"census": str(jl), "summary": str(sm), "report": j}, "survey", out)
    else:
        out.write(f"graphs: {j['graph_count']}\nmin modulus: {j['min_modulus']}\n"
                  f"attained by: {', '.join(j['min_modulus_graphs'])}\n"
                  f"rational roots: {_rationals_text(report.rational_roots)}\n"
                  f"violations: {len(j['violations'])}\nwrote {jl} and {sm}\n")
    return 0 if not report.violations else 1


def cmd_scatter(args, out) -> int:
    n, c = _universe(args)
    records, _ = survey.run_census(n, c, args.source)
    if not records:
        raise DomainError("universe is empty; nothing to plot")
    csv, svg = survey.emit_root_scatter(records, args.output or f"roots-{n}")
    if args.json:
        _emit({"csv": str(csv), "svg": str(svg), "graphs": len(records)}, "scatter", out)
    else:
        out.write(f"wrote {csv} and {svg}\n")
    return 0


def cmd_mc(args, out) -> int:
    G, label = _graph_from_args(args)
    try:
        q0 = Fraction(args.q)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"--q must be a rational like 1/2, got {args.q!r}") from None
    res = survey.monte_carlo_check(G, q0, args.trials, args.seed)
    if args.json:
        _emit({"graph": label, **res.to_json()}, "mc", out)
    else:
        j = res.to_json()
        out.write(f"estimate {j['estimate']} +- {j['stderr']}\nexact    {j['exact']} "
                  f"= {j['exact_decimal']}\nz        {j['z']}\n")
    return 0


def _parse_rationals(text: str) -> set[Fraction]:
    try:
        return {Fraction(t.strip()) for t in text.split(",") if t.strip()}
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"bad rational list {text!r}") from None


def cmd_verify(args, out) -> int:
    n, c = _universe(args)
    expected = _parse_rationals(args.expect_rationals) if args.expect_rationals else None
    records, report = survey.run_census(n, c, args.source)
    failures: list[str] = []
    for v in report.violations:
        failures.append(f"{v['graph']}: {'; '.join(v['problems'])}")
    if n >= 3 and c is GraphClass.CONNECTED and records:
        if abs(float(report.min_modulus) - 1 / (n - 1)) > survey.TOL:
            failures.append(f"minimum modulus {survey.dec(report.min_modulus)} != 1/{n - 1}")
    if expected is not None and set(report.rational_roots) != expected:
        failures.append(f"rational roots {_rationals_text(report.rational_roots)} "
                        f"!= expected {_rationals_text(expected)}")
    if n >= 2:
        mo = survey.check_minus_one_conjecture(n, args.source)
        for g in mo.violations:
            failures.append(f"{g}: Rel(-1) = 0")
    oracle_checked = 0
    cache = relpoly.ReliabilityCache()
    for r in records:
        if r.m > args.oracle_max_edges:
            continue
        G = parse_graph(r.code, "graph6")
        rel = relpoly.reliability_poly(G, cache)
        F = relpoly.f_vector_bruteforce(G)
        if relpoly.poly_to_f_form(rel, r.m, r.d) != F or relpoly.f_to_h(F) != tuple(r.h_vector):
            failures.append(f"{r.code}: deletion-contraction disagrees with subset enumeration")
        oracle_checked += 1
    result = {"order": n, "class": c.value, "graphs": len(records),
              "oracle_checked": oracle_checked,
              "rational_roots": [fraction_str(x) for x in report.rational_roots],
              "min_modulus": survey.dec(report.min_modulus) if report.min_modulus else None,
              "failures": failures}
    if args.json:
        _emit(result, "verify", out)
    else:
        out.write(f"order {n}, class {c.value}: {len(records)} graphs, "
                  f"{oracle_checked} oracle checks, {len(failures)} failures\n")
        for f in failures:
            out.write(f"FAIL {f}\n")
    return 1 if failures else 0


COMMANDS = {
    "poly": cmd_poly, "hvector": cmd_hvector, "roots": cmd_roots, "rational": cmd_rational,
    "family": cmd_family, "enumerate": cmd_enumerate, "survey": cmd_survey,
    "scatter": cmd_scatter, "mc": cmd_mc, "verify": cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.cmd](args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except IntegrityError as exc:
        err.write(f"integrity failure: {exc}\n")
        return 2
    except (DomainError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    except RelRootsError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
