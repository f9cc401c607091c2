"""Censuses over graph universes, Monte Carlo cross-checks and root scatters.

A census computes one :class:`SurveyRecord` per graph and folds the records
into a :class:`SurveyReport`. Records are emitted as JSON lines and the
report as a JSON summary; both are byte-stable for a fixed input.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import __version__
from . import multigraph as mg
from . import relpoly, rootlab
from .enumeration import GraphStream, connected_simple, filter_class
from .errors import DomainError
from .graphio import to_graph6, to_sparse6
from .multigraph import GraphClass, Multigraph
from .poly import Poly
from .rootlab import decimal_str, fraction_str

TOL = 1e-9
RECORD_SCHEMA = "relroots.record/1"
REPORT_SCHEMA = "relroots.report/1"

THETA_H2_NOTE = {
    "graph": "theta:1,2,2",
    "displayed_h2_formula": relpoly.theta_h2_displayed(1, 2, 2),
    "exact_h2": relpoly.theta_h2_exact(1, 2, 2),
    "note": "H_2 of theta graphs is taken from exact division; the closed "
            "expression C(n,2) - sum C(l_i,2) - 1 is one smaller.",
}


def dec(x, digits: int = 20) -> str:
    """Decimal string with ``digits`` significant digits."""
    return decimal_str(x, digits)


def graph_code(G: Multigraph) -> str:
    return (to_graph6(G) if G.is_simple() else to_sparse6(G)).decode("ascii")


# ---------------------------------------------------------------------------
# per-graph records


@dataclass
class SurveyRecord:
    key: str
    code: str
    n: int
    m: int
    d: int
    classes: list[str]
    h_vector: list[int]
    min_modulus: float | None
    attaining_roots: list[rootlab.ComplexRoot]
    rational_roots: list[Fraction]
    roots: rootlab.RootSet
    flags: dict
    corank2_type: str = "not-applicable"
    theta_lengths: list[int] | None = None
    problems: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": RECORD_SCHEMA,
            "key": self.key,
            "graph": self.code,
            "n": self.n,
            "m": self.m,
            "corank": self.d,
            "classes": self.classes,
            "h_vector": [str(h) for h in self.h_vector],
            "min_modulus": None if self.min_modulus is None else dec(self.min_modulus_mp),
            "attaining_roots": [r.to_json() for r in self.attaining_roots],
            "rational_roots": [fraction_str(x) for x in self.rational_roots],
            "roots": self.roots.to_json()["complex_roots"],
            "root_one_multiplicity": self.roots.trivial_root_one_multiplicity,
            "flags": self.flags,
            "corank2_type": self.corank2_type,
            "theta_lengths": self.theta_lengths,
            "problems": self.problems,
        }

    @property
    def min_modulus_mp(self):
        mods = [r.modulus_mp() for r in self.roots.complex_roots]
        if self.roots.trivial_root_one_multiplicity:
            mods.append(mpmath.mpf(1))
        return min(mods)


def _attaining(rs: rootlab.RootSet, target: float) -> list[rootlab.ComplexRoot]:
    out = [r for r in rs.complex_roots if abs(r.modulus - target) <= TOL]
    if rs.trivial_root_one_multiplicity and abs(1.0 - target) <= TOL:
        one = rootlab.ComplexRoot(mpmath.mpf(1), mpmath.mpf(0), 0.0,
                                  rs.trivial_root_one_multiplicity)
        out.append(one)
    return out


def analyze_graph(G: Multigraph, cache: relpoly.ReliabilityCache | None = None) -> SurveyRecord:
    """Every per-graph check the census runs, with problems collected."""
    G0 = G.without_loops()
    if not G0.is_connected():
        raise DomainError("census graphs must be connected")
    n, m = G0.n, G0.m
    d = m - n + 1
    rel = relpoly.reliability_poly(G0, cache)
    H = relpoly.h_from_rel(rel, n, d)
    if d > 0:
        rs = rootlab.roots(Poly(H), n - 1)
    else:
        rs = rootlab.RootSet((), n - 1)
    rational = rootlab._exact_rationals(rel, n) if n >= 2 else frozenset()
    rs = rootlab.RootSet(rs.complex_roots, n - 1, rational)
    classes = mg.classify(G0)
    bridgeless = GraphClass.TWO_EDGE_CONNECTED in classes
    problems: list[str] = []

    loc = rootlab.root_location_checks(G0, rs)
    log_concave = rootlab.is_log_concave(H)
    h0_ok = H[0] == 1
    h1_ok = (not bridgeless or n < 2 or d == 0) or H[1] == n - 1
    trees_ok = sum(H) == relpoly.spanning_tree_count(G0)
    residual_ok = all(r.residual <= rootlab.RESIDUAL_BOUND for r in rs.complex_roots)

    annulus_ok = True
    gcd_verdict = "n/a"
    gcd_consistent = True
    if d >= 1 and all(h > 0 for h in H):
        ann = rootlab.ek_annulus(H)
        annulus_ok = rootlab.annulus_contains(rs, ann)
        gt = rootlab.inner_circle_gcd_test(H)
        gcd_verdict = gt.verdict
        if gt.inner_root_excluded:
            gcd_consistent = all(abs(r.modulus - float(ann.r)) > TOL for r in rs.complex_roots)
    elif d >= 1:
        problems.append("nonpositive H coefficient")

    allowed = {Fraction(1)} | {Fraction(-1, k) for k in range(1, n)}
    rational_ok = set(rational) <= allowed
    near = rootlab.unconfirmed_rational_neighbours(rs, n)

    flags = {
        "real_range_ok": loc.real_range_ok,
        "modulus_bound_ok": loc.modulus_bound_ok,
        "min_modulus_ok": loc.min_modulus_ok,
        "log_concave": log_concave,
        "annulus_ok": annulus_ok,
        "gcd_test": gcd_verdict,
        "gcd_consistent": gcd_consistent,
        "h0_ok": h0_ok,
        "h1_ok": h1_ok,
        "tree_count_ok": trees_ok,
        "residual_ok": residual_ok,
        "rational_ok": rational_ok and not near,
    }
    for name, val in flags.items():
        if val is False:
            problems.append(name)
    if near:
        problems.append("unconfirmed rational neighbour: " + ",".join(map(fraction_str, near)))

    mn = rs.min_modulus() if n >= 2 else None
    c2 = mg.classify_corank2(G0)
    lengths = mg.theta_lengths(G0) if c2 is mg.Corank2Type.THETA else None
    return SurveyRecord(
        key=mg.canonical_key(G).hex(),
        code=graph_code(G),
        n=n, m=m, d=d,
        classes=sorted(c.value for c in classes),
        h_vector=list(H),
        min_modulus=mn,
        attaining_roots=_attaining(rs, mn) if mn is not None else [],
        rational_roots=sorted(rational),
        roots=rs,
        flags=flags,
        corank2_type=c2.value,
        theta_lengths=lengths,
        problems=problems,
    )


_worker_cache: relpoly.ReliabilityCache | None = None


def _worker(G: Multigraph) -> SurveyRecord:
    global _worker_cache
    if _worker_cache is None:
        _worker_cache = relpoly.ReliabilityCache()
    return analyze_graph(G, _worker_cache)


def thread_count() -> int:
    env = os.environ.get("RELROOTS_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError:
            raise DomainError(f"RELROOTS_THREADS must be an integer, got {env!r}") from None
        if k < 1:
            raise DomainError("RELROOTS_THREADS must be >= 1")
        return k
    return os.cpu_count() or 1


def analyze_all(graphs: Sequence[Multigraph], workers: int | None = None) -> list[SurveyRecord]:
    """Records in input order; parallel across processes when workers > 1."""
    workers = thread_count() if workers is None else workers
    if workers <= 1 or len(graphs) < 64:
        cache = relpoly.ReliabilityCache()
        return [analyze_graph(G, cache) for G in graphs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_worker, graphs, chunksize=64))


# ---------------------------------------------------------------------------
# reports


@dataclass
class SurveyReport:
    universe: dict
    graph_count: int
    min_modulus: mpmath.mpf | None
    min_modulus_graphs: list[str]
    attaining_roots: list[dict]
    rational_roots: list[Fraction]
    rational_witnesses: dict[str, str]
    violations: list[dict]
    metadata: dict
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "universe": self.universe,
            "graph_count": self.graph_count,
            "min_modulus": None if self.min_modulus is None else dec(self.min_modulus),
            "min_modulus_graphs": self.min_modulus_graphs,
            "attaining_roots": self.attaining_roots,
            "rational_roots": [fraction_str(x) for x in self.rational_roots],
            "rational_witnesses": self.rational_witnesses,
            "violations": self.violations,
            "metadata": self.metadata,
            "notes": self.notes,
        }


def summarize(records: Sequence[SurveyRecord], universe: dict,
              expect_cycle_uniqueness: bool = True, seed: int | None = None,
              wall_time: float | None = None) -> SurveyReport:
    violations = [{"graph": r.code, "problems": r.problems} for r in records if r.problems]
    notes: list[str] = []
    metadata = {"version": __version__, "seed": seed, "theta_h2": THETA_H2_NOTE}
    if wall_time is not None:
        metadata["wall_time_s"] = round(wall_time, 3)
    if not records:
        notes.append("empty universe")
        return SurveyReport(universe, 0, None, [], [], [], {}, violations, metadata, notes)

    with_roots = [r for r in records if r.min_modulus is not None]
    mn = min((r.min_modulus for r in with_roots), default=None)
    mn_exact = min((r.min_modulus_mp for r in with_roots), default=None)
    attaining = [r for r in with_roots if r.min_modulus <= mn + TOL] if mn is not None else []
    att_roots = []
    for r in attaining:
        for z in _attaining(r.roots, mn):
            att_roots.append({"graph": r.code, **z.to_json()})

    union: dict[Fraction, str] = {}
    for r in records:
        for x in r.rational_roots:
            union.setdefault(x, r.code)
    if expect_cycle_uniqueness:
        for r in attaining:
            n = r.n
            if n < 3:
                continue
            is_cycle = mg.canonical_key(mg.make_family(mg.Cycle(n))).hex() == r.key
            target = Fraction(-1, n - 1)
            only_root = (len(r.attaining_roots) == 1
                         and target in r.rational_roots
                         and abs(r.attaining_roots[0].z - float(target)) <= TOL
                         and r.attaining_roots[0].multiplicity == 1)
            if not is_cycle:
                violations.append({"graph": r.code, "problems": ["minimum modulus attained by a non-cycle"]})
            elif not only_root:
                violations.append({"graph": r.code, "problems": ["cycle attains minimum at an unexpected root"]})
    multi_theta = [r.code for r in records
                   if r.theta_lengths is not None and sum(1 for x in r.theta_lengths if x == 1) >= 2]
    if multi_theta:
        notes.append("theta graphs with two or more length-1 paths (parallel edges): "
                     + ",".join(multi_theta))
    return SurveyReport(
        universe=universe,
        graph_count=len(records),
        min_modulus=mn_exact,
        min_modulus_graphs=[r.code for r in attaining],
        attaining_roots=att_roots,
        rational_roots=sorted(union),
        rational_witnesses={fraction_str(x): union[x] for x in sorted(union)},
        violations=violations,
        metadata=metadata,
        notes=notes,
    )


def census_universe(n: int, c: GraphClass, source: str = "corpus") -> GraphStream:
    if not 1 <= n <= 9:
        raise DomainError(f"generated universes need order 1..9, got {n}")
    return filter_class(connected_simple(n, source), c)


def run_census(n: int, c: GraphClass = GraphClass.CONNECTED, source: str = "corpus",
               workers: int | None = None, timing: bool = False
               ) -> tuple[list[SurveyRecord], SurveyReport]:
    t0 = time.perf_counter()
    stream = census_universe(n, c, source)
    records = analyze_all(stream.graphs, workers)
    universe = {"order": n, "class": c.value, "simple": True, **stream.provenance}
    report = summarize(records, universe, wall_time=time.perf_counter() - t0 if timing else None)
    return records, report


def survey_min_modulus(n: int, c: GraphClass = GraphClass.CONNECTED,
                       source: str = "corpus") -> SurveyReport:
    if not 2 <= n <= 8:
        raise DomainError(f"minimum-modulus census supports 2 <= n <= 8, got {n}")
    return run_census(n, c, source)[1]


def survey_rational_roots(n: int, c: GraphClass = GraphClass.CONNECTED,
                          source: str = "corpus") -> SurveyReport:
    if not 2 <= n <= 8:
        raise DomainError(f"rational-root census supports 2 <= n <= 8, got {n}")
    return run_census(n, c, source)[1]


def survey_graphs(graphs: Sequence[Multigraph], label: str = "custom",
                  expect_cycle_uniqueness: bool = True) -> tuple[list[SurveyRecord], SurveyReport]:
    """Census over an arbitrary batch (e.g. multigraph samples or bundles)."""
    records = analyze_all(list(graphs))
    return records, summarize(records, {"source": label},
                              expect_cycle_uniqueness=expect_cycle_uniqueness)


def write_census(records: Sequence[SurveyRecord], report: SurveyReport, outdir: str | Path,
                 n: int, c: GraphClass) -> tuple[Path, Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    jl = outdir / f"census-{n}-{c.value}.jsonl"
    sm = outdir / f"summary-{n}-{c.value}.json"
    with open(jl, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    with open(sm, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return jl, sm


# ---------------------------------------------------------------------------
# the -1 question


@dataclass
class MinusOneReport:
    order: int
    graphs_tested: int
    violations: list[str]

    def to_json(self) -> dict:
        return {"order": self.order, "graphs_tested": self.graphs_tested,
                "violations": self.violations}


def check_minus_one_conjecture(n: int, source: str = "corpus",
                               cache: relpoly.ReliabilityCache | None = None) -> MinusOneReport:
    """Exact Rel(G, -1) over all connected simple graphs of order n."""
    if not 2 <= n <= 8:
        raise DomainError(f"order must be in 2..8, got {n}")
    cache = relpoly.ReliabilityCache() if cache is None else cache
    stream = connected_simple(n, source)
    bad = [to_graph6(G).decode() for G in stream
           if relpoly.reliability_poly(G, cache).eval_exact(-1) == 0]
    return MinusOneReport(n, len(stream), bad)


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    stderr: float
    exact: Fraction
    z: float
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {"estimate": dec(self.estimate), "stderr": dec(self.stderr),
                "exact": fraction_str(self.exact), "exact_decimal": dec(self.exact),
                "z": dec(self.z) if np.isfinite(self.z) else str(self.z),
                "trials": self.trials, "seed": self.seed}


def monte_carlo_check(G: Multigraph, q0, trials: int, seed: int,
                      batch: int = 1 << 16) -> MonteCarloResult:
    """Simulate independent edge failures with probability ``q0`` and compare
    the connected fraction with the exact reliability.

    Edge failures are drawn as ``U < num`` with ``U`` uniform on
    ``0..den-1`` so the simulated probability is exactly ``q0``. A Philox
    (counter-based) generator keyed by ``seed`` makes runs reproducible.
    """
    q0 = Fraction(q0)
    if not 0 <= q0 <= 1:
        raise DomainError(f"q0 must lie in [0, 1], got {q0}")
    if trials < 1000:
        raise DomainError("Monte Carlo check needs at least 1000 trials")
    G0 = G.without_loops()
    exact = relpoly.reliability_poly(G0).eval_exact(q0)
    rng = np.random.Generator(np.random.Philox(key=seed))
    hits = 0
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        failed = rng.integers(0, q0.denominator, size=(k, G0.m)) < q0.numerator
        hits += int(mg.connected_rows(G0, ~failed).sum()) if G0.n > 1 else k
        done += k
    est = hits / trials
    p = float(exact)
    var = p * (1 - p) / trials
    if var > 0:
        z = (est - p) / var ** 0.5
    else:
        z = 0.0 if est == p else float("inf")
    return MonteCarloResult(est, var ** 0.5, exact, z, trials, seed)


# ---------------------------------------------------------------------------
# root scatter


def _scatter_rows(records: Iterable[SurveyRecord]) -> list[tuple]:
    rows = []
    for r in records:
        for z in r.roots.complex_roots:
            rows.append((r.key, r.n, z.re, z.im, z.multiplicity))
        if r.roots.trivial_root_one_multiplicity:
            rows.append((r.key, r.n, mpmath.mpf(1), mpmath.mpf(0),
                         r.roots.trivial_root_one_multiplicity))
    return rows


def emit_root_scatter(records: Sequence[SurveyRecord], path: str | Path,
                      size: int = 800) -> tuple[Path, Path]:
    """Write ``<path>.csv`` (one row per graph and distinct root) and an SVG
    scatter with the unit circle and radius-1/(n-1) circles overlaid."""
    if not records:
        raise DomainError("no records to plot")
    rows = _scatter_rows(records)
    base = Path(path)
    if base.suffix in (".csv", ".svg"):
        base = base.with_suffix("")
    csv_path, svg_path = base.with_suffix(".csv"), base.with_suffix(".svg")
    lines = ["graph_key,n,re,im,modulus,multiplicity"]
    pts = []
    for key, n, re, im, mult in rows:
        with mpmath.workdps(40):
            mod = mpmath.hypot(re, im)
        lines.append(f"{key},{n},{dec(re)},{dec(im)},{dec(mod)},{mult}")
        pts.append((float(re), float(im)))
    orders = sorted({r.n for r in records if r.n >= 2})

    extent = max(1.1, max(max(abs(x), abs(y)) for x, y in pts) * 1.05)
    half = size / 2
    scale = (half - 20) / extent

    def px(x, y):
        return half + x * scale, half - y * scale

    seen = set()
    marks = []
    for x, y in pts:
        cx, cy = px(x, y)
        key = (round(cx, 1), round(cy, 1))
        if key in seen:
            continue
        seen.add(key)
        marks.append(f'<circle cx="{key[0]:.1f}" cy="{key[1]:.1f}" r="1.2"/>')
    marks.sort()
    svg = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="0" y1="{half:.1f}" x2="{size}" y2="{half:.1f}" stroke="#999" stroke-width="0.5"/>',
        f'<line x1="{half:.1f}" y1="0" x2="{half:.1f}" y2="{size}" stroke="#999" stroke-width="0.5"/>',
        f'<circle cx="{half:.1f}" cy="{half:.1f}" r="{scale:.3f}" fill="none" '
        f'stroke="#1f77b4" stroke-width="0.8"/>',
    ]
    for n in orders:
        rad = scale / (n - 1)
        svg.append(f'<circle cx="{half:.1f}" cy="{half:.1f}" r="{rad:.3f}" fill="none" '
                   f'stroke="#d62728" stroke-width="0.8" stroke-dasharray="3,2"/>')
    svg.append('<g fill="black">')
    svg.extend(marks)
    svg.append("</g>")
    svg.append("</svg>")
    try:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        svg_path.write_text("\n".join(svg) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write scatter output at {base}: {exc}") from exc
    return csv_path, svg_path
