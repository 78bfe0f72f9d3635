"""Command-line interface: ``nbclique {stats,ndp,bounds,mine,verify}``."""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import metrics, miner, theory
from .graph import EdgeListError, Graph, degree_stats, read_edge_list

log = logging.getLogger("nbclique")

COMMANDS = ("stats", "ndp", "bounds", "mine", "verify")


class CLIError(Exception):
    """A user-facing failure; reported on stderr with exit status 1."""


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    format: str = "json"
    threads: int = 1
    alpha_grid: list[Fraction] = field(default_factory=lambda: list(miner.DEFAULT_ALPHAS))
    beta: list[float] = field(default_factory=list)
    strategy: str = "all"
    t_max: int = 50
    c_g: float | None = None
    d_min: int | None = None
    d_max: int | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise CLIError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise CLIError(f"unknown format {self.format!r}")
        for a in self.alpha_grid:
            if not 0 < a <= 1:
                raise CLIError(f"alpha {a} outside (0, 1]")
        for b in self.beta:
            if not 0 < b < 1:
                raise CLIError(f"beta {b} outside (0, 1)")
        if self.t_max < 1:
            raise CLIError("--tmax must be at least 1")
        if self.threads < 1:
            raise CLIError("--threads must be at least 1")


def _num(x):
    """Ratios to 6 significant digits; integers and None unchanged."""
    if x is None or isinstance(x, (bool, int, np.integer)):
        return int(x) if isinstance(x, np.integer) else x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def _csv_text(rows: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: "" if row.get(k) is None else row.get(k) for k in header})
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output_path:
        Path(cfg.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load(cfg: RunConfig) -> Graph:
    if not cfg.input_path:
        raise CLIError("--input is required")
    try:
        g = read_edge_list(cfg.input_path)
    except OSError as exc:
        raise CLIError(f"cannot read {cfg.input_path}: {exc.strerror or exc}") from exc
    except (EdgeListError, UnicodeDecodeError) as exc:
        raise CLIError(f"{cfg.input_path}: {exc}") from exc
    log.info("loaded %s: n=%d m=%d", cfg.input_path, g.n, g.m)
    return g


def cmd_stats(cfg: RunConfig) -> dict:
    g = _load(cfg)
    vm, gm = metrics.vertex_metrics(g)
    stats = degree_stats(g)
    s = g.summary
    out = {
        "n": g.n,
        "m": g.m,
        "d_max": stats.d_max,
        "d_min": stats.d_min,
        "C_g": _num(gm.global_cc),
        "C_bar": _num(gm.mean_local_cc),
        "total_triangles": gm.total_triangles,
        "total_wedges": gm.total_wedges,
        "missing_degree_count": stats.missing_degree_count,
        "power_law_slope": _num(theory.fit_power_law_slope(stats)),
        "self_loops_dropped": s.self_loops_dropped if s else 0,
        "duplicates_dropped": s.duplicates_dropped if s else 0,
    }
    if cfg.format == "csv":
        _emit(cfg, _csv_text([out], list(out)))
    else:
        _emit(cfg, _json_text(out))
    return out


NDP_HEADER = ["degree", "log10_degree", "max_density", "witness_id"]


def cmd_ndp(cfg: RunConfig) -> dict:
    g = _load(cfg)
    vm, gm = metrics.vertex_metrics(g)
    prof = metrics.ndp(g, vm, gm)
    if not prof.entries:
        raise CLIError("graph has no vertex of degree >= 2; profile is empty")
    rows = [
        {
            "degree": e.degree,
            "log10_degree": _num(math.log10(e.degree)),
            "max_density": _num(e.max_density),
            "witness_id": g.label(e.witness),
        }
        for e in prof.entries
    ]
    summary = {
        "d_max": prof.d_max,
        "C_g": _num(prof.global_cc),
        "largest_ego_clique_size": metrics.largest_ego_clique_size(vm),
    }
    if cfg.output_path:
        out = Path(cfg.output_path)
        out.write_text(_csv_text(rows, NDP_HEADER), encoding="utf-8")
        out.with_suffix(".json").write_text(_json_text(summary), encoding="utf-8")
    elif cfg.format == "csv":
        sys.stdout.write(_csv_text(rows, NDP_HEADER))
    else:
        sys.stdout.write(_json_text({"summary": summary, "entries": rows}))
    return summary


def default_alpha_grid() -> list[float]:
    """Steps of 1/60 on [0, 1], which include 2/3 exactly."""
    return [float(Fraction(k, 60)) for k in range(61)]


def default_beta_grid(c_g: float, d_min: int, d_max: int, points: int = 20) -> list[float]:
    lo = d_min / d_max
    bmax = theory.beta_max(c_g, d_min, d_max)
    if bmax is None:
        raise CLIError(
            f"no admissible beta: eta >= C_g={c_g:.6g} already at beta=d_min/d_max={lo:.6g}"
        )
    start = 0.05 if lo < 0.05 < bmax else lo + (bmax - lo) / (points + 1)
    return np.linspace(start, bmax, points, endpoint=False).tolist()


def cmd_bounds(cfg: RunConfig) -> dict:
    g = vm = None
    annotations = {}
    if cfg.input_path:
        g = _load(cfg)
        vm, gm = metrics.vertex_metrics(g)
        stats = degree_stats(g)
        c_g = gm.global_cc if cfg.c_g is None else cfg.c_g
        d_min = stats.d_min if cfg.d_min is None else cfg.d_min
        d_max = stats.d_max if cfg.d_max is None else cfg.d_max
        slope = theory.fit_power_law_slope(stats)
        annotations = {
            "missing_degree_count": stats.missing_degree_count,
            "power_law_slope": _num(slope),
            "exponent_deviation": _num(None if slope is None else abs(-slope - 2.0)),
        }
    else:
        if cfg.c_g is None or cfg.d_min is None or cfg.d_max is None:
            raise CLIError("bounds needs --input or all of --cg, --dmin, --dmax")
        c_g, d_min, d_max = cfg.c_g, cfg.d_min, cfg.d_max
    if d_min is None:
        raise CLIError("graph has no vertex of degree >= 2")
    try:
        betas = cfg.beta or default_beta_grid(c_g, d_min, d_max)
        beta_rows = theory.beta_sweep(c_g, d_min, d_max, betas)
        alpha_rows = theory.alpha_sweep(c_g, default_alpha_grid())
        report = theory.neighborhood_guarantee(c_g, d_min, d_max, beta_rows[0]["beta"])
    except theory.BoundDomainError as exc:
        raise CLIError(str(exc)) from exc

    alpha_rows = [{k: _num(v) for k, v in r.items()} for r in alpha_rows]
    beta_rows = [{k: _num(v) for k, v in r.items()} for r in beta_rows]
    summary = {
        "report": {k: _num(v) for k, v in report.to_dict().items()},
        "assumptions": annotations,
    }
    degree_rows = []
    if g is not None and d_max > d_min:
        degree_rows = [
            {k: (v if isinstance(v, bool) else _num(v)) for k, v in r.items()}
            for r in theory.degree_bound_profile(g, vm, c_g)
        ]
        wit = theory.neighborhood_guarantee_witness(g, vm, c_g, beta_rows[0]["beta"])
        summary["witness"] = {
            "beta": _num(wit.beta),
            "size_guarantee": _num(wit.size_guarantee),
            "density_guarantee": _num(wit.density_guarantee),
            "found": wit.found,
            "witness_id": None if wit.witness is None else g.label(wit.witness),
            "witness_degree": wit.witness_degree,
            "witness_density": _num(wit.witness_density),
        }
        if not wit.found:
            log.warning("no neighborhood meets the guarantee at beta=%s", wit.beta)
    if cfg.output_path:
        out = Path(cfg.output_path)
        out.mkdir(parents=True, exist_ok=True)
        (out / "alpha_sweep.csv").write_text(
            _csv_text(alpha_rows, ["alpha", "markov_upper", "lower_tail"]), encoding="utf-8"
        )
        (out / "beta_sweep.csv").write_text(
            _csv_text(beta_rows, ["beta", "eta", "size_guarantee", "density_guarantee"]),
            encoding="utf-8",
        )
        if degree_rows:
            (out / "degree_bounds.csv").write_text(
                _csv_text(degree_rows, ["degree", "beta", "eta", "density_guarantee", "max_density", "violates"]),
                encoding="utf-8",
            )
        (out / "bounds.json").write_text(_json_text(summary), encoding="utf-8")
    else:
        sys.stdout.write(
            _json_text({**summary, "alpha_sweep": alpha_rows, "beta_sweep": beta_rows, "degree_bounds": degree_rows})
        )
    return summary


REPORT_HEADER = [
    "algorithm", "alpha", "strategy", "center", "size", "e", "delta", "tau",
    "surplus", "is_clique", "is_maximal", "termination", "best",
]


def report_to_dict(g: Graph, r: miner.SubgraphReport, best: str | None = None) -> dict:
    seed = None
    if r.seed is not None:
        seed = {
            "center": None if r.seed.center is None else g.label(r.seed.center),
            "strategy": r.seed.strategy,
        }
    return {
        "algorithm": r.algorithm,
        "alpha": _num(float(r.alpha)),
        "seed": seed,
        "members": [g.label(v) for v in r.members],
        "size": r.size,
        "e": r.edges,
        "delta": _num(r.density),
        "tau": _num(r.triangle_density),
        "surplus": _num(r.surplus),
        "is_clique": r.is_clique,
        "is_maximal": r.is_maximal_clique,
        "termination": r.termination,
        "best": best,
    }


def cmd_mine(cfg: RunConfig) -> list[dict]:
    try:
        g = _load(cfg)
    except CLIError as exc:
        if isinstance(exc.__cause__, EdgeListError) and exc.__cause__.lineno is None:
            log.warning("%s; writing an empty report", exc)
            _emit(cfg, "[]\n" if cfg.format == "json" else ",".join(REPORT_HEADER) + "\n")
            return []
        raise
    plan = miner.MiningPlan(
        strategy=cfg.strategy, alphas=tuple(cfg.alpha_grid), t_max=cfg.t_max, threads=cfg.threads
    )
    result = miner.mine(g, plan)
    rows = []
    for i, (_, r) in enumerate(result.reports):
        best = "clique" if i == result.best_clique else "quasi-clique" if i == result.best_quasi_clique else None
        rows.append(report_to_dict(g, r, best))
    if cfg.format == "csv":
        flat = [
            {**row, "strategy": (row["seed"] or {}).get("strategy"), "center": (row["seed"] or {}).get("center")}
            for row in rows
        ]
        _emit(cfg, _csv_text(flat, REPORT_HEADER))
    else:
        _emit(cfg, _json_text(rows))
    return rows


def _brute_force_triangles(g: Graph) -> np.ndarray:
    adj = g.adjacency_sets()
    tri = np.zeros(g.n, dtype=np.int64)
    for a, b, c in itertools.combinations(range(g.n), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            tri[[a, b, c]] += 1
    return tri


def cmd_verify(cfg: RunConfig) -> list[dict]:
    g = _load(cfg)
    checks = []

    def check(name, passed, detail=None, counterexample=None):
        checks.append(
            {"name": name, "passed": bool(passed), "detail": detail, "counterexample": counterexample}
        )

    deg = g.degrees
    check("handshake", int(deg.sum()) == 2 * g.m, f"sum of degrees={int(deg.sum())}, 2m={2 * g.m}")
    try:
        g.validate()
        check("simple_graph", True)
    except AssertionError as exc:
        check("simple_graph", False, str(exc))

    tc = metrics.count_triangles(g)
    if g.n <= 64:
        oracle, how = _brute_force_triangles(g), "all-triples enumeration"
    else:
        oracle, how = metrics.neighborhood_edge_counts(g), "sparse (A@A)*A product"
    bad = np.flatnonzero(oracle != tc.per_vertex)
    check("triangle_oracle", len(bad) == 0, how, None if len(bad) == 0 else g.label(int(bad[0])))

    vm, gm = metrics.vertex_metrics(g, tc)
    check(
        "closed_wedge_total",
        3 * gm.total_triangles == int(vm.closed_wedges.sum()),
        "3 * triangles == sum of closed wedges",
    )
    viol = metrics.local_cc_density_violations(g, vm)
    check("neighborhood_density_equals_local_cc", not viol, f"{len(viol)} violations",
          g.label(viol[0]) if viol else None)
    resid = metrics.wedge_identity_residual(vm, gm)
    check("wedge_weighted_mean_equals_global_cc", resid <= 1e-12, f"residual={resid:.3e}")

    not_max = [ec.center for ec in metrics.find_ego_cliques(g, 2, vm) if not ec.maximal]
    check("ego_cliques_maximal", not not_max, f"{len(not_max)} non-maximal",
          g.label(not_max[0]) if not_max else None)

    prof = metrics.ndp(g, vm, gm)
    stale = [e.witness for e in prof.entries
             if vm.degree[e.witness] != e.degree or vm.local_cc[e.witness] != e.max_density]
    check("ndp_witnesses", not stale, f"{len(prof.entries)} entries", g.label(stale[0]) if stale else None)

    _emit(cfg, _json_text(checks))
    failed = [c["name"] for c in checks if not c["passed"]]
    if failed:
        raise CLIError("invariant violations: " + ", ".join(failed))
    return checks


def _fraction(text: str) -> Fraction:
    try:
        r = Fraction(text) if "/" in text else miner.as_ratio(float(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad ratio {text!r}") from exc
    return r


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", dest="input_path", help="edge-list file (.gz ok)")
    common.add_argument("--output", "-o", dest="output_path", help="output file (directory for bounds)")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="output format (default json)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for mining")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(prog="nbclique", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("stats", parents=[common], help="graph statistics")
    sub.add_parser("ndp", parents=[common], help="neighborhood density profile")
    b = sub.add_parser("bounds", parents=[common], help="density bound curves")
    b.add_argument("--beta", type=float, action="append", default=[], metavar="BETA",
                   help="degree fraction for the guarantee; repeatable")
    b.add_argument("--cg", dest="c_g", type=float, help="global clustering coefficient, used without --input")
    b.add_argument("--dmin", dest="d_min", type=int, help="minimum degree, used without --input")
    b.add_argument("--dmax", dest="d_max", type=int, help="maximum degree, used without --input")
    mn = sub.add_parser("mine", parents=[common], help="mine cliques and quasi-cliques")
    mn.add_argument("--strategy", default="all", choices=(*miner.STRATEGIES, "all"),
                    help="strategy to run (default all)")
    mn.add_argument("--alpha", dest="alpha_grid", type=_fraction, action="append", metavar="ALPHA",
                    help="density target in (0, 1], e.g. 0.8 or 2/3; repeatable")
    mn.add_argument("--tmax", dest="t_max", type=int, default=50, metavar="N",
                    help="local-search outer iteration cap (default 50)")
    sub.add_parser("verify", parents=[common], help="check invariants on a graph")
    return parser


HANDLERS = {
    "stats": cmd_stats,
    "ndp": cmd_ndp,
    "bounds": cmd_bounds,
    "mine": cmd_mine,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    opts = {k: v for k, v in vars(args).items() if k != "verbose" and v is not None}
    try:
        cfg = RunConfig(**opts)
        HANDLERS[cfg.command](cfg)
    except CLIError as exc:
        print(f"nbclique {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
