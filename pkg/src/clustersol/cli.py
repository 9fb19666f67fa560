"""Command-line entry points: analyze, oracle, compare, render.

Exit codes: 0 ok, 1 usage or parse failure, 2 inapplicable input,
3 internal error.  All output is deterministic for fixed inputs and
seeds; the JSON schema is

    {curve, p, tower: {d, e, prec}, picture, invariants[], conditions[],
     component_verdict, solubility, convention_markers[], oracle?}
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .clusters import analyse
from .corpus import generate_corpus
from .curves import (expand_to_integer_poly, galois_closure_check, parse_expr,
                     read_curve_file)
from .decision import CONDITION_IDS, solubility_decide
from .errors import ClusterSolError, InternalError, ParseError
from .oracle import is_locally_soluble
from .render import render_ascii, render_latex


@dataclass
class RunConfig:
    command: str
    expr: str = None
    curve_file: str = None
    p: int = None
    prec: int = None
    as_json: bool = False
    fmt: str = "ascii"
    max_level: int = None
    seed: int = 0
    count: int = 0
    p_list: tuple = ()
    genus_range: tuple = (2, 4)
    jobs: int = 1


def _invariant_row(rec):
    return {
        "name": rec.name,
        "roots": [r + 1 for r in rec.roots],
        "size": rec.size,
        "d": str(rec.depth),
        "delta": None if rec.delta is None else str(rec.delta),
        "nu": str(rec.nu),
        "lambda": str(rec.lam),
        "e": rec.e,
        "genus": rec.genus,
        "vKc": str(rec.vKc),          # convention value, see markers
        "parity": "even" if rec.is_even else "odd",
        "flags": {
            "ubereven": rec.ubereven,
            "twin": rec.twin,
            "cotwin": rec.cotwin,
            "principal": rec.principal,
        },
        "fixed": {
            "inertia": rec.fixed_inertia,
            "frobenius": rec.fixed_frob,
            "galois": rec.fixed_galois,
        },
        "orbit": rec.orbit,
        "epsilon": None if rec.eps_tau == 0 else
                   {"tau": rec.eps_tau, "frob": rec.eps_frob},
        "stable_children": [c.name or f"r{c.roots[0] + 1}"
                            for c in rec.stable_children],
    }


def build_report(expr, verdict, analysis, oracle_result=None):
    reports = verdict.reports
    markers = sorted(cid for cid in CONDITION_IDS if reports[cid].convention_marker)
    out = {
        "curve": expr.text,
        "p": expr.p,
        "tower": {"d": analysis.tower.d, "e": analysis.tower.e,
                  "prec": analysis.tower.prec},
        "picture": analysis.picture.serialize(),
        "invariants": [_invariant_row(analysis.inv[n])
                       for n in analysis.picture.proper()],
        "conditions": [{
            "id": cid,
            "satisfied": reports[cid].satisfied,
            "witnesses": reports[cid].witnesses,
            "consumed": reports[cid].consumed,
            "convention_marker": reports[cid].convention_marker,
        } for cid in CONDITION_IDS],
        "component_verdict": "yes" if verdict.component_yes else "no",
        "solubility": verdict.status,
        "reasons": verdict.reasons,
        "odd_degree_shortcut": verdict.odd_degree_shortcut,
        "convention_markers": markers,
    }
    if oracle_result is not None:
        out["oracle"] = {
            "soluble": oracle_result.soluble,
            "witness": oracle_result.witness,
            "nodes_explored": oracle_result.nodes_explored,
            "max_level_reached": oracle_result.max_level_reached,
            "status": oracle_result.status,
        }
    return out


def _print_text_report(rep):
    print(f"curve:   {rep['curve']}   (p = {rep['p']})")
    t = rep["tower"]
    print(f"tower:   d = {t['d']}, e = {t['e']}, prec = {t['prec']} pi-digits")
    print(f"picture: {rep['picture']}")
    print("clusters:")
    for row in rep["invariants"]:
        eps = row["epsilon"]
        eps_s = f" eps(tau)={eps['tau']:+d} eps(frob)={eps['frob']:+d}" if eps else ""
        flags = ",".join(k for k, v in row["flags"].items() if v) or "-"
        fixed = ",".join(k for k, v in row["fixed"].items() if v) or "none"
        print(f"  {row['name']:>3}: size {row['size']}  d={row['d']}  nu={row['nu']}"
              f"  lambda={row['lambda']}  e={row['e']}  g={row['genus']}"
              f"  vKc={row['vKc']}  [{flags}] fixed:{fixed}{eps_s}")
    fired = [c["id"] for c in rep["conditions"] if c["satisfied"]]
    print(f"conditions satisfied: {', '.join(fired) if fired else 'none'}")
    for c in rep["conditions"]:
        if c["satisfied"] or c["consumed"]:
            mark = "  [convention]" if c["convention_marker"] else ""
            print(f"  ({c['id']}) {'SAT' if c['satisfied'] else 'not satisfied'} "
                  f"witnesses={c['witnesses']} {c['consumed']}{mark}")
    print(f"component of multiplicity 1 fixed by Frobenius: {rep['component_verdict']}")
    print(f"verdict: {rep['solubility']}")
    if rep["convention_markers"]:
        print(f"convention-dependent conditions: {', '.join(rep['convention_markers'])}")
    if "oracle" in rep:
        o = rep["oracle"]
        print(f"oracle:  soluble={o['soluble']} witness={o['witness']} "
              f"({o['nodes_explored']} classes explored)")


def cmd_analyze(cfg):
    jobs = []
    if cfg.curve_file:
        p, exprs = read_curve_file(cfg.curve_file)
        jobs = [(p, e) for e in exprs]
    else:
        jobs = [(cfg.p, cfg.expr)]
    reports = []
    status = 0
    for p, text in jobs:
        expr = parse_expr(text, p)
        galois_closure_check(expr)
        verdict, analysis = solubility_decide(expr, prec=cfg.prec)
        reports.append(build_report(expr, verdict, analysis))
        if verdict.status == "Inapplicable":
            status = 2
    if cfg.as_json:
        print(json.dumps(reports[0] if len(reports) == 1 else reports, indent=2))
    else:
        for i, rep in enumerate(reports):
            if i:
                print("-" * 60)
            _print_text_report(rep)
    return status


def cmd_oracle(cfg):
    expr = parse_expr(cfg.expr, cfg.p)
    galois_closure_check(expr)
    poly = expand_to_integer_poly(expr)
    res = is_locally_soluble(poly, cfg.p, max_level=cfg.max_level)
    if cfg.as_json:
        print(json.dumps({"curve": expr.text, "p": cfg.p, "f": [str(c) for c in poly],
                          "soluble": res.soluble, "witness": res.witness,
                          "nodes_explored": res.nodes_explored,
                          "max_level_reached": res.max_level_reached,
                          "status": res.status}, indent=2))
    else:
        print(f"f = {poly}")
        print(f"soluble over Q_{cfg.p}: {res.soluble}  (status: {res.status})")
        if res.witness:
            print(f"witness: {res.witness}")
        print(f"classes explored: {res.nodes_explored}, "
              f"deepest level: {res.max_level_reached}")
    return 0


def _compare_one(args):
    p, text = args
    expr = parse_expr(text, p)
    verdict, analysis = solubility_decide(expr)
    oracle_res = is_locally_soluble(expand_to_integer_poly(expr), p)
    return {
        "p": p,
        "curve": text,
        "theorem": verdict.status,
        "fired": verdict.fired,
        "convention": verdict.convention_dependent,
        "oracle": oracle_res.soluble,
        "oracle_status": oracle_res.status,
    }


def cmd_compare(cfg):
    pairs = generate_corpus(cfg.seed, cfg.count, list(cfg.p_list),
                            genus_range=cfg.genus_range)
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_compare_one, pairs))
    else:
        rows = [_compare_one(pair) for pair in pairs]
    matrix = {"soluble/soluble": 0, "insoluble/insoluble": 0}
    disagreements, quarantined, inconclusive = [], [], []
    coverage = {cid: 0 for cid in CONDITION_IDS}
    for row in rows:
        for cid in row["fired"]:
            coverage[cid] += 1
        if row["oracle"] is None:
            inconclusive.append(row)
            continue
        th = row["theorem"] == "Soluble"
        if th == row["oracle"]:
            key = "soluble/soluble" if th else "insoluble/insoluble"
            matrix[key] += 1
        elif row["convention"]:
            quarantined.append(row)
        else:
            disagreements.append(row)
    report = {
        "seed": cfg.seed,
        "count": len(rows),
        "p_list": list(cfg.p_list),
        "agreement_matrix": matrix,
        "agreements": matrix["soluble/soluble"] + matrix["insoluble/insoluble"],
        "disagreements": disagreements,
        "quarantined_convention_disagreements": quarantined,
        "oracle_inconclusive": inconclusive,
        "condition_coverage": coverage,
    }
    if cfg.as_json:
        print(json.dumps(report, indent=2))
    else:
        print(f"compare: seed={cfg.seed} count={len(rows)} p in {list(cfg.p_list)}")
        print(f"  agree: {report['agreements']}/{len(rows)} "
              f"(soluble {matrix['soluble/soluble']}, "
              f"insoluble {matrix['insoluble/insoluble']})")
        print(f"  disagreements: {len(disagreements)}, "
              f"quarantined (convention): {len(quarantined)}, "
              f"inconclusive: {len(inconclusive)}")
        for row in disagreements + quarantined:
            print(f"    p={row['p']} {row['curve']}: theorem={row['theorem']} "
                  f"fired={row['fired']} oracle={row['oracle']}")
        fired_counts = {k: v for k, v in coverage.items() if v}
        print(f"  condition coverage: {fired_counts}")
    return 0


def cmd_render(cfg):
    expr = parse_expr(cfg.expr, cfg.p)
    galois_closure_check(expr)
    analysis = analyse(expr, prec=cfg.prec)
    if cfg.fmt == "latex":
        print(render_latex(analysis.picture))
    else:
        print(render_ascii(analysis.picture))
    return 0


def _parse_args(argv):
    top = argparse.ArgumentParser(prog="clustersol",
                                  description="Local solubility of tame hyperelliptic "
                                              "curves via cluster pictures")
    sub = top.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="full cluster-picture analysis and verdict")
    src = an.add_mutually_exclusive_group(required=True)
    src.add_argument("--curve", help="curve file with a 'p = <int>' header")
    src.add_argument("--expr", help="inline curve expression")
    an.add_argument("--p", type=int, help="prime (required with --expr)")
    an.add_argument("--prec", type=int, help="pi-adic working precision override")
    an.add_argument("--json", action="store_true")

    orc = sub.add_parser("oracle", help="brute-force point search over Q_p")
    orc.add_argument("--expr", required=True)
    orc.add_argument("--p", type=int, required=True)
    orc.add_argument("--max-level", type=int)
    orc.add_argument("--json", action="store_true")

    cmp_ = sub.add_parser("compare", help="random corpus: theorem vs oracle")
    cmp_.add_argument("--seed", type=int, required=True)
    cmp_.add_argument("--count", type=int, required=True)
    cmp_.add_argument("--p-list", required=True,
                      help="comma-separated odd primes, e.g. 7,11,17")
    cmp_.add_argument("--genus", default="2..4", help="genus range lo..hi")
    cmp_.add_argument("--jobs", type=int, default=1)
    cmp_.add_argument("--json", action="store_true")

    ren = sub.add_parser("render", help="render the cluster picture")
    ren.add_argument("--expr", required=True)
    ren.add_argument("--p", type=int, required=True)
    ren.add_argument("--prec", type=int)
    ren.add_argument("--format", choices=("ascii", "latex"), default="ascii")

    ns = top.parse_args(argv)
    cfg = RunConfig(command=ns.command)
    if ns.command == "analyze":
        cfg.curve_file = ns.curve
        cfg.expr = ns.expr
        cfg.p = ns.p
        cfg.prec = ns.prec
        cfg.as_json = ns.json
        if cfg.expr and cfg.p is None:
            top.error("--p is required with --expr")
        if cfg.curve_file and cfg.p is not None:
            top.error("--p conflicts with --curve (the file header sets p)")
    elif ns.command == "oracle":
        cfg.expr, cfg.p, cfg.max_level = ns.expr, ns.p, ns.max_level
        cfg.as_json = ns.json
    elif ns.command == "compare":
        cfg.seed, cfg.count = ns.seed, ns.count
        cfg.p_list = tuple(int(x) for x in ns.p_list.split(","))
        lo, _, hi = ns.genus.partition("..")
        cfg.genus_range = (int(lo), int(hi or lo))
        cfg.jobs = ns.jobs
        cfg.as_json = ns.json
    elif ns.command == "render":
        cfg.expr, cfg.p, cfg.fmt, cfg.prec = ns.expr, ns.p, ns.format, ns.prec
    return cfg


def main(argv=None):
    try:
        cfg = _parse_args(argv)
    except SystemExit as ex:
        return 1 if ex.code not in (0, None) else 0
    try:
        if cfg.command == "analyze":
            return cmd_analyze(cfg)
        if cfg.command == "oracle":
            return cmd_oracle(cfg)
        if cfg.command == "compare":
            return cmd_compare(cfg)
        if cfg.command == "render":
            return cmd_render(cfg)
        return 1
    except (ParseError,) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except InternalError as ex:
        print(f"internal error: {ex}", file=sys.stderr)
        return 3
    except ClusterSolError as ex:
        print(f"error ({type(ex).__name__}): {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
