"""Command-line front end and report serialization.

Every subcommand fills the same report skeleton (group, q, lattice,
alpha, aut, bounds, oracle, meta); unused sections stay null.  JSON
output is emitted with sorted keys so that parse + re-serialize is
byte-identical, and all potentially large orders are decimal strings.

Exit codes: 0 success, 2 parse error, 3 capacity/budget exhausted,
4 oracle/formula cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .automata import (
    DEFAULT_RULE_BUDGET,
    count_automorphisms,
)
from .bounds import (
    chain_growth_demo,
    cyclic_rank_interval,
    dedekind_end_upper_bound,
    dedekind_upper_bound,
    dihedral_rank_interval,
    general_upper_bound,
    permutation_upper_bound,
    rank_lower_bound,
)
from .errors import (
    BudgetExceededError,
    CapacityError,
    CrossCheckError,
    SpecParseError,
)
from .groups import (
    DEFAULT_MAX_ORDER,
    DEFAULT_RANK_MAX_SIZE,
    FiniteGroup,
    construct_group,
    dihedral_group,
    group_from_cayley_file,
    group_rank_bruteforce,
    is_isomorphic,
)
from .lattice import (
    DEFAULT_LATTICE_MAX_ORDER,
    enumerate_lattice,
    lattice_stats,
)
from .structure import (
    DEFAULT_CENSUS_BUDGET,
    aut_decomposition,
    orbit_census,
    orbit_census_bruteforce,
)


def decimal_str(n: int) -> str:
    """Exact decimal form of an arbitrarily large integer."""
    try:
        import gmpy2
        return gmpy2.mpz(n).digits(10)
    except ImportError:
        if hasattr(sys, "set_int_max_str_digits"):
            needed = n.bit_length() // 3 + 16
            if needed > sys.get_int_max_str_digits():
                sys.set_int_max_str_digits(needed)
        return str(n)


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--max-order", type=int, default=None,
                        help="override construction and lattice capacity")
    common.add_argument("--census-budget", type=int, default=DEFAULT_CENSUS_BUDGET,
                        help="max configurations for the brute-force census")
    common.add_argument("--threads", type=int, default=1,
                        help="worker pool size (results are identical for any value)")

    spec_parent = argparse.ArgumentParser(add_help=False, parents=[common])
    spec_parent.add_argument("spec", nargs="?", help="group spec, e.g. C6, D8, Q8, C2wrS3")
    spec_parent.add_argument("--cayley", metavar="FILE", default=None,
                             help="read the group from a Cayley-table file instead")

    q_parent = argparse.ArgumentParser(add_help=False)
    q_parent.add_argument("--q", type=int, default=2, help="alphabet size (>= 2)")

    parser = argparse.ArgumentParser(
        prog="shiftrank",
        description="Automorphism groups of full shifts over finite groups: "
                    "structure, orbit censuses, certified rank bounds, and "
                    "brute-force verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("group", parents=[spec_parent],
                   help="order, abelian/Dedekind flags, rank if in budget")
    lat = sub.add_parser("lattice", parents=[spec_parent],
                         help="subgroup lattice, classes and class counts")
    lat.add_argument("--mobius", action="store_true",
                     help="include the full Möbius matrix")
    sub.add_parser("alpha", parents=[spec_parent, q_parent],
                   help="orbit counts per stabilizer conjugacy class")
    sub.add_parser("aut", parents=[spec_parent, q_parent],
                   help="wreath decomposition of Aut(A^G) and its exact order")
    sub.add_parser("bounds", parents=[spec_parent, q_parent],
                   help="all applicable rank bounds with provenance")
    sub.add_parser("oracle", parents=[spec_parent, q_parent],
                   help="brute-force census + automorphism count vs the formulas")
    chain = sub.add_parser("chain", parents=[common],
                           help="lower-bound growth along a quotient chain")
    chain.add_argument("--family", default="c2pow", help="chain family name")
    chain.add_argument("--depth", type=int, default=4)
    chain.add_argument("--q", type=int, default=2)
    return parser


def _empty_report(command: str, args) -> dict:
    return {
        "group": None,
        "q": None,
        "lattice": None,
        "alpha": None,
        "aut": None,
        "bounds": None,
        "oracle": None,
        "meta": {
            "version": __version__,
            "command": command,
            "max_order": args.max_order if args.max_order else DEFAULT_MAX_ORDER,
            "lattice_capacity": args.max_order if args.max_order else DEFAULT_LATTICE_MAX_ORDER,
            "census_budget": args.census_budget,
            "rule_budget": DEFAULT_RULE_BUDGET,
            "threads": args.threads,
        },
    }


def _resolve_group(args) -> FiniteGroup:
    cap = args.max_order if args.max_order else DEFAULT_MAX_ORDER
    if getattr(args, "cayley", None):
        if args.spec:
            raise SpecParseError("give a spec or --cayley, not both")
        group = group_from_cayley_file(args.cayley)
        if group.order > cap:
            raise CapacityError(
                f"Cayley file group order {group.order} exceeds capacity {cap}")
        return group
    if not args.spec:
        raise SpecParseError("missing group spec (or --cayley FILE)")
    return construct_group(args.spec, max_order=cap)


def _lattice_cap(args) -> int:
    return args.max_order if args.max_order else DEFAULT_LATTICE_MAX_ORDER


def _check_q(q: int) -> int:
    if q < 2:
        raise SpecParseError("alphabet size --q must be >= 2")
    return q


# -- report sections ---------------------------------------------------------


def _group_section(group: FiniteGroup, args) -> dict:
    rank = None
    rank_note = None
    try:
        rank = group_rank_bruteforce(group, max_size=DEFAULT_RANK_MAX_SIZE)
    except BudgetExceededError as exc:
        rank_note = str(exc)
    dedekind = None
    dedekind_note = None
    if group.order <= _lattice_cap(args):
        stats = lattice_stats(enumerate_lattice(group, max_order=_lattice_cap(args)),
                              with_srank=False)
        dedekind = stats.is_dedekind
    else:
        dedekind_note = "order exceeds lattice capacity"
    section = {
        "label": group.label,
        "order": group.order,
        "abelian": group.is_abelian(),
        "cyclic": group.is_cyclic(),
        "dedekind": dedekind,
        "rank": rank,
    }
    if rank_note:
        section["rank_note"] = rank_note
    if dedekind_note:
        section["dedekind_note"] = dedekind_note
    return section


def _lattice_section(lat, stats, with_mobius: bool = False) -> dict:
    section = {
        "subgroup_count": len(lat),
        "subgroups": [sorted(lat.members(i)) for i in range(len(lat))],
        "normalizers": [sorted(s.members) for s in lat.normalizers],
        "classes": [list(c) for c in lat.classes],
        "class_representatives": list(lat.class_reps),
        "r": stats.r,
        "r_by_index": {str(k): v for k, v in sorted(stats.r_by_index.items())},
        "r_p": stats.r_p,
        "is_dedekind": stats.is_dedekind,
        "length": stats.length,
        "srank": stats.srank,
    }
    if with_mobius:
        matrix = []
        for h in range(len(lat)):
            row = [lat.mobius(h, k) if lat.leq(h, k) else None
                   for k in range(len(lat))]
            matrix.append(row)
        section["mobius"] = matrix
    return section


def _alpha_section(profile) -> dict:
    return {
        "entries": [
            {
                "class": e.class_id,
                "index": e.index,
                "orbits": decimal_str(e.orbit_count),
                "quotient_order": e.quotient.order,
            }
            for e in profile.entries
        ],
        "total_orbits": decimal_str(sum(e.orbit_count for e in profile.entries)),
    }


def _aut_section(decomp) -> dict:
    return {
        "factors": [
            {
                "class": cid,
                "quotient_order": quot.order,
                "degree": decimal_str(deg),
            }
            for cid, (quot, deg) in enumerate(decomp.factors)
        ],
        "order": decimal_str(decomp.order),
    }


def _interval_json(iv) -> dict:
    return {
        "lower": iv.lower,
        "upper": iv.upper if iv.upper is not None else "unbounded",
        "lower_source": iv.lower_source,
        "upper_source": iv.upper_source,
        "epsilon_slack": iv.epsilon_slack,
    }


def _bounds_rows(group: FiniteGroup, lat, stats, q: int) -> list[dict]:
    rows = []
    branch = "q=2" if q == 2 else "q>=3"

    lower = rank_lower_bound(stats, q)
    rows.append({
        "name": "lower",
        "applicable": True,
        "value": lower,
        "provenance": f"class-count-lower({branch},r={stats.r},r2={stats.r_at(2)})",
    })

    if group.is_cyclic() and group.order >= 2:
        rows.append({"name": "cyclic_interval", "applicable": True,
                     "interval": _interval_json(cyclic_rank_interval(group.order, q))})
    else:
        rows.append({"name": "cyclic_interval", "applicable": False,
                     "reason": "group is not cyclic of order >= 2"})

    is_dihedral = (group.order >= 6 and group.order % 2 == 0
                   and is_isomorphic(group, dihedral_group(group.order)))
    if is_dihedral:
        rows.append({"name": "dihedral_interval", "applicable": True,
                     "interval": _interval_json(
                         dihedral_rank_interval(group.order // 2, q))})
    else:
        rows.append({"name": "dihedral_interval", "applicable": False,
                     "reason": "group is not dihedral of order >= 6"})

    rank_g = None
    try:
        rank_g = group_rank_bruteforce(group)
    except BudgetExceededError:
        pass
    if stats.is_dedekind and rank_g is not None:
        rows.append({
            "name": "dedekind_upper", "applicable": True,
            "value": dedekind_upper_bound(stats, rank_g, q),
            "provenance": f"dedekind-upper({branch},r={stats.r},rP={stats.r_p},"
                          f"r2={stats.r_at(2)},rankG={rank_g})",
        })
        rows.append({
            "name": "dedekind_end_upper", "applicable": True,
            "value": dedekind_end_upper_bound(stats, rank_g, q),
            "provenance": f"dedekind-end-upper({branch},r={stats.r},"
                          f"rP={stats.r_p},r2={stats.r_at(2)},rankG={rank_g})",
        })
    else:
        reason = ("group is not Dedekind" if not stats.is_dedekind
                  else "rank search budget exhausted")
        rows.append({"name": "dedekind_upper", "applicable": False, "reason": reason})
        rows.append({"name": "dedekind_end_upper", "applicable": False, "reason": reason})

    log_bound = general_upper_bound(stats, group, q)
    rows.append({
        "name": "general_upper", "applicable": True,
        "value": log_bound.value, "ceiling": log_bound.ceiling,
        "provenance": log_bound.source,
    })

    import re
    m = re.fullmatch(r"S(\d+)", group.label)
    degree = int(m.group(1)) if m else group.order
    if degree > 3:
        rows.append({
            "name": "permutation_upper", "applicable": True,
            "value": permutation_upper_bound(stats, degree, q),
            "degree": degree,
            "provenance": f"halved-degree-upper({branch},r={stats.r},"
                          f"r2={stats.r_at(2)},degree={degree})",
        })
    else:
        rows.append({"name": "permutation_upper", "applicable": False,
                     "degree": degree,
                     "reason": "embedding degree must exceed 3"})
    return rows


# -- subcommand drivers ------------------------------------------------------


def _run_group(args, report) -> int:
    group = _resolve_group(args)
    report["group"] = _group_section(group, args)
    return 0


def _run_lattice(args, report) -> int:
    group = _resolve_group(args)
    lat = enumerate_lattice(group, max_order=_lattice_cap(args))
    stats = lattice_stats(lat)
    report["group"] = {"label": group.label, "order": group.order}
    report["lattice"] = _lattice_section(lat, stats, with_mobius=args.mobius)
    return 0


def _run_alpha(args, report) -> int:
    q = _check_q(args.q)
    group = _resolve_group(args)
    lat = enumerate_lattice(group, max_order=_lattice_cap(args))
    profile = orbit_census(lat, q)
    report["group"] = {"label": group.label, "order": group.order}
    report["q"] = q
    report["alpha"] = _alpha_section(profile)
    return 0


def _run_aut(args, report) -> int:
    q = _check_q(args.q)
    group = _resolve_group(args)
    lat = enumerate_lattice(group, max_order=_lattice_cap(args))
    decomp = aut_decomposition(orbit_census(lat, q))
    report["group"] = {"label": group.label, "order": group.order}
    report["q"] = q
    report["aut"] = _aut_section(decomp)
    return 0


def _run_bounds(args, report) -> int:
    q = _check_q(args.q)
    group = _resolve_group(args)
    lat = enumerate_lattice(group, max_order=_lattice_cap(args))
    stats = lattice_stats(lat)
    report["group"] = {"label": group.label, "order": group.order}
    report["q"] = q
    report["bounds"] = {"rows": _bounds_rows(group, lat, stats, q)}
    return 0


def _run_oracle(args, report) -> int:
    q = _check_q(args.q)
    group = _resolve_group(args)
    lat = enumerate_lattice(group, max_order=_lattice_cap(args))
    profile = orbit_census(lat, q)
    census = orbit_census_bruteforce(group, q, lattice=lat,
                                     budget=args.census_budget,
                                     threads=args.threads)
    census_match = profile.counts() == census.counts()
    decomp = aut_decomposition(profile)
    aut_count = count_automorphisms(group, q, threads=args.threads)
    count_match = aut_count == decomp.order
    verdict = "MATCH" if census_match and count_match else "MISMATCH"
    report["group"] = {"label": group.label, "order": group.order}
    report["q"] = q
    report["alpha"] = _alpha_section(profile)
    report["oracle"] = {
        "aut_count": decimal_str(aut_count),
        "structure_order": decimal_str(decomp.order),
        "census_counts": [
            {"class": c, "index": i, "orbits": decimal_str(n)}
            for c, i, n in census.counts()
        ],
        "census_match": census_match,
        "count_match": count_match,
        "verdict": verdict,
    }
    if verdict == "MISMATCH":
        raise CrossCheckError(
            f"oracle disagrees with formulas on {group.label}, q={q}")
    return 0


def _run_chain(args, report) -> int:
    q = _check_q(args.q)
    levels = chain_growth_demo(family=args.family, depth=args.depth, q=q)
    report["group"] = {"label": f"family:{args.family}", "order": None}
    report["q"] = q
    report["bounds"] = {
        "chain_family": args.family,
        "depth": args.depth,
        "levels": [
            {
                "label": lv.label,
                "order": lv.order,
                "r": lv.class_count,
                "lower": lv.lower_bound,
                "normal_subgroups": lv.normal_subgroup_count,
            }
            for lv in levels
        ],
    }
    return 0


_DRIVERS = {
    "group": _run_group,
    "lattice": _run_lattice,
    "alpha": _run_alpha,
    "aut": _run_aut,
    "bounds": _run_bounds,
    "oracle": _run_oracle,
    "chain": _run_chain,
}


# -- rendering ---------------------------------------------------------------


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_human(report: dict) -> str:
    lines = []
    g = report["group"]
    if g:
        lines.append(f"group {g['label']}" + (f"  order={g['order']}" if g.get("order") else ""))
        for key in ("abelian", "cyclic", "dedekind", "rank"):
            if key in g:
                lines.append(f"  {key} = {g[key]}")
    if report["q"] is not None:
        lines.append(f"  q = {report['q']}")
    lat = report["lattice"]
    if lat:
        lines.append(f"subgroups = {lat['subgroup_count']}  classes r = {lat['r']}")
        lines.append(f"  r_by_index = {lat['r_by_index']}")
        lines.append(f"  r_p = {lat['r_p']}  dedekind = {lat['is_dedekind']}"
                     f"  length = {lat['length']}  srank = {lat['srank']}")
        for cid, cls in enumerate(lat["classes"]):
            rep = lat["class_representatives"][cid]
            lines.append(f"  class {cid}: rep {lat['subgroups'][rep]} size {len(cls)}")
        if "mobius" in lat:
            lines.append("  mobius matrix (rows: subgroup h, cols: subgroup k, . = incomparable):")
            for row in lat["mobius"]:
                lines.append("    " + " ".join("." if v is None else str(v) for v in row))
    alpha = report["alpha"]
    if alpha:
        lines.append("orbit census (class, index, orbits, |N/H|):")
        for e in alpha["entries"]:
            lines.append(f"  class {e['class']}: index={e['index']} "
                         f"orbits={e['orbits']} quotient_order={e['quotient_order']}")
        lines.append(f"  total_orbits = {alpha['total_orbits']}")
    aut = report["aut"]
    if aut:
        lines.append("aut factors ((N/H) wr S_degree per class):")
        for f in aut["factors"]:
            lines.append(f"  class {f['class']}: quotient_order={f['quotient_order']} "
                         f"degree={f['degree']}")
        lines.append(f"aut_order = {aut['order']}")
    bounds = report["bounds"]
    if bounds and "rows" in bounds:
        lines.append("bounds:")
        for row in bounds["rows"]:
            if not row["applicable"]:
                lines.append(f"  {row['name']} : not applicable ({row['reason']})")
            elif "interval" in row:
                iv = row["interval"]
                lines.append(f"  {row['name']} = [{iv['lower']}, {iv['upper']}] "
                             f"slack={iv['epsilon_slack']} [{iv['lower_source']} ; "
                             f"{iv['upper_source']}]")
            elif "ceiling" in row:
                lines.append(f"  {row['name']} = {row['value']} (ceiling {row['ceiling']}) "
                             f"[{row['provenance']}]")
            else:
                lines.append(f"  {row['name']} = {row['value']} [{row['provenance']}]")
    if bounds and "levels" in bounds:
        lines.append(f"chain family {bounds['chain_family']} depth {bounds['depth']}:")
        for lv in bounds["levels"]:
            lines.append(f"  {lv['label']}: order={lv['order']} r={lv['r']} "
                         f"lower={lv['lower']} normal_subgroups={lv['normal_subgroups']}")
    oracle = report["oracle"]
    if oracle:
        lines.append(f"aut_count = {oracle['aut_count']}, "
                     f"structure_order = {oracle['structure_order']}, "
                     f"verdict = {oracle['verdict']}")
    return "\n".join(lines) + "\n"


# -- entry points ------------------------------------------------------------


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    report = _empty_report(args.command, args)
    try:
        _DRIVERS[args.command](args, report)
    except SpecParseError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, BudgetExceededError) as exc:
        kind = "capacity" if isinstance(exc, CapacityError) else "budget"
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return 3
    except CrossCheckError as exc:
        sys.stdout.write(render_json(report) if args.json else render_human(report))
        print(f"error: crosscheck: {exc}", file=sys.stderr)
        return 4
    sys.stdout.write(render_json(report) if args.json else render_human(report))
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
