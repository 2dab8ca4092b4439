"""Command line front end. Every subcommand is a thin adapter over library calls."""
from __future__ import annotations

import argparse
import json
import re
import sys

from .errors import K3InvError
from .isometry import (
    SimpleInvolutionId,
    classification_table,
    fixed_locus_topology,
    involution_invariants,
    load_isometry,
    simple_involution,
)
from .lattice import InvariantTriple, load_lattice
from .pairs import (
    PairId,
    build_pair,
    distinct_invariant_sets,
    minimal_residual_singularity,
    nikulin_embedding_check,
    pair_records,
)
from .periods import (
    COWEIGHT,
    ROOT,
    SINGLE_SIGNS,
    canonical_period_spec,
    check_equivariance,
    orbit_analysis,
    perturb_pair,
    perturb_single,
    singular_roots,
    split_by_kind,
)
from .roots import singularity_report


def _pattern(regex: str, what: str):
    def check(text: str) -> str:
        if not re.fullmatch(regex, text.strip()):
            raise argparse.ArgumentTypeError(f"malformed {what}: {text!r}")
        return text.strip()

    return check


_simple = _pattern(r"\d+\s*,\s*\d+(\s*,\s*alt)?", "involution id (expected I,J[,alt])")
_pair = _pattern(r"\d+,\d+(,alt)?/\d+,\d+(,alt)?(\+alt)?", "pair id (expected i1,j1/i2,j2[+alt])")
_orbits = _pattern(r"(\d+(\s*,\s*\d+)*)?", "orbit list (expected comma separated indices)")
_pqr = _pattern(r"[\d,\s]*;[\d,\s]*;[\d,\s]*", "resolve sets (expected P;Q;R)")
_k_data = _pattern(r"\d+,\d+,\d+,\d+", "K data (expected RANK,SPLUS,SMINUS,ELL)")
_l_data = _pattern(r"\d+,\d+,\d+", "L data (expected RANK,SPLUS,SMINUS)")


def _ints(text: str) -> list[int]:
    return [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]


def _triple_json(t: InvariantTriple) -> dict:
    return {"r": t.r, "a": t.a, "delta": t.delta}


def _emit(args, text: str, doc):
    if getattr(args, "format", "tsv") == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


# --- subcommands -----------------------------------------------------------------------


def cmd_classify(args):
    rows = classification_table()
    text = "\n".join(f"{s.i}\t{s.j}\t{t.r}\t{t.a}\t{t.delta}" for s, t in rows)
    if args.header:
        text = "i\tj\tr\ta\tdelta\n" + text
    doc = {"rows": [{"i": s.i, "j": s.j, **_triple_json(t)} for s, t in rows]}
    _emit(args, text, doc)


def cmd_invariants(args):
    if args.simple:
        m = simple_involution(SimpleInvolutionId.parse(args.simple))
    else:
        m = load_isometry(args.file)
    t = involution_invariants(m)
    _emit(args, str(t), _triple_json(t))


def cmd_fixed_locus(args):
    topo = fixed_locus_topology(InvariantTriple(args.r, args.a, args.delta))
    doc = {"kind": topo.kind, "genus": topo.genus, "rational_curves": topo.rational_curve_count}
    _emit(args, str(topo), doc)


def _report_json(rep) -> dict:
    return {"config": rep.config.to_json(), "label": str(rep.config), "root_count": rep.root_count}


def cmd_singularities(args):
    sid = SimpleInvolutionId.parse(args.simple)
    rho = simple_involution(sid)
    spec = canonical_period_spec(sid.i)
    if args.resolve:
        spec = perturb_single(rho, spec, *split_by_kind(rho, _ints(args.resolve)), directions=args.directions)
    if not check_equivariance(rho, SINGLE_SIGNS, spec):
        raise K3InvError("periods are not equivariant")
    rep = singular_roots(spec)
    _emit(args, str(rep), _report_json(rep))


def cmd_pairs_enumerate(args):
    records = pair_records(args.jobs)
    count = distinct_invariant_sets(records)
    if args.count_only:
        _emit(args, str(count), {"distinct_sets": count, "ordered_pairs": len(records)})
        return
    lines = [r.tsv() for r in records]
    if args.header:
        lines.insert(0, "\t".join("i1 j1 i2 j2 r1 a1 d1 r2 a2 d2 residual_config".split()))
    doc = {
        "distinct_sets": count,
        "pairs": [
            {
                "id": str(r.id),
                "first": _triple_json(r.first),
                "second": _triple_json(r.second),
                "residual": str(r.residual),
            }
            for r in records
        ],
    }
    _emit(args, "\n".join(lines), doc)


def cmd_pair(args):
    pid = PairId.parse(args.id)
    rho1, rho2, spec = build_pair(pid)
    if args.resolve:
        p, q, r = (_ints(part) for part in args.resolve.split(";"))
        spec = perturb_pair(rho1, rho2, spec, p, q, r, directions=args.directions)
    t1, t2 = involution_invariants(rho1), involution_invariants(rho2)
    rep = singular_roots(spec)
    lines = [f"first\t{t1}", f"second\t{t2}", f"singularities\t{rep}"]
    doc = {"id": str(pid), "first": _triple_json(t1), "second": _triple_json(t2), "singularities": _report_json(rep)}
    if args.residual:
        res = minimal_residual_singularity(pid)
        lines.append(f"residual\t{res}")
        doc["residual"] = {"config": res.to_json(), "label": str(res)}
    if args.orbits:
        report = orbit_analysis(rho1, rho2)
        for e in report.entries:
            lines.append(f"orbit\t{e.index}\t{e.type[0]},{e.type[1]}\t{e.partner}")
        doc["orbits"] = [
            {"index": e.index, "type": list(e.type), "partner": e.partner} for e in report.entries
        ]
    _emit(args, "\n".join(lines), doc)


def cmd_roots(args):
    rep = singularity_report(load_lattice(args.lattice))
    _emit(args, str(rep), _report_json(rep))


def cmd_embed_check(args):
    kr, kp, km, kl = _ints(args.k)
    lr, lp, lm = _ints(args.l)
    v = nikulin_embedding_check(kr, (kp, km), kl, lr, (lp, lm))
    _emit(args, f"exists\t{v.exists}\nunique\t{v.unique}", {"exists": v.exists, "unique": v.unique})


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3inv", description="Exact computations for involutions of the K3 lattice.")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")

    p = sub.add_parser("classify", help="invariants of the 28 simple involutions")
    fmt(p)
    p.add_argument("--header", action="store_true", help="print a column header line")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("invariants", help="(r,a,delta) of one involution")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--simple", type=_simple, metavar="I,J[,alt]")
    g.add_argument("--file", metavar="PATH", help='JSON document {"matrix": [[...], ...]}')
    fmt(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("fixed-locus", help="topology of the fixed curve set")
    p.add_argument("r", type=int)
    p.add_argument("a", type=int)
    p.add_argument("delta", type=int)
    fmt(p)
    p.set_defaults(func=cmd_fixed_locus)

    p = sub.add_parser("singularities", help="ADE type of the canonical periods of one involution")
    p.add_argument("--simple", type=_simple, required=True, metavar="I,J[,alt]")
    p.add_argument("--resolve", type=_orbits, metavar="ORBITS", help="orbits to resolve, named by any member index")
    p.add_argument("--directions", choices=(COWEIGHT, ROOT), default=COWEIGHT)
    fmt(p)
    p.set_defaults(func=cmd_singularities)

    p = sub.add_parser("pairs", help="commuting pairs of simple involutions")
    psub = p.add_subparsers(dest="pairs_command", required=True)
    e = psub.add_parser("enumerate", help="all admissible pairs")
    e.add_argument("--count-only", action="store_true")
    e.add_argument("--header", action="store_true", help="print a column header line")
    e.add_argument("--jobs", type=int, default=1)
    fmt(e)
    e.set_defaults(func=cmd_pairs_enumerate)

    p = sub.add_parser("pair", help="one admissible pair")
    p.add_argument("--id", type=_pair, required=True, metavar="i1,j1/i2,j2")
    p.add_argument("--resolve", type=_pqr, metavar="P;Q;R")
    p.add_argument("--residual", action="store_true", help="also print the unresolvable part")
    p.add_argument("--orbits", action="store_true", help="also print the orbit types")
    p.add_argument("--directions", choices=(COWEIGHT, ROOT), default=COWEIGHT)
    fmt(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("roots", help="roots of a negative definite lattice")
    p.add_argument("--lattice", required=True, metavar="PATH")
    fmt(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("embed-check", help="sufficient conditions for a primitive embedding")
    p.add_argument("--k", type=_k_data, required=True, metavar="RANK,SPLUS,SMINUS,ELL")
    p.add_argument("--l", type=_l_data, required=True, metavar="RANK,SPLUS,SMINUS")
    fmt(p)
    p.set_defaults(func=cmd_embed_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except K3InvError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"E_IO: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
