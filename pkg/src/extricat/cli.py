"""Command-line front end.

Every command loads a scenario (a built-in name or a file path), runs one
computation and prints a report.  Exit codes: 0 all verdicts hold, 1 some
verdict fails, 2 some verdict is unknown (a cap was hit), 3 usage or
scenario error, 4 inconsistent (a theorem-backed check failed).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__
from .cotorsion import (GluedApproximationError, check_cotorsion_pair, enumerate_cotorsion_pairs,
                        glue, glued_approximation, gluing_conditions, left_approximation,
                        restrict_pair, right_approximation)
from .exstruct import ExCat, Subcat, check_extension_closed, describe_conflation
from .morphcat import SYMBOLS, canonical_tag
from .properties import property_suite
from .recollement import full_report, injective_indices, projective_indices
from .repcat.catalog import CatalogMiss
from .shell.cache import CatalogCache, atomic_write_text
from .shell.context import Context, build_context
from .shell.report import EXIT_USAGE, Report, Table, emit_report
from .shell.scenario import ScenarioError, load_scenario
from .verdict import CapExceeded, Caps, Status, Verdict, combine

CONSEQUENCES = {
    "1": "unit/counit isomorphisms i^*i_* ≅ 1 ≅ i^!i_*, 1 ≅ j^*j_!, j^*j_* ≅ 1",
    "2": "i^*j_! = 0 and i^!j_* = 0",
    "3": "i^* preserves projectives, i^! preserves injectives",
    "3'": "j_! preserves projectives, j_* preserves injectives",
    "4.i": "i_* preserves projectives (i^! exact)",
    "4.j": "j^* preserves projectives (j_* exact)",
    "4'.i": "i_* preserves injectives (i^* exact)",
    "4'.j": "j^* preserves injectives (j_! exact)",
    "5.P": "P(A) = add i^*P(B), A has enough projectives",
    "5.I": "I(A) = add i^!I(B), A has enough injectives",
    "6.P": "P(C) = add j^*P(B), C has enough projectives",
    "6.I": "I(C) = add j^*I(B), C has enough injectives",
    "7": "E_B(i_*X, Y) ≅ E_A(X, i^!Y)",
    "7'": "E_B(j_!Z, Y) ≅ E_C(Z, j^*Y)",
    "8": "i^* exact implies j_! exact",
    "8'": "i^! exact implies j_* exact",
}
TRANSFER = {
    "1": "i_*i^!X -> X -> j_*j^*X is a conflation (i^! exact)",
    "2": "j_!j^*X -> X -> i_*i^*X is a conflation (i^* exact)",
}
CONDITIONS = {
    "i": "E(T, F) = 0",
    "ii": "i^* exact",
    "iii": "Hom(j_!T2, F) -> Hom(i_*A, F) onto for every i_*A -> j_!T2",
    "iv": "T ⊆ j_!T2 or i_*F1 ⊆ T^⊥",
    "v": "A and B Frobenius",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):   # argparse would exit with status 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _caps(args, scn) -> Caps:
    caps = scn.caps
    if args.seed is not None:
        caps = dataclasses.replace(caps, seed=args.seed)
    for item in args.cap or ():
        key, _, val = item.partition("=")
        if key not in {f.name for f in dataclasses.fields(Caps)}:
            raise UsageError(f"unknown cap {key!r}")
        try:
            n = int(val)
        except ValueError:
            raise UsageError(f"cap {key} needs an integer value") from None
        if n < (0 if key == "seed" else 1):
            raise UsageError(f"cap {key} out of range")
        caps = dataclasses.replace(caps, **{key: n})
    return caps


def _context(args, bounds=None) -> Context:
    scn = load_scenario(args.scenario)
    cache = CatalogCache(enabled=not args.no_cache)
    return build_context(scn, cache, bounds, _caps(args, scn))


def _report(ctx: Context, command: str) -> Report:
    return Report(command=command, scenario=ctx.scenario.name,
                  scenario_hash=ctx.scenario.digest, caps=ctx.caps.to_json())


def _names(s: Subcat) -> List[str]:
    return s.names()


def _side_label(ctx: Context, side: str) -> str:
    return f"{side}: {ctx.cats[side].name}"


def _catalog_tables(rep: Report, title: str, cat) -> None:
    names = [cat.display_name(i) for i in range(len(cat))]
    rep.tables[f"{title} Hom dimensions"] = Table(names, names, cat.hom_table(), "Hom(row, col)")
    rep.tables[f"{title} Ext dimensions"] = Table(names, names, cat.ext_table(), "Ext(row, col)")
    rep.add_data(f"{title} objects", [{"name": cat.names[i], "alias": cat.display_name(i),
                                        "dims": list(cat.indecs[i].dims)}
                                       for i in range(len(cat))])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_catalog(args) -> Report:
    bounds = tuple(int(x) for x in args.bounds.split(",")) if args.bounds else None
    ctx = _context(args, bounds)
    rep = _report(ctx, "catalog")
    cats = [("mod A", ctx.base)]
    if ctx.ambient is not ctx.base:
        cats.append(("mod B", ctx.ambient))
    for title, cat in cats:
        _catalog_tables(rep, title, cat)
        rep.add_data(f"{title} aliases", dict(sorted(cat.aliases.items())))
        rep.add_verdict(f"{title} enumeration complete",
                        Verdict.holds(evidence={"indecomposables": len(cat),
                                                "bounds": list(cat.bounds)})
                        if cat.unknown == 0 else
                        Verdict.unknown("enum_cap", f"{cat.unknown} tuples undecided"))
    for side in sorted(ctx.cats):
        x = ctx.cats[side]
        lab = _side_label(ctx, side)
        rep.lists[f"objects ({lab})"] = _names(x.carrier)
        rep.lists[f"projectives ({lab})"] = [x.catalog.display_name(i)
                                             for i in projective_indices(x)]
        rep.lists[f"injectives ({lab})"] = [x.catalog.display_name(i)
                                            for i in injective_indices(x)]
        if not x.is_full():
            rep.add_verdict(f"extension-closed ({lab})", x.extension_closed())
    if args.verify_cache:
        rep.add_verdict("cache soundness", _verify_cache(args, bounds))
    return rep


def _verify_cache(args, bounds) -> Verdict:
    scn = load_scenario(args.scenario)
    caps = _caps(args, scn)
    fresh = build_context(scn, CatalogCache(enabled=False), bounds, caps)
    build_context(scn, CatalogCache(enabled=True), bounds, caps)            # make sure it is stored
    cached = build_context(scn, CatalogCache(enabled=True), bounds, caps)   # served from disk
    bad = [t for t, a, b in (("mod A", fresh.base, cached.base),
                             ("ambient", fresh.ambient, cached.ambient)) if not a.same_as(b)]
    if bad:
        return Verdict.fails({"differs": bad}, "cached catalog differs from a fresh computation")
    return Verdict.holds("cached and freshly computed catalogs agree")


def cmd_closure(args) -> Report:
    ctx = _context(args)
    x = ctx.category(args.inside)
    rep = _report(ctx, "closure")
    s = ctx.subcat(args.objects, args.inside, "add")
    rep.lists["objects"] = _names(s)
    rep.add_verdict(f"extension-closed in {x.name}", check_extension_closed(s, ctx.caps))
    return rep


def cmd_cotorsion_enumerate(args) -> Report:
    ctx = _context(args)
    x = ctx.category(args.inside)
    rep = _report(ctx, f"cotorsion enumerate --in {args.inside}")
    res = enumerate_cotorsion_pairs(x, ctx.caps)
    summary = res.to_json()
    summary["pairs"] = [{"T": r["T"], "F": r["F"], "status": r["status"]} for r in summary["pairs"]]
    rep.add_data("enumeration", {"category": x.name, **summary})
    for k, (T, F, r) in enumerate(res.pairs, start=1):
        rep.lists[f"pair {k} T"] = _names(T)
        rep.lists[f"pair {k} F"] = _names(F)
    pending = [r for _, _, r in res.pairs if r.status is Status.UNKNOWN]
    rep.add_verdict("enumeration complete",
                    Verdict.holds(evidence={"pairs": len(res.pairs)}) if not pending
                    else Verdict.unknown("mult_bound", f"{len(pending)} candidates undecided"))
    return rep


def _pair_verdicts(rep: Report, r, prefix: str = "") -> None:
    rep.add_verdict(f"{prefix}(a) E(T, F) = 0", r.orthogonal)
    rep.add_verdict(f"{prefix}(b) right approximations F -> T -> M", r.right)
    rep.add_verdict(f"{prefix}(c) left approximations M -> F -> T", r.left)


def cmd_cotorsion_check(args) -> Report:
    ctx = _context(args)
    x = ctx.category(args.inside)
    rep = _report(ctx, f"cotorsion check --in {args.inside}")
    T, F = ctx.subcat(args.T, args.inside, "T"), ctx.subcat(args.F, args.inside, "F")
    r = check_cotorsion_pair(T, F, x, ctx.caps)
    rep.lists["T"], rep.lists["F"] = _names(T), _names(F)
    _pair_verdicts(rep, r)
    return rep


def _glue(ctx: Context, args):
    s = ctx.need_recollement()
    T1, F1 = ctx.subcat(args.T1, "A", "T1"), ctx.subcat(args.F1, "A", "F1")
    T2, F2 = ctx.subcat(args.T2, "C", "T2"), ctx.subcat(args.F2, "C", "F2")
    return s, glue(T1, F1, T2, F2, s)


def cmd_glue(args) -> Report:
    ctx = _context(args)
    rep = _report(ctx, "glue" + (" --conditions" if args.conditions else ""))
    s, g = _glue(ctx, args)
    for lab in ("T1", "F1", "T2", "F2", "T", "F"):
        rep.lists[lab] = _names(getattr(g, lab))
    js = g.to_json()
    rep.lists["B minus T"] = js["T_excluded"]
    rep.lists["B minus F"] = js["F_excluded"]
    rep.add_data("membership trace", js["trace"])
    if args.conditions:
        tr = gluing_conditions(g, s, ctx.caps)
        for k, v in tr.hypotheses.items():
            rep.add_verdict(f"hypothesis: {k}", v)
        for k, v in tr.conditions.items():
            rep.add_verdict(f"condition ({k}) {CONDITIONS[k]}", v)
        _pair_verdicts(rep, tr.final, "glued pair ")
        if not tr.consistent:
            rep.add_verdict("consistency", Verdict.inconsistent(
                {"conditions": {k: v.status.value for k, v in tr.conditions.items()},
                 "glued pair": tr.final.status.value},
                "outcome contradicts the gluing theorem"))
    return rep


def cmd_approx(args) -> Report:
    ctx = _context(args)
    dirs = ("b", "c") if args.direction == "both" else (args.direction,)
    rep = _report(ctx, f"approx --direction {args.direction}" + (" --glued" if args.glued else ""))
    if args.glued:
        if None in (args.T1, args.F1, args.T2, args.F2):
            raise UsageError("--glued needs --T1, --F1, --T2 and --F2")
        s, g = _glue(ctx, args)
        x = s.B
        rep.lists["T"], rep.lists["F"] = _names(g.T), _names(g.F)
    else:
        if args.T is None or args.F is None:
            raise UsageError("approx needs --T and --F (or --glued with the outer pairs)")
        x = ctx.category(args.inside)
        T, F = ctx.subcat(args.T, args.inside, "T"), ctx.subcat(args.F, args.inside, "F")
        rep.lists["T"], rep.lists["F"] = _names(T), _names(F)
    cat = x.catalog
    objs = x.indices if args.object == "all" else [ctx.subcat(args.object, args.inside
                                                              if not args.glued else "B")
                                                   .sorted_indices[0]]
    n_ok = 0
    for i in objs:
        name = cat.display_name(i)
        M = cat.indecs[i]
        for d in dirs:
            key = f"({d}) {name}"
            if args.glued:
                try:
                    ga = glued_approximation(M, g, s, d, ctx.caps)
                except GluedApproximationError as exc:
                    rep.add_verdict(key, Verdict.fails({"stage": exc.stage, **exc.witness},
                                                       exc.detail))
                    continue
                except CapExceeded as exc:
                    rep.add_verdict(key, Verdict.unknown(exc.cap, exc.detail))
                    continue
                rep.add_data(key, ga.to_json(cat))
                bad = [k for k, ok in ga.certificates.items() if not ok]
                rep.add_verdict(key, Verdict.holds() if not bad else
                                Verdict.fails({"certificates": bad}, "certificate failed"))
                n_ok += not bad
            else:
                fn = right_approximation if d == "b" else left_approximation
                try:
                    ap = fn(M, T, F, ctx.caps)
                except CapExceeded as exc:
                    rep.add_verdict(key, Verdict.unknown(exc.cap, exc.detail))
                    continue
                v = ap.verdict(cat, name)
                rep.add_verdict(key, v)
                if ap.found:
                    rep.add_data(key, {"stage": ap.stage,
                                       "conflation": describe_conflation(cat, ap.conflation)})
                n_ok += v.ok
    rep.add_data("constructed", n_ok)
    return rep


def cmd_recollement_verify(args) -> Report:
    ctx = _context(args)
    s = ctx.need_recollement()
    rep = _report(ctx, "recollement verify")
    r = full_report(s)
    for k, v in r.axioms.items():
        rep.add_verdict(f"axioms: {k}", v)
    for k, v in r.consequences.items():
        rep.add_verdict(f"consequence {k}: {CONSEQUENCES.get(k, '')}", v)
    for k, v in r.transfer.items():
        rep.add_verdict(f"canonical sequence {k}: {TRANSFER.get(k, '')}", v)
    for kind in ("projectives", "injectives"):
        for side, names in r.notes[kind].items():
            rep.lists[f"{kind} ({_side_label(ctx, side)})"] = names
    return rep


def cmd_functor_check(args) -> Report:
    ctx = _context(args)
    s = ctx.need_recollement()
    try:
        tag = canonical_tag(args.functor)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    rep = _report(ctx, f"functor check --functor {tag} --mode {args.mode}")
    F = s.F(tag)
    rep.add_data("functor", {"tag": tag, "symbol": SYMBOLS[tag],
                             "source": s.cat_of(F.source).name,
                             "target": s.cat_of(F.target).name})
    rep.add_verdict(f"{SYMBOLS[tag]} is {args.mode} exact" if args.mode != "exact"
                    else f"{SYMBOLS[tag]} is exact", s.exactness(tag, args.mode))
    return rep


def cmd_restrict(args) -> Report:
    ctx = _context(args)
    s = ctx.need_recollement()
    rep = _report(ctx, f"restrict --via {args.via}")
    U, V = ctx.subcat(args.U, "B", "U"), ctx.subcat(args.V, "B", "V")
    r = restrict_pair(U, V, args.via, s, ctx.caps)
    rep.lists["U"], rep.lists["V"] = _names(U), _names(V)
    rep.lists["restricted T"], rep.lists["restricted F"] = _names(r.U), _names(r.V)
    _pair_verdicts(rep, r.input_report, "input pair ")
    for k, v in r.preconditions.items():
        rep.add_data(f"precondition {k}", v)
    _pair_verdicts(rep, r.report, "restricted pair ")
    if not r.consistent:
        rep.add_verdict("consistency", Verdict.inconsistent(
            {"preconditions": {k: v.status.value for k, v in r.preconditions.items()}},
            "restriction of a cotorsion pair failed although the preconditions hold"))
    return rep


def cmd_properties(args) -> Report:
    ctx = _context(args)
    rep = _report(ctx, "properties")
    carriers = {f"{side} ({x.name})": x for side, x in sorted(ctx.cats.items())
                if side == "B" or not x.is_full() or side == "A"}
    for k, v in property_suite(carriers, ctx.recollement, ctx.caps).items():
        rep.add_verdict(k, v)
    return rep


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="built-in scenario name or path to a scenario file")
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--seed", type=int, default=None, help="seed for capped sampling")
    common.add_argument("--no-cache", action="store_true", help="recompute catalogs")
    common.add_argument("--cap", action="append", metavar="KEY=VALUE",
                        help="override a cap (repeatable)")
    common.add_argument("--output", "-o", metavar="PATH",
                        help="also write the report to PATH (atomically)")

    p = _Parser(prog="extricat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"extricat {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", parents=[common], help="indecomposables with Hom/Ext tables")
    c.add_argument("--bounds", help="dimension bound per vertex, e.g. 1,1")
    c.add_argument("--verify-cache", action="store_true",
                   help="compare cached catalogs against a fresh computation")
    c.set_defaults(fn=cmd_catalog)

    c = sub.add_parser("closure", parents=[common], help="extension-closure of add(objects)")
    c.add_argument("--objects", required=True)
    c.add_argument("--in", dest="inside", default="B", choices=["A", "B", "C"])
    c.set_defaults(fn=cmd_closure)

    cot = sub.add_parser("cotorsion", help="cotorsion pairs")
    csub = cot.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = csub.add_parser("enumerate", parents=[common])
    c.add_argument("--in", dest="inside", default="B", choices=["A", "B", "C"])
    c.set_defaults(fn=cmd_cotorsion_enumerate)
    c = csub.add_parser("check", parents=[common])
    c.add_argument("--T", required=True)
    c.add_argument("--F", required=True)
    c.add_argument("--in", dest="inside", default="B", choices=["A", "B", "C"])
    c.set_defaults(fn=cmd_cotorsion_check)

    def outer(c, required):
        for k in ("T1", "F1", "T2", "F2"):
            c.add_argument(f"--{k}", required=required)

    c = sub.add_parser("glue", parents=[common], help="glue cotorsion pairs along the recollement")
    outer(c, True)
    c.add_argument("--conditions", action="store_true", help="report the gluing conditions")
    c.set_defaults(fn=cmd_glue)

    c = sub.add_parser("approx", parents=[common], help="approximation conflations")
    c.add_argument("--T")
    c.add_argument("--F")
    outer(c, False)
    c.add_argument("--object", required=True, help="object name or 'all'")
    c.add_argument("--direction", required=True, choices=["b", "c", "both"])
    c.add_argument("--glued", action="store_true")
    c.add_argument("--in", dest="inside", default="B", choices=["A", "B", "C"])
    c.set_defaults(fn=cmd_approx)

    rec = sub.add_parser("recollement", help="recollement checks")
    rsub = rec.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = rsub.add_parser("verify", parents=[common])
    c.set_defaults(fn=cmd_recollement_verify)

    fun = sub.add_parser("functor", help="functor checks")
    fsub = fun.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = fsub.add_parser("check", parents=[common])
    c.add_argument("--functor", required=True)
    c.add_argument("--mode", required=True, choices=["exact", "left", "right"])
    c.set_defaults(fn=cmd_functor_check)

    c = sub.add_parser("restrict", parents=[common], help="restrict a pair to an outer category")
    c.add_argument("--U", required=True)
    c.add_argument("--V", required=True)
    c.add_argument("--via", required=True, choices=["i", "j"])
    c.set_defaults(fn=cmd_restrict)

    c = sub.add_parser("properties", parents=[common], help="theorem-backed invariant suites")
    c.set_defaults(fn=cmd_properties)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:       # argparse errors (exit 3) and --help (exit 0)
        return int(exc.code or 0)
    try:
        rep = args.fn(args)
    except (ScenarioError, UsageError, CatalogMiss) as exc:
        print(f"extricat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = emit_report(rep, "json" if args.json else "human")
    sys.stdout.write(text)
    if args.output:
        atomic_write_text(Path(args.output), text)
    return rep.exit_code


if __name__ == "__main__":   # pragma: no cover
    sys.exit(main())
