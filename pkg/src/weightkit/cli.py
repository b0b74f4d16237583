"""Command-line front end.

Exit codes: 0 the property holds or the object was produced, 1 the
property definitively fails (an obstruction report is printed), 2 input
or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .complexes import Complex, canonical_decompose, homology, hom_group, pieces_from_homology
from .counterexamples import EvenComplex, even_obstruction, triple_degeneracy_report, triple_obstruction, \
    triple_weight_decompose
from .errors import ParseError, UnknownBattery, WeightkitError
from .fileformat import Document, complex_to_json, format_complex, parse_document
from .fixtures import Ma, Pb
from .homotopy import stupid_membership
from .pd_one import ext_class_of, hom_decomposition, homology_map
from .oracle import DEFAULT_SEED, battery_names, run_battery
from .weights import MODES, avoiding_decomposition, kills_weights, weight_range, without_weights

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse_document(text)
    except ParseError as exc:
        raise _Usage(f"{path}:{exc.line}:{exc.column}: {exc.message}") from None


def _emit(obj, as_json: bool, lines: list[str]):
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


# ---------------------------------------------------------------------------
# analyze

def avoided_ranges(M: Complex) -> list[tuple[int, int]]:
    """Maximal weight intervals inside the support that ``M`` is without."""
    if M.is_zero():
        return []
    lo, hi = weight_range(M)
    single = [i for i in range(lo, hi + 1) if without_weights(M, i, i) is not None]
    runs = []
    for i in single:
        if runs and runs[-1][1] == i - 1:
            runs[-1][1] = i
        else:
            runs.append([i, i])
    out = []
    for a, b in runs:
        if without_weights(M, a, b) is None:
            raise AssertionError(f"weights {a}..{b} avoided pointwise but not as a range")
        out.append((a, b))
    return out


def skeleton_bounds(M: Complex):
    """Least ``n`` with ``M ∈ w_{≤n}`` and greatest ``m`` with ``M ∈ w_{≥m}``.

    Both are ``None`` when ``M`` is contractible (it lies in every class).
    """
    if M.is_zero():
        return None, None
    lo, hi = weight_range(M)
    if without_weights(M, lo, hi) is not None:
        # contractible: in every class
        return None, None
    le = next(n for n in range(lo - 1, hi + 1) if stupid_membership(M, "le", n) is not None)
    ge = next(m for m in range(hi + 1, lo - 2, -1) if stupid_membership(M, "ge", m) is not None)
    return le, ge


def analysis_report(name: str, M: Complex, certificates: bool = False) -> dict:
    rep = {"name": name, "ring": str(M.ring), "complex": complex_to_json(M)}
    pid = M.ring.supports_snf
    if pid:
        hom = {}
        if not M.is_zero():
            for j in range(-M.hi, -M.lo + 1):
                hom[str(j)] = homology(M, j).to_json()
        rep["homology"] = hom
        pieces = canonical_decompose(M).piece_multiset() if not M.is_zero() else []
        rep["pieces"] = [str(p) for p in pieces]
        rep["consistent"] = sorted(map(str, pieces_from_homology(M))) == sorted(map(str, pieces)) \
            if not M.is_zero() else True
    else:
        rep["homology"] = {}
        rep["pieces"] = None
        rep["consistent"] = True
    rep["avoided_ranges"] = [list(r) for r in avoided_ranges(M)]
    le, ge = skeleton_bounds(M)
    rep["skeleton"] = {"least_le": le, "greatest_ge": ge, "contractible": le is None}
    if certificates:
        certs = {}
        for a, b in avoided_ranges(M):
            c = without_weights(M, a, b)
            certs[f"{a}..{b}"] = {"summary": c.summary(), "verified": c.verify()}
        rep["certificates"] = certs
    return rep


def _analysis_lines(rep: dict) -> list[str]:
    cx = rep["complex"]
    lines = [f"== complex {rep['name']} ==", f"ring: {rep['ring']}"]
    if cx["dims"]:
        lines.append(f"degrees: {cx['lo']}..{cx['lo'] + len(cx['dims']) - 1}")
        lines.append("ranks: " + " ".join(map(str, cx["dims"])))
    else:
        lines.append("degrees: none (zero complex)")
    base = rep["ring"].replace(" ", "")
    for j, h in sorted(rep["homology"].items(), key=lambda kv: int(kv[0])):
        parts = []
        if h["rank"]:
            parts.append(base if h["rank"] == 1 else f"{base}^{h['rank']}")
        parts += [f"Z/{t}" for t in h["torsion"]]
        lines.append(f"H_{j}: {' + '.join(parts) if parts else '0'}")
    if rep["pieces"] is not None:
        lines.append("pieces: " + (", ".join(rep["pieces"]) or "none"))
    rs = rep["avoided_ranges"]
    lines.append("without weights: " + (", ".join(f"[{a},{b}]" for a, b in rs) or "none"))
    sk = rep["skeleton"]
    if sk["contractible"]:
        lines.append("skeleton: contractible (every weight class)")
    else:
        lines.append(f"skeleton: w<={sk['least_le']} w>={sk['greatest_ge']}")
    for k, c in rep.get("certificates", {}).items():
        lines.append(f"certificate {k}: {c['summary']} (verified {c['verified']})")
    return lines


def cmd_analyze(args) -> int:
    doc = _load(args.input)
    names = [args.object] if args.object else list(doc.complexes)
    if args.object and args.object not in doc.complexes:
        raise _Usage(f"no complex named {args.object!r}")
    reports = [analysis_report(n, doc.complexes[n], args.certificates) for n in names]
    lines = []
    for r in reports:
        lines += _analysis_lines(r)
    if args.figure:
        from .plotting import plot_analysis
        for k, r in enumerate(reports):
            path = args.figure if len(reports) == 1 else _indexed(args.figure, r["name"])
            plot_analysis(r, path)
            lines.append(f"figure: {path}")
    _emit({"reports": reports}, args.json, lines)
    return EXIT_OK


def _indexed(path: str, name: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}-{name}{ext or '.png'}"


# ---------------------------------------------------------------------------
# kills / avoid / hom

def _pd1_diagnosis(g, i) -> list[str]:
    out = []
    if not homology_map(g, i).is_zero():
        out.append(f"H_{i}(g) is nonzero")
    if not ext_class_of(g, i).is_zero():
        out.append(f"the Ext class at weight {i} is nonzero")
    if not homology_map(g, i - 1).kills_torsion():
        out.append(f"H_{i - 1}(g) does not kill torsion")
    return out


def cmd_kills(args) -> int:
    doc = _load(args.input)
    if args.map not in doc.maps:
        raise _Usage(f"no map named {args.map!r}")
    g = doc.maps[args.map]
    m, n = args.range
    if m > n:
        raise _Usage(f"empty range: {m} > {n}")
    cert = kills_weights(g, m, n, mode=args.mode)
    res = {"map": args.map, "range": [m, n], "mode": args.mode, "kills": cert is not None}
    lines = [f"map: {args.map}", f"range: [{m},{n}]", f"mode: {args.mode}"]
    if cert is not None:
        ok = cert.verify()
        res["certificate"] = {"summary": cert.summary(), "verified": ok}
        lines += ["kills: yes", f"certificate: {cert.summary()}", f"verified: {ok}"]
        _emit(res, args.json, lines)
        return EXIT_OK
    lines.append("kills: no")
    per = {}
    for i in range(m, n + 1):
        per[str(i)] = kills_weights(g, i, i) is not None
    res["pointwise"] = per
    lines.append("pointwise: " + ", ".join(f"{i}:{'yes' if v else 'no'}" for i, v in per.items()))
    reasons = [f"the composite of g with the truncations at {n} and {m - 1} is not null-homotopic"]
    if g.ring.tag == "Z":
        for i in range(m, n + 1):
            if not per[str(i)]:
                reasons += _pd1_diagnosis(g, i)
    res["obstruction"] = reasons
    lines += [f"obstruction: {r}" for r in reasons]
    _emit(res, args.json, lines)
    return EXIT_FAIL


def cmd_avoid(args) -> int:
    doc = _load(args.input)
    if args.object not in doc.complexes:
        raise _Usage(f"no complex named {args.object!r}")
    M = doc.complexes[args.object]
    m, n = args.range
    if m > n:
        raise _Usage(f"empty range: {m} > {n}")
    res = {"object": args.object, "range": [m, n]}
    lines = [f"object: {args.object}", f"range: [{m},{n}]"]
    if not M.ring.supports_snf:
        cert = without_weights(M, m, n)
        res["without_weights"] = cert is not None
        lines.append(f"without weights: {'yes' if cert else 'no'}")
        lines.append("note: explicit decompositions need Z, Q or F p")
        _emit(res, args.json, lines)
        return EXIT_OK if cert else EXIT_FAIL
    ad = avoiding_decomposition(M, m, n)
    if ad is None:
        bad = [str(p) for p in canonical_decompose(M).piece_multiset()
               if not (p.weights[1] <= m - 1 or p.weights[0] >= n + 1)]
        res["avoids"] = False
        res["obstruction"] = {"pieces_meeting_range": bad}
        lines += ["avoids: no", "obstruction: pieces meeting the range: " + ", ".join(bad)]
        _emit(res, args.json, lines)
        return EXIT_FAIL
    res.update({"avoids": True, "verified": ad.verify(),
                "X": complex_to_json(ad.X), "Y": complex_to_json(ad.Y),
                "euler_characteristics": [ad.X.euler_characteristic(), ad.Y.euler_characteristic()]})
    lines += ["avoids: yes", f"verified: {res['verified']}",
              f"euler characteristics: X {res['euler_characteristics'][0]}, Y {res['euler_characteristics'][1]}"]
    lines += format_complex("X", ad.X) + format_complex("Y", ad.Y)
    _emit(res, args.json, lines)
    return EXIT_OK


def cmd_hom(args) -> int:
    doc = _load(args.input)
    for nm in (args.src, args.tgt):
        if nm not in doc.complexes:
            raise _Usage(f"no complex named {nm!r}")
    A, B = doc.complexes[args.src], doc.complexes[args.tgt]
    H = hom_group(A, B)
    res = {"src": args.src, "tgt": args.tgt, "hom": H.to_json()}
    lines = [f"hom({args.src}, {args.tgt}): {H}"]
    if A.ring.tag == "Z":
        hd = hom_decomposition(A, B)
        res.update({"hom_part": hd.hom_part.to_json(), "ext_part": hd.ext_part.to_json(),
                    "formula_matches": hd.matches})
        lines += [f"hom part: {hd.hom_part}", f"ext part: {hd.ext_part}",
                  f"formula matches: {hd.matches}"]
    _emit(res, args.json, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check-example / oracle

def _example_a() -> tuple[bool, dict, list[str]]:
    M = Ma()
    rep = triple_degeneracy_report(M)
    obst = triple_obstruction(M, 0)
    padded = triple_weight_decompose(M, 0, pad_parity=True)
    ok = rep.degenerate and not rep.decomposable_in_category and rep.left_parity % 2 == 1
    res = {"example": "a", "degenerate": rep.degenerate,
           "parities": [rep.left_parity, rep.right_parity],
           "decomposable_in_category": rep.decomposable_in_category,
           "truncation_recipe": obst, "padded_decomposition": padded is not None,
           "reproduced": ok}
    lines = ["example a: the triple (L, 0, L)",
             f"weight complex zero: {rep.degenerate}",
             f"degenerate parts: parities {rep.left_parity} and {rep.right_parity}",
             f"decomposes inside the category: {rep.decomposable_in_category}",
             f"middle truncation at 0: {obst or 'works'}",
             f"padded decomposition at 0 exists: {padded is not None}",
             f"reproduced: {ok}"]
    return ok, res, lines


def _example_b() -> tuple[bool, dict, list[str]]:
    M = Pb()
    ww = without_weights(M, 0, 0) is not None
    rep = even_obstruction(EvenComplex(M), 0, 0)
    chis = [rep.chi_lower, rep.chi_upper]
    ok = ww and rep.obstructed and all(c is not None and c % 2 for c in chis)
    res = {"example": "b", "without_weight_0": ww, "euler_characteristics": chis,
           "obstructed": rep.obstructed, "reproduced": ok}
    lines = ["example b: the even complex Pb over Q",
             f"without weight 0: {ww}",
             f"avoiding components: X {chis[0]}, Y {chis[1]} (euler characteristics)",
             f"both odd: {all(c is not None and c % 2 for c in chis)}",
             f"decomposition inside even complexes: {'impossible' if rep.obstructed else 'exists'}",
             f"reproduced: {ok}"]
    return ok, res, lines


def cmd_check_example(args) -> int:
    ok, res, lines = (_example_a if args.which == "a" else _example_b)()
    _emit(res, args.json, lines)
    return EXIT_OK if ok else EXIT_FAIL


def default_seed() -> int:
    env = os.environ.get("WEIGHTKIT_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise _Usage(f"WEIGHTKIT_SEED must be an integer, got {env!r}") from None


def cmd_oracle(args) -> int:
    if args.list:
        print("\n".join(battery_names()))
        return EXIT_OK
    if not args.battery:
        raise _Usage("oracle needs --battery NAME (or --list)")
    seed = args.seed if args.seed is not None else default_seed()
    names = battery_names() if args.battery == "all" else [args.battery]
    reports = []
    try:
        for nm in names:
            reports.append(run_battery(nm, args.trials, seed, tuple(args.ring) if args.ring else None,
                                       exhaustive=not args.no_exhaustive).to_json())
    except UnknownBattery as exc:
        raise _Usage(str(exc)) from None
    lines = []
    for r in reports:
        tag = "pass" if r["passed"] else "FAIL"
        lines.append(f"{r['battery']}: {tag} ({r['checks']} checks, {r['elapsed_seconds']} s, seed {r['seed']})")
        for k, v in sorted(r["stats"].items()):
            lines.append(f"  {k}: {v}")
        for f in r["failures"]:
            lines.append(f"  failure trial {f['trial']} ring {f['ring']} seed {f['seed']}: {f['detail']}")
            lines += ["    " + ln for ln in f["dump"].splitlines()]
    if args.figure:
        from .plotting import plot_battery
        for r in reports:
            path = args.figure if len(reports) == 1 else _indexed(args.figure, r["battery"])
            plot_battery(r, path)
            lines.append(f"figure: {path}")
    _emit({"reports": reports}, args.json, lines)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weightkit", description="Weights of bounded complexes of free modules.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="homology, pieces, avoided weights and skeleta")
    a.add_argument("--input", required=True)
    a.add_argument("--object", help="analyse only this complex")
    a.add_argument("--certificates", action="store_true", help="include kill certificates")
    a.add_argument("--json", action="store_true")
    a.add_argument("--figure", metavar="PATH", help="also render a figure")
    a.set_defaults(func=cmd_analyze)

    k = sub.add_parser("kills", help="does a map kill weights M..N?")
    k.add_argument("--input", required=True)
    k.add_argument("--map", required=True)
    k.add_argument("--range", nargs=2, type=int, required=True, metavar=("M", "N"))
    k.add_argument("--mode", default="1", choices=MODES)
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_kills)

    v = sub.add_parser("avoid", help="decompose an object avoiding weights M..N")
    v.add_argument("--input", required=True)
    v.add_argument("--object", required=True)
    v.add_argument("--range", nargs=2, type=int, required=True, metavar=("M", "N"))
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_avoid)

    h = sub.add_parser("hom", help="morphisms up to homotopy")
    h.add_argument("--input", required=True)
    h.add_argument("--src", required=True)
    h.add_argument("--tgt", required=True)
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hom)

    c = sub.add_parser("check-example", help="reproduce a built-in counterexample")
    c.add_argument("which", choices=("a", "b"))
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check_example)

    o = sub.add_parser("oracle", help="run a randomized or exhaustive battery")
    o.add_argument("--battery", help="battery name, or 'all'")
    o.add_argument("--trials", type=int, default=None)
    o.add_argument("--seed", type=int, default=None)
    o.add_argument("--ring", action="append", help="override the rings (repeatable)")
    o.add_argument("--no-exhaustive", action="store_true", help="skip exhaustive phases")
    o.add_argument("--list", action="store_true", help="list batteries")
    o.add_argument("--json", action="store_true")
    o.add_argument("--figure", metavar="PATH")
    o.set_defaults(func=cmd_oracle)
    return p


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeightkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
