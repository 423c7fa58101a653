"""Command-line front end.

Commands: order, fingerprint, sylow, iso, list-catalog, verify,
verify-suite.  Exit codes: 0 pass, 1 non-quarantined failure (or
non-isomorphic for `iso`), 2 usage/parse error, 3 budget exceeded.
"""

import argparse
import json
import sys

from . import backends
from .catalog import CATALOG, get_entry, list_catalog
from .classical import order_formula
from .errors import BudgetExceeded, ExprError, Inapplicable, SylowkitError
from .expr import Syl, eval_expr, parse, print_expr
from .ff import ff_from_size
from .groups import DEFAULT_BUDGET, fingerprint
from .sylow import p_part, sylow
from .verify import Case, default_suite, is_isomorphic, run_suite, verify_claim

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _factorization(n: int) -> str:
    parts = []
    m, p = n, 2
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            parts.append(f"{p}^{e}" if e > 1 else str(p))
        p += 1 if p == 2 else 2
        if p * p > m and m > 1:
            parts.append(str(m))
            break
    return "*".join(parts) if parts else "1"


def _emit(data, as_json: bool, text_lines):
    if as_json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _fingerprint_dict(g):
    return fingerprint(g).as_dict()


def cmd_order(args) -> int:
    e = parse(args.expr)
    g = eval_expr(e, args.budget, args.allow_l2_psl)
    _emit({"expr": print_expr(e), "order": len(g), "factorization": _factorization(len(g))},
          args.json, [f"|{print_expr(e)}| = {len(g)} = {_factorization(len(g))}"])
    return EXIT_OK


def cmd_fingerprint(args) -> int:
    e = parse(args.expr)
    g = eval_expr(e, args.budget, args.allow_l2_psl)
    fp = _fingerprint_dict(g)
    lines = [f"{print_expr(e)}: order {fp['order']} = {_factorization(fp['order'])}"]
    lines.append(f"  element orders: " + ", ".join(f"{o}:{c}" for o, c in fp["order_histogram"]))
    lines.append(f"  center {fp['center']}, derived {fp['derived']}, "
                 f"abelianization {tuple(fp['abelianization'])}, exponent {fp['exponent']}")
    if isinstance(e, Syl):
        inner = eval_expr(e.inner, args.budget, args.allow_l2_psl)
        lines.append(f"  ambient order {len(inner)} = {_factorization(len(inner))}; "
                     f"{e.p}-part {p_part(len(inner), e.p)}")
    _emit({"expr": print_expr(e), "fingerprint": fp}, args.json, lines)
    return EXIT_OK


def cmd_sylow(args) -> int:
    e = parse(args.expr)
    g = eval_expr(e, args.budget, args.allow_l2_psl)
    res = sylow(g, args.p)
    fp = _fingerprint_dict(res.subgroup)
    data = {
        "expr": print_expr(e),
        "prime": args.p,
        "ambient_order": len(g),
        "p_part": res.p_part,
        "witness_chain": res.witness_chain,
        "fingerprint": fp,
    }
    _emit(data, args.json, [
        f"|{print_expr(e)}| = {len(g)} = {_factorization(len(g))}",
        f"Syl_{args.p}: order {res.p_part}, growth chain {res.witness_chain}",
        f"  element orders: " + ", ".join(f"{o}:{c}" for o, c in fp["order_histogram"]),
    ])
    return EXIT_OK


def cmd_iso(args) -> int:
    ea, eb = parse(args.expr_a), parse(args.expr_b)
    ga = eval_expr(ea, args.budget, args.allow_l2_psl)
    gb = eval_expr(eb, args.budget, args.allow_l2_psl)
    res = is_isomorphic(ga, gb)
    if res.isomorphic is None:
        _emit({"verdict": "BUDGET", "reason": res.reason}, args.json,
              [f"BUDGET: {res.reason}"])
        return EXIT_BUDGET
    if res.isomorphic:
        witness = [[ga.element_str(x), gb.element_str(y)] for x, y in res.gen_map]
        _emit({"verdict": "ISOMORPHIC", "witness": witness}, args.json,
              ["isomorphic; generator map:"] +
              [f"  {a}  ->  {b}" for a, b in witness])
        return EXIT_OK
    _emit({"verdict": "NOT-ISOMORPHIC", "reason": res.reason}, args.json,
          [f"not isomorphic: {res.reason}"])
    return EXIT_FAIL


def cmd_list_catalog(args) -> int:
    rows = list_catalog()
    _emit({"entries": rows}, args.json,
          [f"{r['id']:16s} params({', '.join(r['params'])})\n"
           f"    {r['claim']}" + (f"\n    notes: {r['notes']}" if r["notes"] else "")
           for r in rows])
    return EXIT_OK


def _case_from_cli(args) -> Case:
    fam = args.family
    q = args.q
    dim = args.dim
    prime = args.prime
    field = ff_from_size(q)
    entry_id = args.entry
    if entry_id is None:
        entry_id = _select_entry(fam, dim, q, prime, field)
    params = _entry_params(entry_id, fam, dim, q, args.eps, field)
    return Case(entry_id, prime, tuple(sorted(params.items())))


def _select_entry(fam, dim, q, prime, field) -> str:
    char = field.p
    if fam == "PSL":
        return "PSL-p" if prime == char else "PSL-l"
    if fam == "SL":
        if prime == char:
            raise Inapplicable("no catalog entry for Syl_p(SL) in defining characteristic")
        return "SL-l"
    if fam == "GL":
        if prime == char:
            raise Inapplicable("no catalog entry for GL in defining characteristic")
        return "GL-l"
    if fam in ("Sp", "PSp"):
        if prime == char:
            return "PSp-p"
        return "PSp-2" if prime == 2 else "PSp-l-reduce"
    if fam in ("U", "SU", "PSU"):
        if prime == char:
            return "U-even-p" if dim % 2 == 0 else "U-odd-p"
        return "PSU-l-reduce" if fam == "PSU" else "U-l-reduce"
    if fam in ("O", "SO"):
        if prime == 2 and char != 2:
            return "O-even-2" if dim % 2 == 0 else "O-odd-2"
        raise Inapplicable(
            "catalog entries for the full orthogonal group cover Syl_2 at odd q only; "
            "use family Omega/POmega for the other primes")
    if fam in ("Omega", "POmega"):
        if prime == char:
            if dim % 2 == 1:
                return "Omega-odd-p"
            return "Omega-even-2" if char == 2 else "Omega-even-p"
        return "Omega-l-reduce"
    raise Inapplicable(f"no catalog entry for family {fam}")


def _entry_params(entry_id, fam, dim, q, eps, field) -> dict:
    get_entry(entry_id)
    if entry_id in ("PSL-p", "PSL-l", "SL-l", "GL-l"):
        return {"n": dim, "q": q}
    if entry_id in ("PSp-p", "PSp-2", "PSp-l-reduce"):
        if dim % 2:
            raise Inapplicable("symplectic dimension must be even")
        return {"n": dim // 2, "q": q}
    if entry_id in ("Omega-even-p", "Omega-even-2", "O-even-2"):
        if dim % 2:
            raise Inapplicable(f"{entry_id} takes an even dimension")
        out = {"m": dim // 2, "q": q}
        if eps:
            out["eps"] = eps
        elif entry_id == "O-even-2":
            raise Inapplicable("even-dimensional orthogonal groups need --eps")
        else:
            out["eps"] = "+"
        return out
    if entry_id in ("Omega-odd-p", "O-odd-2"):
        if dim % 2 == 0:
            raise Inapplicable(f"{entry_id} takes an odd dimension")
        return {"m": (dim - 1) // 2, "q": q}
    if entry_id == "Omega-l-reduce":
        out = {"n": dim, "q": q}
        if dim % 2 == 0:
            if not eps:
                raise Inapplicable("even-dimensional orthogonal groups need --eps")
            out["eps"] = eps
        return out
    if entry_id in ("U-even-p", "U-odd-p"):
        if field.r % 2:
            raise Inapplicable("unitary groups need q = p^(2r)")
        m = dim // 2 if entry_id == "U-even-p" else (dim - 1) // 2
        if (entry_id == "U-even-p") != (dim % 2 == 0):
            raise Inapplicable(f"{entry_id} does not match dimension {dim}")
        return {"m": m, "p": field.p, "r": field.r // 2}
    if entry_id in ("PSU-l-reduce", "U-l-reduce"):
        if field.r % 2:
            raise Inapplicable("unitary groups need q = p^(2r)")
        return {"n": dim, "q": field.p ** (field.r // 2)}
    raise Inapplicable(f"unknown entry {entry_id}")


def cmd_verify(args) -> int:
    case = _case_from_cli(args)
    rep = verify_claim(case, args.budget, args.allow_l2_psl)
    data = rep.as_dict(timings=args.timings)
    lines = [f"{rep.case.case_id}  ambient {rep.ambient}  verdict {rep.verdict}"]
    if rep.reason:
        lines.append(f"  reason: {rep.reason}")
    if rep.expected_order is not None:
        lines.append(f"  model order {rep.expected_order}, Sylow order {rep.actual_order}")
    if rep.witness:
        lines.append("  witness generator map:")
        lines += [f"    {a}  ->  {b}" for a, b in rep.witness]
    _emit(data, args.json, lines)
    if rep.verdict in ("FAIL-ORDER", "FAIL-ISO"):
        return EXIT_FAIL
    if rep.verdict == "BUDGET":
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify_suite(args) -> int:
    cases = default_suite(allow_l2=args.allow_l2_psl)
    result = run_suite(cases, budget=args.budget, jobs=args.jobs,
                       allow_l2=args.allow_l2_psl, max_order=args.max_order)
    payload = result.to_json(timings=args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    if args.json:
        print(payload, end="")
    else:
        for r in result.reports:
            q = " [quarantined]" if r.case.quarantined else ""
            extra = f" ({r.reason})" if r.reason else ""
            print(f"{r.case.case_id:36s} {r.ambient:14s} {r.verdict}{q}{extra}")
        s = result.summary
        print(f"total {s['total']}: " +
              ", ".join(f"{k} {v}" for k, v in s["verdicts"].items() if v))
        if s["quarantined"]:
            print("quarantined verdicts: " +
                  ", ".join(f"{k}={v}" for k, v in s["quarantined"].items()))
    return result.exit_code


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sylowkit",
        description="Construct Sylow-subgroup models of small classical groups "
                    "and verify them against brute-force extraction "
                    f"(kernel backend: {backends.BACKEND})",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, timings=False):
        p.add_argument("--json", action="store_true", help="stable JSON output")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="enumeration budget per group")
        p.add_argument("--allow-l2-psl", action="store_true",
                       help="enable the provisional l = 2 linear-group models")
        if timings:
            p.add_argument("--timings", action="store_true",
                           help="include wall-time ms in JSON (breaks byte-stability)")

    p = sub.add_parser("order", help="order of a group expression")
    p.add_argument("expr")
    common(p)
    p.set_defaults(fn=cmd_order)

    p = sub.add_parser("fingerprint", help="isomorphism-invariant fingerprint")
    p.add_argument("expr")
    common(p)
    p.set_defaults(fn=cmd_fingerprint)

    p = sub.add_parser("sylow", help="extract a Sylow p-subgroup")
    p.add_argument("p", type=int)
    p.add_argument("expr")
    common(p)
    p.set_defaults(fn=cmd_sylow)

    p = sub.add_parser("iso", help="exact isomorphism test of two expressions")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    common(p)
    p.set_defaults(fn=cmd_iso)

    p = sub.add_parser("list-catalog", help="list the claim catalog")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_list_catalog)

    p = sub.add_parser("verify", help="verify one catalog claim")
    p.add_argument("--family", required=True, choices=sorted(
        {"GL", "SL", "PSL", "Sp", "PSp", "U", "SU", "PSU", "O", "SO", "Omega", "POmega"}))
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--dim", type=int, required=True, help="matrix dimension")
    p.add_argument("--q", type=int, required=True, help="entry field size")
    p.add_argument("--eps", choices=["+", "-"], default="")
    p.add_argument("--entry", default=None, help="catalog entry id (default: inferred)")
    common(p, timings=True)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("verify-suite", help="run the verification suite")
    p.add_argument("--max-order", type=int, default=None,
                   help="keep only cases whose ambient order is at most this")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes (default 1; deterministic output)")
    p.add_argument("--out", default=None, help="write the JSON report here")
    common(p, timings=True)
    p.set_defaults(fn=cmd_verify_suite)

    return ap


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ExprError as e:
        print(e.diagnostic(), file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except Inapplicable as e:
        print(f"inapplicable: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SylowkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
