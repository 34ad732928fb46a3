"""Command-line front end.

Every run writes JSON lines to stdout: a header echoing the resolved
configuration, one line per result, and a footer holding the timing (the
only field that varies between identical runs).  A short summary goes to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .budget import BudgetExceeded, set_budget
from .group import build_group, normalize_preset
from .ring import KINDS, make_ring

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", default="SL2", help="SL2, SL3, GL2, GL3 or Sp4")
    p.add_argument("--p", type=int, default=2, help="residue characteristic")
    p.add_argument("--r", type=int, default=2, help="nilpotency degree of the maximal ideal")
    p.add_argument("--n", type=int, default=1, help="residue field degree")
    p.add_argument("--kind", choices=KINDS, default="witt")
    p.add_argument("--group-twist", default="id", help="Weyl word of the Frobenius twist of G")
    p.add_argument("--budget", type=int, default=None, help="cap on enumeration sizes")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None, help="also write point sets to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chevring", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="order of G(R)")
    _common(p)
    p.add_argument("--enumerate", action="store_true", help="also count by closure enumeration")

    p = sub.add_parser("decompose", help="Iwahori or Bruhat factorisation of an element")
    _common(p)
    p.add_argument("--mode", choices=("bruhat", "iwahori"), default="bruhat")
    p.add_argument("--element", required=True, help="JSON rows, entries ints or coefficient lists")

    p = sub.add_parser("commutator", help="commutator of two root elements")
    _common(p)
    p.add_argument("--root", type=int, default=0, help="index into the positive roots")
    p.add_argument("--root2", default=None, help="index into all roots; default the negative of --root")
    p.add_argument("--x", default="1", help="parameter, int or JSON coefficient list")
    p.add_argument("--y", default="1")
    p.add_argument("--b", type=int, default=None, help="level of x (default: its valuation)")
    p.add_argument("--c", type=int, default=None, help="level of y (default: its valuation)")

    p = sub.add_parser("tori", help="F-fixed points of every torus twist")
    _common(p)

    p = sub.add_parser("chars", help="characters of T^F")
    _common(p)
    p.add_argument("--w-twist", default="id")
    p.add_argument("--regular", action="store_true", help="only regular characters, with certificates")

    p = sub.add_parser("inner-product", help="count of transporter classes carrying theta' to theta")
    _common(p)
    p.add_argument("--w-twist", default="id")
    p.add_argument("--w-twist-prime", default="id")
    p.add_argument("--theta", default="reg", help="reg, triv, an index, or images like 1/2,0")
    p.add_argument("--theta-prime", default="reg")
    p.add_argument("--override", action="store_true", help="skip the regularity precondition")

    p = sub.add_parser("sigma", help="point counts of Sigma and its Bruhat pieces")
    _common(p)
    p.add_argument("--w-twist", default="id")
    p.add_argument("--w-twist-prime", default="id")
    p.add_argument("--level", type=int, default=1)

    p = sub.add_parser("verify", help="run oracle property suites")
    _common(p)
    p.add_argument("--suite", default="all")
    p.add_argument("--inject", default=None, help="fault to inject, e.g. structure_constant")
    return parser


# ---------------------------------------------------------------------------


def _group(args):
    if args.p < 2 or args.r < 1 or args.n < 1:
        raise UsageError("need p >= 2, r >= 1, n >= 1")
    try:
        ring = make_ring(args.p, args.r, args.n, args.kind)
        return build_group(normalize_preset(args.preset), ring, args.group_twist)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def _weyl(G, name: str):
    try:
        return G.datum.weyl_by_name(name)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"unknown Weyl element {name!r}") from exc


def _scalar(G, text: str) -> int:
    try:
        v = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse parameter {text!r}") from exc
    R = G.ring
    if isinstance(v, list):
        return R.encode(list(v) + [0] * (R.dim - len(v)))
    if isinstance(v, int):
        return R.from_int(v)
    raise UsageError(f"parameter {text!r} should be an int or a coefficient list")


def _character(T, selector: str):
    from .torus import characters, regular_characters, trivial_character
    S = T.fixed(1).structure
    if selector == "reg":
        regs = regular_characters(T)
        if not regs:
            raise UsageError(f"torus {T.w.name()} has no regular character")
        return regs[0]
    if selector == "triv":
        return trivial_character(S)
    if selector.isdigit():
        chars = characters(S)
        k = int(selector)
        if k >= len(chars):
            raise UsageError(f"character index {k} out of range ({len(chars)} characters)")
        return chars[k]
    try:
        images = tuple(Fraction(x) % 1 for x in selector.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse character {selector!r}") from exc
    if len(images) != len(S.invariants):
        raise UsageError(f"need {len(S.invariants)} generator images")
    from .torus import Character
    for v, d in zip(images, S.invariants):
        if (v * d) % 1:
            raise UsageError(f"image {v} is not of order dividing {d}")
    return Character(S, images)


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "command"}
    cfg["command"] = args.command
    return cfg


# ---------------------------------------------------------------------------
# subcommands: each yields result records and returns an exit status


def cmd_order(args, emit):
    G = _group(args)
    emit({"group": G.to_record(), "order": G.order(), "mode": "formula"})
    if args.enumerate:
        from .oracle import enumerate_group
        emit({"order": len(enumerate_group(G)), "mode": "exhaustive", "scope": "closure from generators"})
    return 0


def cmd_decompose(args, emit):
    from .decomp import bruhat_decompose, iwahori_decompose
    G = _group(args)
    try:
        g = G.element(json.loads(args.element)).matrix
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"bad element: {exc}") from exc
    if args.mode == "iwahori":
        if G.level(g) < 1:
            raise UsageError("Iwahori decomposition needs an element of the first congruence subgroup")
        emit({"mode": "iwahori", **iwahori_decompose(G, g).to_record(G)})
    else:
        rec = bruhat_decompose(G, g)
        emit({"mode": "bruhat", "w": rec.w.name(), **rec.to_record(G)})
    return 0


def cmd_commutator(args, emit):
    from .decomp import chevalley_commutator, rank1_commutator
    G = _group(args)
    D = G.datum
    R = G.ring
    if not 0 <= args.root < len(D.positive):
        raise UsageError("root index out of range")
    a = D.positive[args.root]
    x, y = _scalar(G, args.x), _scalar(G, args.y)
    b = R.valuation(x) if args.b is None else args.b
    c = R.valuation(y) if args.c is None else args.c
    if args.root2 is None:
        try:
            rec = rank1_commutator(G, a, x, y, b, c)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        emit({
            "kind": "rank1", "root": list(a), "constant": rec.constant,
            "tau": G.to_int_rows(rec.tau), "u": R.decode(rec.u_parameter),
            "closed_tau": G.to_int_rows(rec.closed_tau), "closed_u": G.to_int_rows(rec.closed_u),
            "agrees": rec.agrees, "direct": G.to_int_rows(rec.direct),
        })
        return 0
    k = int(args.root2)
    if not 0 <= k < len(D.roots):
        raise UsageError("second root index out of range")
    factors = chevalley_commutator(G, a, x, D.roots[k], y, b, c)
    emit({"kind": "chevalley", "root": list(a), "root2": list(D.roots[k]),
          "factors": [{"root": list(f.root), "i": f.i, "j": f.j, "constant": f.constant,
                       "value": list(R.decode(f.value))} for f in factors]})
    return 0


def cmd_tori(args, emit):
    from .torus import make_torus
    G = _group(args)
    for w in G.datum.weyl_elements():
        T = make_torus(G, w)
        fp = T.fixed(1)
        emit({"twist": w.name(), "degree": fp.N, "order": fp.size,
              "invariants": list(fp.structure.invariants), "minimal_m": T.minimal_stabilizing_power(),
              "mode": "exhaustive"})
    return 0


def cmd_chars(args, emit):
    from .torus import characters, make_torus, regularity
    G = _group(args)
    T = make_torus(G, _weyl(G, args.w_twist))
    for idx, th in enumerate(characters(T.fixed(1).structure)):
        cert = regularity(T, th)
        if args.regular and not cert.regular:
            continue
        emit({"index": idx, "character": th.to_record(), "order": th.order, **cert.to_record()})
    return 0


def cmd_inner_product(args, emit):
    from .torus import make_torus
    from .variety import inner_product_rhs
    G = _group(args)
    T = make_torus(G, _weyl(G, args.w_twist))
    Tp = make_torus(G, _weyl(G, args.w_twist_prime))
    theta, theta_p = _character(T, args.theta), _character(Tp, args.theta_prime)
    try:
        rep = inner_product_rhs(T, theta, Tp, theta_p, override=args.override)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit({**rep.to_record(), "mode": "exhaustive"})
    return 0


def cmd_sigma(args, emit):
    from .torus import make_torus
    from .variety import sigma_partition, sigma_points
    G = _group(args)
    T = make_torus(G, _weyl(G, args.w_twist))
    Tp = make_torus(G, _weyl(G, args.w_twist_prime))
    sigma = sigma_points(T, Tp, args.level)
    pieces = sigma_partition(sigma)
    emit({"sigma": len(sigma), "header": sigma.header, "mode": "exhaustive",
          "pieces": {k: len(v) for k, v in pieces.items()}})
    if args.output:
        sigma.write(args.output)
    return 0


def cmd_verify(args, emit):
    from .oracle import DEFAULT_SEED, run_suite
    G = _group(args)
    scope = f"{G.preset}({G.ring.label()})"
    if not G.twist.is_identity:
        scope += f"@{G.twist.name()}"
    inject = {args.inject: True} if args.inject else None
    try:
        reports = run_suite(args.suite, scope, args.seed if args.seed is not None else DEFAULT_SEED, inject)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    failed = False
    for rep in reports:
        rec = rep.to_record()
        rec.pop("wall_time")
        emit(rec)
        failed = failed or rep.outcome == "fail"
    return EXIT_FAIL if failed else 0


COMMANDS = {
    "order": cmd_order, "decompose": cmd_decompose, "commutator": cmd_commutator, "tori": cmd_tori,
    "chars": cmd_chars, "inner-product": cmd_inner_product, "sigma": cmd_sigma, "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.budget is not None:
        set_budget(args.budget)
    out = sys.stdout
    out.write(json.dumps({"config": _config(args)}, sort_keys=True) + "\n")
    count = 0

    def emit(record: dict) -> None:
        nonlocal count
        count += 1
        out.write(json.dumps(record, sort_keys=True, default=str) + "\n")

    start = time.perf_counter()
    status = 0
    note = None
    try:
        status = COMMANDS[args.command](args, emit)
    except UsageError as exc:
        print(f"chevring: error: {exc}", file=sys.stderr)
        status, note = EXIT_USAGE, str(exc)
    except BudgetExceeded as exc:
        print(f"chevring: budget exceeded: {exc}", file=sys.stderr)
        status, note = EXIT_BUDGET, f"partial result: {count} records before the budget stopped enumeration"
    finally:
        set_budget(None)
    footer = {"footer": {"status": status, "records": count, "seconds": round(time.perf_counter() - start, 3)}}
    if note:
        footer["footer"]["note"] = note
    out.write(json.dumps(footer, sort_keys=True) + "\n")
    out.flush()
    print(f"chevring {args.command}: {count} records, status {status}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
