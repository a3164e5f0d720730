"""Command-line driver: frey-sieve {units,sieve,levelraise,eigensys,bench}.

Reports are plain structured text with stable key order; pass
`--format json-lines` for one JSON object per line.  Data files resolve in
the order: explicit path, $FREY_SIEVE_DATA directory, packaged defaults.
Exit codes: 0 all requested checks passed, 1 a check failed, 2 bad usage
or malformed input data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import eigensystems as eig
from . import sieve as sv
from . import units as un
from .cyclotomic import FULL, split_prime
from .freycurves import CurveModelError, load_curve_model
from .models import load_default_model


class CheckFailure(Exception):
    """A requested verification did not hold (exit 1)."""


class DataError(Exception):
    """Malformed input or configuration (exit 2)."""


def _emit(lines, fmt, out=sys.stdout):
    if fmt == "json-lines":
        for k, v in lines:
            out.write(json.dumps({"key": k, "value": v}, sort_keys=True) + "\n")
    else:
        for k, v in lines:
            out.write(f"{k}: {v}\n")


def _resolve_curve(spec_text):
    """A --curve value: a model name ("E"/"F"), or a path to a model file."""
    if spec_text in ("E", "F"):
        data_dir = os.environ.get("FREY_SIEVE_DATA")
        if data_dir:
            path = os.path.join(data_dir, f"curve_{spec_text}.model")
            if os.path.exists(path):
                return load_curve_model(path)
        return load_default_model(spec_text)
    if not os.path.exists(spec_text):
        raise DataError(f"curve model file not found: {spec_text}")
    return load_curve_model(spec_text)


def _parse_prime_list(text):
    if text in ("", "none"):
        return ()
    try:
        primes = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise DataError(f"bad prime list {text!r}") from None
    for p in primes:
        split_prime(p, FULL)  # rejects non-primes
    return primes


def _case_from_flag(flag):
    return {"13div": True, "13ndiv": False}[flag]


_PARITY = {"odd": sv.ODD_SUM, "four": sv.FOUR_DIVIDES, "none": sv.NO_PARITY}


# ---------------------------------------------------------------------------


def cmd_units(args):
    lines = [("classes", str(un.NUM_CLASSES))]
    gen_indices = un.GENERATOR_INDICES
    if args.generators:
        try:
            gen_indices = tuple(int(k) for k in args.generators.split(","))
        except ValueError:
            raise DataError(f"bad generator list {args.generators!r}") from None
        if len(gen_indices) != 5 or len(set(gen_indices)) != 5:
            raise DataError("generator override needs five distinct indices")
        if any(not 2 <= k <= 12 for k in gen_indices):
            raise DataError("generator indices must lie in 2..12")
    aux = _parse_prime_list(args.aux_primes) if args.aux_primes else None
    if args.verify:
        try:
            basis = un.UnitCharacterBasis(aux_primes=aux)
        except (RuntimeError, ValueError) as exc:
            raise CheckFailure(f"independence: FAILED ({exc})") from exc
        if gen_indices != un.GENERATOR_INDICES:
            rows = [
                [ch.value(un.cyclotomic_unit(k)) for k in gen_indices] for ch in basis.characters
            ]
            rank, _ = un._rank_rows(rows)
            if rank != 5:
                raise CheckFailure(f"independence: FAILED (override rank {rank} < 5)")
        lines.append(("independence", "ok (primes " + ",".join(map(str, basis.primes)) + ")"))
        cls, value = un.epsilon0(basis=basis)
        lines.append(("epsilon0 identity", "ok"))
        lines.append(("epsilon0 norm", str(value.norm())))
        lines.append(("epsilon0 class", cls.serialize()))
    _emit(lines, args.format)
    return 0


def cmd_sieve(args):
    primes = _parse_prime_list(args.primes)
    model = None
    if not args.no_modular and any(q not in sv.MODULAR_EXCLUDED for q in primes):
        model = _resolve_curve(args.curve)
    cases = (
        [sv.SieveCase(_case_from_flag(args.case), _PARITY[args.parity])]
        if args.case
        else [
            sv.SieveCase(False, _PARITY[args.parity]),
            sv.SieveCase(True, _PARITY[args.parity]),
        ]
    )
    eps_class, _ = un.epsilon0()
    total = 0
    all_annotated = True
    for case in cases:
        report = sv.surviving_units(
            case, primes, model=model, use_modular=not args.no_modular, threads=args.threads
        )
        total += len(report.survivors)
        for s in report.survivors:
            if s != eps_class:
                all_annotated = False
        _emit(report.to_lines(), args.format)
    note = " (epsilon0)" if (total >= 1 and all_annotated) else ""
    _emit([("survivors", f"{total}{note}")], args.format)
    return 0


def cmd_levelraise(args):
    qs = _parse_prime_list(args.q) or sv.LEVEL_RAISING_PRIMES
    constraints = []
    if not args.no_modular:
        constraints.append(sv.MODULAR)
    unit = None
    unit_text = "none" if args.no_unit else args.unit
    if unit_text != "none":
        constraints.insert(0, sv.SEVENTH_POWER)
        if unit_text == "epsilon0":
            unit = un.epsilon0_value()
        else:
            unit = un.UnitClass.parse(unit_text)
    if args.with_c1c2:
        constraints.append(sv.C1C2)
    model = None
    if sv.MODULAR in constraints and any(q not in sv.MODULAR_EXCLUDED for q in qs):
        model = _resolve_curve(args.curve)
    case = sv.SieveCase(False, sv.FOUR_DIVIDES)
    report = sv.level_raising_scan(
        qs, unit, case, model=model, constraints=tuple(constraints), threads=args.threads
    )
    _emit(report.to_lines(), args.format)
    return 0


def cmd_eigensys(args):
    try:
        table = eig.load_table(args.table)
    except FileNotFoundError:
        raise DataError(f"table not found: {args.table}") from None
    except eig.TableFormatError as exc:
        raise DataError(f"{args.table}: {exc}") from None
    lines = [
        ("table", args.table),
        ("rows", str(len(table.rows))),
        ("columns", ",".join(table.labels)),
    ]
    rational = _parse_prime_list(args.filter_primes)
    plist = [p for p in table.columns if p.q in rational]
    missing = set(rational) - {p.q for p in plist}
    if missing:
        raise DataError(f"filter primes {sorted(missing)} have no columns in the table")
    try:
        survivors = eig.level_raising_filter(table, plist)
    except (KeyError, ValueError) as exc:
        raise DataError(str(exc)) from None
    lines.append(("filter-primes", ",".join(p.label for p in plist)))
    if args.classify:
        classes = eig.classify_survivors(table, survivors)
        named = [classes[rid] for rid in survivors]
        lines.append(("survivors", f"{len(survivors)}; classified: " + ",".join(named)))
        for rid in survivors:
            lines.append(("survivor", f"{rid} -> {classes[rid]}"))
    else:
        lines.append(("survivors", str(len(survivors))))
        for rid in survivors:
            lines.append(("survivor", rid))
    if args.eisenstein:
        kept = eig.eisenstein_scan(table, args.eisenstein)
        lines.append(("eisenstein-rows", ",".join(kept) if kept else "none"))
    _emit(lines, args.format)
    return 0


def cmd_bench(args):
    from . import bench

    rows = bench.run(q=args.q, pairs=args.pairs, repeats=args.repeats)
    _emit(rows, args.format)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="frey-sieve", description=__doc__)
    ap.add_argument("--format", choices=("text", "json-lines"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("units", help="enumerate unit classes and verify the basis")
    p.add_argument("--verify", action="store_true", help="check independence and the unit identity")
    p.add_argument("--aux-primes", default=None, help="override auxiliary character primes")
    p.add_argument("--generators", default=None, help="override generator indices (five of 2..12)")
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("sieve", help="run the unit sieve")
    p.add_argument("--case", choices=("13div", "13ndiv"), default=None, help="default: both")
    p.add_argument("--parity", choices=("odd", "four", "none"), default="none")
    p.add_argument("--primes", default="2,11,19,23")
    p.add_argument("--curve", default="E", help="curve model name or file")
    p.add_argument("--no-modular", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("levelraise", help="scan pairs mod q for forced q | a+b")
    p.add_argument("--q", default="", help="primes to scan (default: the standard eleven)")
    p.add_argument("--unit", default="epsilon0", help="epsilon0, none, or five base-7 digits")
    p.add_argument("--no-unit", action="store_true", help="drop the 7th-power condition")
    p.add_argument("--curve", default="E")
    p.add_argument("--no-modular", action="store_true")
    p.add_argument("--with-c1c2", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_levelraise)

    p = sub.add_parser("eigensys", help="filter and classify an eigensystem table")
    p.add_argument("--table", required=True)
    p.add_argument("--filter-primes", default="5,83")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--eisenstein", type=int, default=None, help="norm bound for the 1+N scan")
    p.set_defaults(func=cmd_eigensys)

    p = sub.add_parser("bench", help="compare compiled and python kernels")
    p.add_argument("--q", type=int, default=83)
    p.add_argument("--pairs", type=int, default=512)
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CurveModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
