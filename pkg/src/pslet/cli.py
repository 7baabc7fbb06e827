"""Command-line front end.

Subcommands:
    solve    one bound-state computation (scaled or dimensional input)
    table    reproduce a built-in reference table (T1..T4)
    oracle   direct Numerov eigenvalue only
    compare  series-vs-oracle agreement over a scaled table

Output formats: human (default), csv (header + one row per record, plain
``.`` decimals), json (a single array of records with snake_case keys).
All flags can be preset from a json config file via --config; environment
variables are deliberately not consulted so runs stay reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .classical import QuantumProblem
from .errors import PsletError
from .oracle import RadialGrid, oracle_eigenvalue
from .pipeline import (TABLES, EnergyRecord, compare_table, convert_units,
                       make_record, run_table, solve_problem)
from .precision import DEFAULT_DPS
from .series import DEFAULT_TERMS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pslet",
        description="Screened-Coulomb bound states via a shifted-l "
                    "pseudoperturbation series with Pade acceleration.")
    parser.add_argument("--config", help="json file with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=DEFAULT_TERMS,
                        help="number of series terms (default 10)")
    common.add_argument("--digits", type=int, default=DEFAULT_DPS,
                        help="working precision in decimal digits (default 50)")
    common.add_argument("--format", choices=("human", "csv", "json"),
                        default="human")
    common.add_argument("--out", help="write output to this path instead of stdout")

    p_solve = sub.add_parser("solve", parents=[common],
                             help="solve one bound state")
    p_solve.add_argument("--l", type=int, required=True)
    p_solve.add_argument("--nr", type=int, default=0)
    group = p_solve.add_mutually_exclusive_group(required=True)
    group.add_argument("--Z", dest="z", type=int,
                       help="nuclear charge; screening follows the Z-rule")
    group.add_argument("--alpha-prime", dest="alpha_prime",
                       help="scaled screening parameter (decimal string)")
    p_solve.add_argument("--pade", default="4,4", metavar="N,M",
                         help="additionally report this Pade entry")
    p_solve.add_argument("--units", choices=("hartree", "eV", "keV"),
                         default="hartree", help="unit for the human display")
    p_solve.add_argument("--oracle", action="store_true",
                         help="also run the direct solver")

    p_table = sub.add_parser("table", parents=[common],
                             help="reproduce a built-in table")
    p_table.add_argument("--id", dest="table_id", required=True,
                         choices=sorted(TABLES))
    p_table.add_argument("--oracle", action="store_true",
                         help="attach direct-solver energies to each row")

    p_oracle = sub.add_parser("oracle", help="direct Numerov eigenvalue")
    p_oracle.add_argument("--alpha-prime", dest="alpha_prime", required=True)
    p_oracle.add_argument("--l", type=int, required=True)
    p_oracle.add_argument("--nr", type=int, default=0)
    p_oracle.add_argument("--grid-points", type=int, default=20000)
    p_oracle.add_argument("--format", choices=("human", "json"), default="human")
    p_oracle.add_argument("--out")

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="series vs oracle over a scaled table")
    p_cmp.add_argument("--id", dest="table_id", default="T3",
                       choices=("T3", "T4"))
    p_cmp.add_argument("--tolerance", type=float, default=1e-6)
    return parser


def _apply_config(parser, argv):
    # --config presets flag defaults; explicit flags still win
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        with open(known.config) as fh:
            presets = json.load(fh)
        for action in parser._subparsers._group_actions[0].choices.values():
            usable = {k: v for k, v in presets.items()
                      if any(k == a.dest for a in action._actions)}
            action.set_defaults(**usable)


def _validate(args) -> None:
    order = getattr(args, "order", DEFAULT_TERMS)
    digits = getattr(args, "digits", DEFAULT_DPS)
    if order > 6 and digits < 30:
        raise SystemExit(
            f"--digits {digits} is too low for --order {order}: "
            "series orders above 6 need at least 30 digits")


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_csv(records) -> str:
    buf = io.StringIO()
    fields = list(records[0].as_dict()) if records else []
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.as_dict())
    return buf.getvalue()


def _records_json(records) -> str:
    return json.dumps([rec.as_dict() for rec in records], indent=2) + "\n"


def _human_solve(record: EnergyRecord, units: str, extra=None) -> str:
    lines = [
        f"mode            {record.mode}",
        f"l, nr           {record.l}, {record.nr}",
    ]
    if record.z is not None:
        lines.append(f"Z               {record.z}")
    if record.alpha_prime is not None:
        lines.append(f"alpha'          {record.alpha_prime:.10g}")
    lines += [
        f"r0              {record.r0:.15g}",
        f"w               {record.w:.15g}",
        f"beta            {record.beta:.15g}",
        f"lbar            {record.lbar:.15g}",
    ]
    scale = float(convert_units(1, units)) if units != "hartree" else 1.0
    suffix = f" {units}" if units != "hartree" else ""
    lines += [
        f"series sum      {record.energy_sum * scale:.15g}{suffix}",
        f"E[4,4]          {record.energy_pade44 * scale:.15g}{suffix}",
    ]
    if record.energy_pade45 is not None:
        lines.append(f"E[4,5]          {record.energy_pade45 * scale:.15g}{suffix}")
    lines.append(f"uncertainty     {record.uncertainty * scale:.3g}{suffix}")
    lines.append(f"stable digits   {record.agreement_digits}")
    if extra:
        lines.extend(extra)
    if record.oracle_energy is not None:
        lines.append(f"oracle          {record.oracle_energy * scale:.12g}{suffix}")
        lines.append(f"|E44 - oracle|  {record.oracle_diff * scale:.3g}{suffix}")
    if record.flags:
        lines.append(f"flags           {', '.join(record.flags)}")
    return "\n".join(lines) + "\n"


def _human_table(table_id: str, records) -> str:
    spec = TABLES[table_id]
    lines = []
    if spec.mode == "dimensional":
        lines.append(f"{table_id}: binding energies, l={spec.l}, nr=0, keV")
        lines.append(f"{'Z':>4}  {'-E_sum':>15}  {'-E[4,4]':>15}  {'-E[4,5]':>15}  flags")
        for r in records:
            e_sum = -float(convert_units(r.energy_sum, "keV"))
            e45 = (-float(convert_units(r.energy_pade45, "keV"))
                   if r.energy_pade45 else float("nan"))
            lines.append(f"{r.z:>4}  {e_sum:15.9f}  {-r.energy_kev:15.9f}  "
                         f"{e45:15.9f}  {','.join(r.flags)}")
    else:
        lines.append(f"{table_id}: scaled ground-state energies, l={spec.l}, nr=0")
        lines.append(f"{'alpha_p':>8}  {'-E_sum':>18}  {'-E[4,4]':>18}  {'-E[4,5]':>18}  flags")
        for r in records:
            e45 = -r.energy_pade45 if r.energy_pade45 is not None else float("nan")
            lines.append(f"{r.alpha_prime:8.3g}  {-r.energy_sum:18.15f}  "
                         f"{-r.energy_pade44:18.15f}  {e45:18.15f}  {','.join(r.flags)}")
    return "\n".join(lines) + "\n"


def _cmd_solve(args) -> int:
    if args.z is not None:
        problem = QuantumProblem.dimensional(args.z, args.l, args.nr)
    else:
        problem = QuantumProblem.scaled(args.alpha_prime, args.l, args.nr)
    record = make_record(problem, n_terms=args.order, dps=args.digits,
                         with_oracle=args.oracle)
    extra = None
    if args.pade != "4,4":
        try:
            n, m = (int(s) for s in args.pade.split(","))
        except ValueError:
            raise SystemExit(f"--pade wants N,M integers, got {args.pade!r}")
        result = solve_problem(problem, n_terms=args.order, dps=args.digits,
                               max_n=max(4, n), max_m=max(5, m))
        value = result.pade.table.get((n, m))
        if value is None:
            raise SystemExit(f"Pade entry [{n},{m}] needs {n + m + 1} series "
                             f"terms, have {args.order}")
        extra = [f"E[{n},{m}]          {float(value):.15g}"]
    if args.format == "human":
        _emit(_human_solve(record, args.units, extra), args.out)
    elif args.format == "csv":
        _emit(_records_csv([record]), args.out)
    else:
        _emit(_records_json([record]), args.out)
    return 0


def _cmd_table(args) -> int:
    records, failures = run_table(args.table_id, n_terms=args.order,
                                  dps=args.digits, with_oracle=args.oracle)
    if args.format == "human":
        _emit(_human_table(args.table_id, records), args.out)
    elif args.format == "csv":
        _emit(_records_csv(records), args.out)
    else:
        _emit(_records_json(records), args.out)
    for problem, exc in failures:
        print(f"row failed ({problem.mode}, l={problem.l}): {exc}",
              file=sys.stderr)
    return 1 if failures else 0


def _cmd_oracle(args) -> int:
    problem = QuantumProblem.scaled(args.alpha_prime, args.l, args.nr)
    result = oracle_eigenvalue(problem.potential, args.l, args.nr,
                               grid=None if args.grid_points == 20000 else
                               RadialGrid(count=args.grid_points))
    payload = {
        "alpha_prime": float(args.alpha_prime),
        "l": args.l,
        "nr": args.nr,
        "energy": float(f"{result.energy:.15g}"),
        "node_count": result.node_count,
        "mismatch": result.mismatch,
        "iterations": result.iterations,
        "grid_points": result.grid.count,
        "r_max": result.grid.r_max,
    }
    if args.format == "json":
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        text = "\n".join(f"{k:<12} {v}" for k, v in payload.items()) + "\n"
        _emit(text, args.out)
    return 0


def _cmd_compare(args) -> int:
    rows = compare_table(args.table_id, tolerance=args.tolerance,
                         n_terms=args.order, dps=args.digits)
    if args.format == "json":
        payload = [row.__dict__ for row in rows]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [f"{'alpha_p':>8}  {'E[4,4]':>16}  {'oracle':>16}  "
                 f"{'|diff|':>10}  {'digits':>6}  result"]
        for row in rows:
            if row.oracle_energy is None:
                lines.append(f"{row.alpha_prime:8.3g}  {row.series_energy:16.12f}  "
                             f"{'-':>16}  {'-':>10}  {'-':>6}  {row.note}")
            else:
                verdict = "pass" if row.passed else "FAIL"
                note = f"  ({row.note})" if row.note else ""
                lines.append(f"{row.alpha_prime:8.3g}  {row.series_energy:16.12f}  "
                             f"{row.oracle_energy:16.12f}  {row.difference:10.3e}  "
                             f"{row.agreement_digits:>6}  {verdict}{note}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if all(row.passed for row in rows if row.passed is not None) else 1


def main(argv=None) -> int:
    parser = _build_parser()
    _apply_config(parser, argv if argv is not None else sys.argv[1:])
    args = parser.parse_args(argv)
    _validate(args)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        return _cmd_compare(args)
    except PsletError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
