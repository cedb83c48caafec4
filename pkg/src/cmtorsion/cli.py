"""Command-line front end.

Every subcommand prints one table as CSV (default) or as a JSON object
``{schema_version, command, parameters, rows, provenance}``.  Exit status is
0 on success, 2 on bad input and 1 when an internal consistency check fails
(for instance a regression table mismatch under ``table1 --check``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import asymptotics, cartan, degrees, quadorders, thresholds

SCHEMA_VERSION = "1.0"
CACHE_ENV = "CMTORSION_CACHE"

log = logging.getLogger("cmtorsion")


class CheckFailed(Exception):
    """Raised after emission when a regression check found differences."""


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, (list, tuple)):
        return ",".join(str(v) for v in value)
    if value is None:
        return ""
    return str(value)


def _approx(x) -> float:
    return float(x)


# --- cache -----------------------------------------------------------------

def load_cache(path: Path) -> dict[int, int]:
    entries: dict[int, int] = {}
    if not path.exists():
        return entries
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            D, h = (int(tok) for tok in line.split())
        except ValueError:
            raise ValueError(f"{path}:{lineno}: expected 'D h', got {line!r}") from None
        entries[D] = h
    return entries


def save_cache(path: Path, entries: dict[int, int]) -> None:
    lines = [f"{D} {h}\n" for D, h in sorted(entries.items(), key=lambda kv: -kv[0])]
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.writelines(lines)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


# --- subcommands -----------------------------------------------------------

def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        flag = {"N": "-N", "D": "-D", "max_n": "--max-n", "H": "-H"}[name]
        raise ValueError(f"{args.command} requires {flag}")
    return value


def cmd_class_number(args):
    D = _need(args, "D")
    p = quadorders.order_profile(D)
    rows = [{"D": p.D, "D0": p.D0, "f": p.f, "w": p.w, "h": p.h}]
    return rows, {"h": "reduced-forms", "w": "unit-count", "D0": "conductor-decomposition"}


def cmd_forms(args):
    D = _need(args, "D")
    rows = [{"D": D, "a": f.a, "b": f.b, "c": f.c} for f in quadorders.reduced_forms(D)]
    return rows, {"a": "reduced-forms", "b": "reduced-forms", "c": "reduced-forms"}


def cmd_cm_degree(args):
    N = _need(args, "N")
    res = degrees.least_cm_degree(N, args.scan_bound)
    rows = [{
        "N": res.N, "d": res.d_cm, "attaining": list(res.attaining),
        "scan_bound": res.scan_bound, "completeness": res.completeness,
    }]
    return rows, {"d": "least-cm-degree", "attaining": "least-cm-degree"}


def cmd_table1(args):
    report = degrees.table1_reproduce(args.scan_bound or 700)
    rows = []
    for r in report.rows:
        rows.append({
            "N": r.N, "expected_d": r.expected_d, "expected_D": list(r.expected_D),
            "computed_d": r.computed_d, "computed_D": list(r.computed_D), "status": r.status,
        })
    if args.check and report.mismatches:
        bad = ", ".join(str(r.N) for r in report.mismatches)
        return rows, {"computed_d": "least-cm-degree"}, f"regression table mismatch at N = {bad}"
    return rows, {"computed_d": "least-cm-degree"}


def cmd_cartan(args):
    N = _need(args, "N")
    if args.D is not None:
        Ds = [args.D]
    else:
        Ds = sorted(cartan.representative_discriminants(N).values(), reverse=True)
    rows = []
    for D in Ds:
        ctx = cartan.build_cartan(D, N)
        rep = cartan.orbits(ctx)
        rows.append({
            "D": D, "N": N, "type": str(ctx.type),
            "unit_group_order": rep.unit_group_order,
            "orbit_sizes": list(rep.orbit_sizes),
            "normalizer_order": rep.normalizer_order,
            "normalizer_index": rep.normalizer_index,
            "conjugation_ok": cartan.conjugation_action_check(ctx),
            "torsion_field_degree_bound": cartan.torsion_field_degree_bound(D, N),
        })
    return rows, {"orbit_sizes": "cartan-orbits", "normalizer_index": "cartan-normalizer",
                  "torsion_field_degree_bound": "torsion-field-degree"}


def _threshold_row(rep: thresholds.ThresholdReport) -> dict:
    return {
        "N": rep.N, "index": rep.index,
        "gonality_lower_unconditional": rep.gonality_lower_unconditional,
        "gonality_lower_conditional": rep.gonality_lower_conditional,
        "finite_threshold_unconditional": rep.finite_threshold_unconditional,
        "finite_threshold_conditional": rep.finite_threshold_conditional,
        "infinite_bound": rep.infinite_bound, "d_cm": rep.d_cm, "verdict": rep.verdict,
    }


_THRESHOLD_PROVENANCE = {
    "finite_threshold_unconditional": "gonality-finiteness",
    "finite_threshold_conditional": "gonality-finiteness-selberg",
    "infinite_bound": "canonical-map-bound",
    "d_cm": "least-cm-degree",
}


def cmd_thresholds(args):
    N = _need(args, "N")
    rep = thresholds.threshold_report(N, args.conditional, args.scan_bound)
    return [_threshold_row(rep)], _THRESHOLD_PROVENANCE


def cmd_crossover(args):
    N_max = _need(args, "max_n")
    scan = thresholds.crossover_scan(N_max, args.scan_bound, args.conditional)
    rows = []
    for rep in scan.reports:
        row = _threshold_row(rep)
        row["is_last_cm_above"] = rep.N == scan.last_cm_above
        rows.append(row)
    return rows, _THRESHOLD_PROVENANCE


def cmd_inert_family(args):
    H = _need(args, "H")
    spec = asymptotics.inert_family(H, args.scan_bound or 10_000)
    rows = [{"modulus": m, "allowed_residues": list(allowed)} for m, allowed in spec.residue_conditions]
    rows.sort(key=lambda r: r["modulus"])
    if args.max_n:
        res = asymptotics.family_sieve(spec, args.max_n)
        log.info("sieve to %d: %d family primes, %d counterexamples, density %.6g vs %.6g",
                 args.max_n, len(res.family), len(res.counterexamples),
                 res.empirical_density, res.predicted_density)
        if res.counterexamples:
            return rows, {"allowed_residues": "inert-family"}, (
                f"family primes failing the symbol check: {res.counterexamples[:10]}")
    return rows, {"allowed_residues": "inert-family"}


def cmd_growth_sequence(args):
    n_max = _need(args, "max_n")
    rows = []
    for pt in asymptotics.torsion_growth_sequence(n_max):
        ratio = _approx(pt.ratio)
        pred = _approx(pt.mertens_prediction)
        rows.append({
            "n": pt.n, "p_n": pt.p_n,
            "N_n_digits": len(str(pt.N_n)),
            "ratio_approx": ratio,
            "mertens_prediction_approx": pred,
            "ratio_over_prediction_approx": ratio / pred,
        })
    return rows, {"ratio_approx": "torsion-growth", "mertens_prediction_approx": "mertens"}


def cmd_upper_bound(args):
    if args.fit:
        N_max = _need(args, "max_n")
        fit = asymptotics.upper_bound_exponent_fit(5, N_max)
        rows = [{
            "N_min": fit.N_min, "N_max": fit.N_max, "n_primes": fit.n_primes,
            "slope_approx": fit.slope, "burgess_reference_approx": fit.burgess_reference,
            "grh_reference_approx": fit.grh_reference,
        }]
        return rows, {"slope_approx": "upper-bound-fit"}
    if args.N is not None:
        Ns = [args.N]
    else:
        from .arith import primes_between
        Ns = primes_between(5, _need(args, "max_n"))
    rows = []
    for N in Ns:
        D = asymptotics.nonresidue_discriminant(N)
        D0 = quadorders.decompose(D)[0]
        rows.append({
            "N": N, "M": -D if D % 4 else -D // 4, "D": D,
            "h": quadorders.class_number(D0),
            "upper_bound": asymptotics.cm_degree_upper_bound(N),
        })
    return rows, {"upper_bound": "nonresidue-upper-bound"}


COMMANDS = {
    "class-number": cmd_class_number,
    "forms": cmd_forms,
    "cm-degree": cmd_cm_degree,
    "table1": cmd_table1,
    "cartan": cmd_cartan,
    "thresholds": cmd_thresholds,
    "crossover": cmd_crossover,
    "inert-family": cmd_inert_family,
    "growth-sequence": cmd_growth_sequence,
    "upper-bound": cmd_upper_bound,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-N", type=int, help="odd prime level")
    common.add_argument("-D", type=int, help="negative discriminant")
    common.add_argument("-H", type=int, help="class number cap (inert-family)")
    common.add_argument("--scan-bound", type=int, help="largest |D| scanned")
    common.add_argument("--max-n", type=int, help="window end, sequence length or sieve limit")
    common.add_argument("--conditional", action="store_true",
                        help="use the Selberg-conditional finiteness threshold")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--cache", type=Path, help=f"class number cache file (default ${CACHE_ENV})")
    common.add_argument("--check", action="store_true", help="fail on regression table differences")
    common.add_argument("--fit", action="store_true", help="upper-bound: fit the growth exponent")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cmtorsion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def render(command: str, parameters: dict, rows: list[dict], provenance: dict, fmt: str) -> str:
    if fmt == "json":
        def conv(v):
            if isinstance(v, Fraction):
                return _fmt(v)
            if isinstance(v, float):
                return float(_fmt(v))
            if isinstance(v, tuple):
                return list(v)
            return v
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "parameters": parameters,
            "rows": [{k: conv(v) for k, v in row.items()} for row in rows],
            "provenance": provenance,
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    fields = list(rows[0]) if rows else []
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=stderr,
                        format="%(levelname)s %(message)s")

    cache_path = args.cache or (Path(os.environ[CACHE_ENV]) if os.environ.get(CACHE_ENV) else None)
    try:
        if cache_path is not None:
            quadorders.memo_load(load_cache(cache_path))
        out = COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"cmtorsion {args.command}: {exc}", file=stderr)
        return 2
    except AssertionError as exc:
        print(f"cmtorsion {args.command}: internal check failed: {exc}", file=stderr)
        return 1

    rows, provenance, failure = (out + (None,))[:3]
    parameters = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in sorted(vars(args).items())
        if k not in ("command", "format", "verbose") and v not in (None, False)
    }
    stdout.write(render(args.command, parameters, rows, provenance, args.format))
    if cache_path is not None:
        save_cache(cache_path, quadorders.memo_snapshot())
    if failure:
        print(f"cmtorsion {args.command}: {failure}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
