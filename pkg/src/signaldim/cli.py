"""Command-line front end.

Exit codes: 0 success, 1 negative computational result where the command
promises one (e.g. `witness` when no witness exists), 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .classical import (
    ConditionalDistribution,
    count_vertices,
    effective_vertices,
)
from .core import GptSystem
from .lp import LpProblem, find_witness, solve_feasibility, verify_certificate
from .measurements import enumerate_extremal_measurements, reduce_to_orbits
from .models import (
    check_complete_positivity,
    classify_compositions,
    named_system,
)
from .ratlin import format_rational, parse_rational
from .signaling import (
    minimal_classical_dimension,
    signaling_dimension,
    system_orbits,
)


class InputError(Exception):
    pass


def _load_system(path) -> GptSystem:
    try:
        return GptSystem.load(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        raise InputError(f"system file {path}: {e}") from e


def _load_distribution(path) -> ConditionalDistribution:
    try:
        return ConditionalDistribution.load(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        raise InputError(f"distribution file {path}: {e}") from e


def _write_json(path, payload) -> None:
    with open(path, "w") as f:
        json.dump(payload, f, indent=1)
        f.write("\n")


def cmd_model(args) -> int:
    try:
        system = named_system(args.name)
    except ValueError as e:
        raise InputError(str(e)) from e
    if args.emit:
        system.save(args.emit)
    print(
        f"{args.name}: linear dimension {system.linear_dimension}, "
        f"{len(system.states)} states, {len(system.effects)} effects"
    )
    return 0


def cmd_classify(args) -> int:
    models = classify_compositions()
    for m in models:
        print(
            f"{m.name}: entangled states {sorted(m.entangled_state_indices)}, "
            f"entangled effects {sorted(m.entangled_effect_indices)}"
        )
    from .models import janotta_model

    violation = check_complete_positivity(janotta_model())
    print(f"janotta: rejected ({violation})")
    return 0


def cmd_measurements(args) -> int:
    system = _load_system(args.system)
    orbits = system_orbits(system)
    measurements = enumerate_extremal_measurements(system)
    payload = {
        "format": 1,
        "measurement_count": len(measurements),
        "orbits": [_orbit_payload(o) for o in orbits],
    }
    if args.output:
        _write_json(args.output, payload)
    print(f"{len(measurements)} extremal measurements, {len(orbits)} orbits")
    return 0


def _orbit_payload(o) -> dict:
    w240 = [x * 240 for x in o.representative.weights]
    if all(x.denominator == 1 for x in w240):
        weights = [int(x) for x in w240]
        scaled = True
    else:
        weights = [format_rational(x) for x in o.representative.weights]
        scaled = False
    return {
        "class_id": o.class_id,
        "size": o.size,
        "weights_x240" if scaled else "weights": weights,
    }


def cmd_vertices(args) -> int:
    print(count_vertices(args.m, args.n, args.d))
    return 0


def cmd_effective(args) -> int:
    p = _load_distribution(args.input)
    strategies = effective_vertices(p, args.d)
    if args.output:
        with open(args.output, "w") as f:
            for s in strategies:
                f.write(json.dumps(list(s)))
                f.write("\n")
    print(len(strategies))
    return 0


def cmd_dimension(args) -> int:
    p = _load_distribution(args.input)
    report = minimal_classical_dimension(
        p, box=args.box, search=args.search, presolve=not args.no_presolve
    )
    if not verify_certificate_chain(p, report):
        print("certificate verification failed", file=sys.stderr)
        return 1
    if args.report:
        _write_json(args.report, report.to_json_dict())
    print(report.minimal_d)
    return 0


def verify_certificate_chain(p, report) -> bool:
    from .classical import reduce_rows

    reduced, _ = reduce_rows(p)
    ok = verify_certificate(reduced, report.certificate_up)
    if report.certificate_down is not None:
        ok = ok and verify_certificate(reduced, report.certificate_down)
    return ok


def cmd_witness(args) -> int:
    p = _load_distribution(args.input)
    strategies = effective_vertices(p, args.d)
    cert = find_witness(
        p, strategies, box=args.box, dim=args.d, presolve=not args.no_presolve
    )
    if cert is None:
        print("no witness: distribution is classically simulable at this dimension")
        return 1
    if not verify_certificate(p, cert):
        print("certificate verification failed", file=sys.stderr)
        return 1
    if args.output:
        _write_json(args.output, cert.to_json_dict())
    print(format_rational(cert.value))
    return 0


def cmd_signaling(args) -> int:
    system = _load_system(args.system)
    reports: list = []
    kappa = signaling_dimension(
        system,
        search=args.search,
        presolve=not args.no_presolve,
        threads=args.threads,
        collect_reports=reports,
    )
    if args.report:
        _write_json(
            args.report,
            {"format": 1, "signaling_dimension": kappa,
             "reports": [r.to_json_dict() for r in reports]},
        )
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["M", "#", "d", "witness", "v", "V"])
            for r in reports:
                witness = (
                    format_rational(r.certificate_down.value)
                    if r.certificate_down is not None
                    else ""
                )
                w.writerow(
                    [r.measurement_class, r.support_size, r.minimal_d, witness,
                     r.v_used, r.V_total]
                )
    print(kappa)
    return 0


def _box_type(s: str) -> Fraction:
    v = parse_rational(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("box must be > 0")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="signaldim",
        description="Exact signaling-dimension computations for GPT systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="emit a named system as JSON")
    p.add_argument("--name", required=True,
                   help="squit | pr | hs | frozen-16..19 | classical-<d>")
    p.add_argument("--emit", help="output system JSON path")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("classify", help="list consistent two-squit compositions")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("measurements", help="enumerate extremal measurement orbits")
    p.add_argument("--system", required=True)
    p.add_argument("--output", help="orbit JSON path")
    p.set_defaults(func=cmd_measurements)

    p = sub.add_parser("vertices", help="count vertices of the classical polytope")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("effective", help="enumerate effective deterministic strategies")
    p.add_argument("--input", required=True, help="distribution JSON path")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--output", help="strategies path, one JSON array per line")
    p.set_defaults(func=cmd_effective)

    p = sub.add_parser("dimension", help="minimal classical dimension of a distribution")
    p.add_argument("--input", required=True)
    p.add_argument("--report", help="DimensionReport JSON path")
    p.add_argument("--box", type=_box_type, default=Fraction(1))
    p.add_argument("--search", choices=("linear", "binary"), default="linear")
    p.add_argument("--no-presolve", action="store_true")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("witness", help="separating witness against P_d")
    p.add_argument("--input", required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--box", type=_box_type, default=Fraction(1))
    p.add_argument("--output", help="witness JSON path")
    p.add_argument("--no-presolve", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("signaling", help="signaling dimension of a system")
    p.add_argument("--system", required=True)
    p.add_argument("--report", help="full per-orbit report JSON path")
    p.add_argument("--csv", help="summary CSV path (columns M, #, d, witness, v, V)")
    p.add_argument("--search", choices=("linear", "binary"), default="linear")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--no-presolve", action="store_true")
    p.set_defaults(func=cmd_signaling)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
