"""Command-line front end.

One subcommand per process; the JSON result goes to stdout, diagnostics to
stderr.  Exit codes: 0 success, 1 for hypothesis or domain failures (the
mathematics rules the request out, or a verification came back false), 2
when numerics were inconclusive within the configured budgets.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any

from .constructions import (
    Certificate,
    classify,
    construct_abundant,
    construct_independent,
    construct_moment,
    emit_plot_data,
    verify_certificate,
)
from .errors import BudgetError, DomainError, MajorantError, ResolutionError
from .exact_lattice import FrequencySet
from .lp_engine import EvalConfig
from .moment_curve import weak_majorant_bound, weak_majorant_ratio


def _load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _eval_config(args: argparse.Namespace) -> EvalConfig:
    kwargs: dict[str, Any] = {}
    if args.grid is not None:
        kwargs["grid_points_per_axis"] = args.grid
    if args.cutoff is not None:
        kwargs["series_total_degree_cutoff"] = args.cutoff
    if args.tol is not None:
        kwargs["backend_agreement_tol"] = args.tol
    if args.safety is not None:
        kwargs["margin_safety_factor"] = args.safety
    return EvalConfig(**kwargs)


def _has_eval_overrides(args: argparse.Namespace) -> bool:
    return any(x is not None for x in (args.grid, args.cutoff, args.tol, args.safety))


def _emit(doc: Any) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _write_plot(path: str, cert: Certificate, samples: int, cfg: EvalConfig) -> None:
    rows = emit_plot_data(cert, samples, cfg)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["p", "lhs", "rhs", "difference"])
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} plot rows to {path}", file=sys.stderr)


def _cmd_classify(args: argparse.Namespace) -> int:
    g = FrequencySet.from_json(_load_json(args.input))
    report = classify(g, scan_budget=args.scan_budget, cfg=_eval_config(args))
    _emit(report)
    return 0


def _cmd_construct(args: argparse.Namespace) -> int:
    g = FrequencySet.from_json(_load_json(args.input))
    cfg = _eval_config(args)
    if g.generator is not None:
        certs = construct_abundant(
            g,
            args.count,
            cfg,
            scan_budget=args.scan_budget,
            stream_budget=args.stream_budget,
        )
        _emit([c.to_json() for c in certs])
        lead = certs[0]
    else:
        lead = construct_independent(g, cfg)
        _emit(lead.to_json())
    if args.plot:
        _write_plot(args.plot, lead, args.plot_samples, cfg)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cert = Certificate.from_json(_load_json(args.input))
    cfg = _eval_config(args) if _has_eval_overrides(args) else None
    result = verify_certificate(cert, cfg)
    _emit(result.to_json())
    if result.verdict is True:
        return 0
    if result.verdict is False:
        print("verification failed: margin does not certify", file=sys.stderr)
        return 1
    print("verification inconclusive at the configured grid budget", file=sys.stderr)
    return 2


def _cmd_moment(args: argparse.Namespace) -> int:
    cfg = _eval_config(args)
    cert = construct_moment(args.d, args.p, cfg)
    _emit(cert.to_json())
    if args.plot:
        _write_plot(args.plot, cert, args.plot_samples, cfg)
    return 0


def _cmd_weak_majorant(args: argparse.Namespace) -> int:
    data = _load_json(args.input)
    for key in ("d", "p", "support", "coefficients", "majorant"):
        if key not in data:
            raise DomainError(f"weak-majorant input is missing the key '{key}'")
    ratio = weak_majorant_ratio(
        data["d"],
        data["p"],
        data["coefficients"],
        data["majorant"],
        data["support"],
        _eval_config(args),
    )
    bound = weak_majorant_bound(data["d"])
    _emit(
        {
            "d": data["d"],
            "p": data["p"],
            "ratio": ratio,
            "bound": bound,
            "within_bound": ratio <= bound + 1e-9,
        }
    )
    return 0


def _add_eval_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--grid", type=int, help="quadrature grid points per axis")
    sub.add_argument("--cutoff", type=int, help="series total degree cutoff")
    sub.add_argument("--tol", type=float, help="backend agreement tolerance")
    sub.add_argument("--safety", type=float, help="margin safety factor")


def _add_plot_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--plot", metavar="FILE", help="write (p, lhs, rhs, difference) CSV")
    sub.add_argument(
        "--plot-samples", type=int, default=9, help="interior sample count for --plot"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majorant",
        description="Classify frequency sets for the strict majorant property "
        "and build certified counterexamples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser("classify", help="structural report for a frequency set")
    p_classify.add_argument("--input", required=True, help="frequency set JSON file")
    p_classify.add_argument("--scan-budget", type=int, default=64)
    _add_eval_flags(p_classify)
    p_classify.set_defaults(func=_cmd_classify)

    p_construct = sub.add_parser("construct", help="build and certify counterexamples")
    p_construct.add_argument("--input", required=True, help="frequency set JSON file")
    p_construct.add_argument(
        "--count", type=int, default=1, help="certificates to emit for generator sets"
    )
    p_construct.add_argument("--scan-budget", type=int, default=64)
    p_construct.add_argument("--stream-budget", type=int, default=400)
    _add_eval_flags(p_construct)
    _add_plot_flags(p_construct)
    p_construct.set_defaults(func=_cmd_construct)

    p_verify = sub.add_parser("verify", help="recompute a certificate's margin")
    p_verify.add_argument("--input", required=True, help="certificate JSON file")
    _add_eval_flags(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    p_moment = sub.add_parser(
        "moment", help="counterexample on the moment curve at a given exponent"
    )
    p_moment.add_argument("--d", type=int, required=True, help="ambient dimension")
    p_moment.add_argument("--p", type=float, required=True, help="target exponent")
    _add_eval_flags(p_moment)
    _add_plot_flags(p_moment)
    p_moment.set_defaults(func=_cmd_moment)

    p_weak = sub.add_parser(
        "weak-majorant", help="norm ratio against a majorant on moment-curve points"
    )
    p_weak.add_argument(
        "--input",
        required=True,
        help="JSON file with d, p, support, coefficients, majorant",
    )
    _add_eval_flags(p_weak)
    p_weak.set_defaults(func=_cmd_weak_majorant)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetError, ResolutionError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return 2
    except MajorantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
