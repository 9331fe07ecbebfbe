"""Command-line entry point"""
import sys
import json
import logging
import argparse
from pathlib import Path
from typing import List, Optional

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent))

from dotenv import load_dotenv
import numpy as np

from catalog import CurveCatalog
from constants import EXIT_INTERNAL, EXIT_USAGE, SUITE_FAST, SUITE_FULL
from curve_data import CurveMatrix, Exponent
from errors import GKZError
from gamma_series import in_region, match_roots, series_residual, series_roots
from laurent import LaurentPoly, render, to_json as poly_to_json
from numeric import (
    Point,
    calibrate_residue_constant,
    eval_laurent,
    find_roots,
    residue_total_numeric,
    sample_point,
)
from report import Report, check
from semigroup import classify, e_set, holonomic_rank, is_cohen_macaulay, rational_dim
from settings import Settings
from solutions import basis_descriptor, phi, power_sum, psi_0, psi_d, total_residue_symbolic
from verification import run_suite

logger = logging.getLogger(__name__)


def parse_curve(text: str, catalog: CurveCatalog = None) -> CurveMatrix:
    """Curve JSON such as '{"k": [1,3], "d": 4}', or the name of a catalog entry."""
    text = text.strip()
    if text.startswith('{'):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise GKZError(f"Invalid curve JSON: {e}") from e
        return CurveMatrix.from_json(data)

    catalog = catalog or CurveCatalog()
    entry = catalog.get(text)
    if entry is None:
        raise GKZError(f"Unknown curve '{text}'; known names: {', '.join(catalog.names())}")
    return entry.curve


def parse_alpha(text: str) -> Exponent:
    try:
        return Exponent.from_json(json.loads(text))
    except (json.JSONDecodeError, TypeError) as e:
        raise GKZError(f"Exponent must look like [a1, a2], got {text!r}") from e


def parse_point(text: str, curve: CurveMatrix) -> Point:
    """Point JSON: one entry per support index, each a number or [re, im]."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GKZError(f"Invalid point JSON: {e}") from e
    if not isinstance(data, list):
        raise GKZError("Point must be a JSON list")
    return Point.from_json(curve, data)


def poly_result(p: LaurentPoly) -> dict:
    result = poly_to_json(p)
    result["text"] = render(p)
    return result


def cmd_classify(args, settings: Settings) -> Report:
    classification = classify(args.curve, args.alpha)
    results = classification.to_json()
    results["rank"] = holonomic_rank(args.curve, args.alpha)
    results["rational_dim"] = rational_dim(args.curve, args.alpha)
    return Report("classify", _inputs(args), results)


def cmd_eset(args, settings: Settings) -> Report:
    found = e_set(args.curve, settings)
    return Report("eset", _inputs(args), {"E": [alpha.to_json() for alpha in found]})


def cmd_cm(args, settings: Settings) -> Report:
    found = e_set(args.curve, settings)
    return Report("cm", _inputs(args), {
        "cohen_macaulay": is_cohen_macaulay(args.curve, settings),
        "E": [alpha.to_json() for alpha in found],
    })


def cmd_rank(args, settings: Settings) -> Report:
    return Report("rank", _inputs(args), {"rank": holonomic_rank(args.curve, args.alpha)})


def cmd_phi(args, settings: Settings) -> Report:
    return Report("phi", _inputs(args), poly_result(phi(args.curve, args.alpha)))


def cmd_psi0(args, settings: Settings) -> Report:
    return Report("psi0", _inputs(args), poly_result(psi_0(args.curve, args.alpha)))


def cmd_psid(args, settings: Settings) -> Report:
    return Report("psid", _inputs(args), poly_result(psi_d(args.curve, args.alpha)))


def cmd_powersum(args, settings: Settings) -> Report:
    return Report("powersum", _inputs(args), poly_result(power_sum(args.curve, args.s)))


def cmd_residue(args, settings: Settings) -> Report:
    report = Report("residue", _inputs(args))
    symbolic = None
    if args.a == 1 and args.b >= 1:
        symbolic = total_residue_symbolic(args.curve, args.b)
        report.results["symbolic"] = poly_result(symbolic)

    if args.point is not None:
        roots = find_roots(args.point, settings)
        value = residue_total_numeric(roots, args.a, args.b, settings)
        report.results["numeric"] = [value.real, value.imag]
        if symbolic is not None:
            expected = eval_laurent(symbolic, args.point)
            report.checks.append(check("residue/symbolic", abs(value - expected) / max(1.0, abs(expected)),
                                       settings.eps_check))
    elif args.a >= 2:
        rng = np.random.default_rng(args.seed)
        rootsets = [sample_point(args.curve, rng, settings)[1] for _ in range(3)]
        calibrated = calibrate_residue_constant(args.curve, args.a, args.b, rootsets, settings)
        report.results["calibration"] = calibrated.to_json()
        report.checks.append(check("residue/calibration", calibrated.spread, calibrated.tolerance))
    return report


def cmd_basis(args, settings: Settings) -> Report:
    return Report("basis", _inputs(args), basis_descriptor(args.curve, args.alpha).to_json())


def cmd_gamma_roots(args, settings: Settings) -> Report:
    truncation = args.trunc if args.trunc is not None else int(settings.gamma_truncation)
    roots = find_roots(args.point, settings)
    series = series_roots(args.point, truncation, settings)
    matches = match_roots(series, roots.roots)
    return Report("gamma-roots", _inputs(args), {
        "truncation": truncation,
        "in_region": in_region(args.point, settings.region_constant),
        "pairs": [match.to_json() for match in matches],
        "series_residual": series_residual(args.point, series),
        "iterated_residual": roots.residual,
    })


def cmd_verify(args, settings: Settings) -> Report:
    checks = run_suite(args.curve, seed=args.seed, suite=args.suite, settings=settings, workers=args.workers)
    return Report("verify", _inputs(args), {"seed": args.seed, "suite": args.suite}, checks)


def _inputs(args) -> dict:
    inputs = {"curve": args.curve.to_json()}
    for name in ("alpha", "point"):
        value = getattr(args, name, None)
        if value is not None:
            inputs[name] = value.to_json()
    for name in ("s", "a", "b", "trunc", "seed", "suite"):
        value = getattr(args, name, None)
        if value is not None:
            inputs[name] = value
    return inputs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkz",
        description="Rational solutions, rank and numeric checks for the hypergeometric system of a monomial curve.",
    )
    parser.add_argument("--format", choices=["json", "text"], default="json", help="Output format (default: json).")
    parser.add_argument("--verbose", action="store_true", help="Log progress at INFO level.")

    curve_arg = argparse.ArgumentParser(add_help=False)
    curve_arg.add_argument("--curve", required=True,
                           help='Curve JSON, e.g. \'{"k":[1,3],"d":4}\', or a name from data/curves.json.')
    alpha_arg = argparse.ArgumentParser(add_help=False)
    alpha_arg.add_argument("--alpha", required=True, help="Exponent JSON, e.g. '[1,2]'.")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("classify", parents=[curve_arg, alpha_arg], help="Scenario of an exponent.") \
        .set_defaults(handler=cmd_classify)
    commands.add_parser("eset", parents=[curve_arg], help="The set E(A).").set_defaults(handler=cmd_eset)
    commands.add_parser("cm", parents=[curve_arg], help="Cohen-Macaulay test.").set_defaults(handler=cmd_cm)
    commands.add_parser("rank", parents=[curve_arg, alpha_arg], help="Holonomic rank.") \
        .set_defaults(handler=cmd_rank)
    commands.add_parser("phi", parents=[curve_arg, alpha_arg], help="Hypergeometric polynomial.") \
        .set_defaults(handler=cmd_phi)
    commands.add_parser("psi0", parents=[curve_arg, alpha_arg], help="Laurent solution in 1/x_0.") \
        .set_defaults(handler=cmd_psi0)
    commands.add_parser("psid", parents=[curve_arg, alpha_arg], help="Laurent solution in 1/x_d.") \
        .set_defaults(handler=cmd_psid)

    powersum = commands.add_parser("powersum", parents=[curve_arg], help="Power sum of the roots.")
    powersum.add_argument("--s", type=int, required=True, help="Nonzero power.")
    powersum.set_defaults(handler=cmd_powersum)

    residue = commands.add_parser("residue", parents=[curve_arg], help="Total residue of t^b/f^a dt/t.")
    residue.add_argument("--a", type=int, default=1, help="Order of f in the denominator (default: 1).")
    residue.add_argument("--b", type=int, required=True, help="Power of t.")
    residue.add_argument("--point", help="Point JSON; entries are numbers or [re, im].")
    residue.add_argument("--seed", type=int, default=0, help="Seed for calibration points (default: 0).")
    residue.set_defaults(handler=cmd_residue)

    commands.add_parser("basis", parents=[curve_arg, alpha_arg], help="Basis of local solutions.") \
        .set_defaults(handler=cmd_basis)

    gamma = commands.add_parser("gamma-roots", parents=[curve_arg], help="Series roots against iterated roots.")
    gamma.add_argument("--point", required=True, help="Point JSON; entries are numbers or [re, im].")
    gamma.add_argument("--trunc", type=int, help="Lattice truncation N (default from settings).")
    gamma.set_defaults(handler=cmd_gamma_roots)

    verify = commands.add_parser("verify", parents=[curve_arg], help="Run the verification suite.")
    verify.add_argument("--seed", type=int, default=0, help="Random seed (default: 0).")
    verify.add_argument("--suite", choices=[SUITE_FAST, SUITE_FULL], default=SUITE_FAST)
    verify.add_argument("--workers", type=int, default=1, help="Threads for independent checks (default: 1).")
    verify.set_defaults(handler=cmd_verify)
    return parser


def _resolve_inputs(args):
    args.curve = parse_curve(args.curve)
    if getattr(args, "alpha", None) is not None:
        args.alpha = parse_alpha(args.alpha)
    if getattr(args, "point", None) is not None:
        args.point = parse_point(args.point, args.curve)
    if getattr(args, "s", None) == 0:
        raise GKZError("--s must be nonzero")


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        settings = Settings()
        _resolve_inputs(args)
    except (GKZError, ValueError, FileNotFoundError) as e:
        print(f"Input Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = args.handler(args, settings)
    except Exception as e:
        logger.debug("Command failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INTERNAL

    print(report.dumps() if args.format == "json" else report.render_text())
    return report.exit_code


def main():
    """Main application function"""
    # Load environment variables from .env file
    load_dotenv()
    sys.exit(run())


if __name__ == "__main__":
    main()
