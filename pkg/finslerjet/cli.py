import argparse
import logging
import sys
import time
from typing import Optional, Sequence

import numpy as np

import finslerjet
from finslerjet.general_utils import constants
from finslerjet.general_utils.app_utils import ExitCode, IsotropySourceKind, Verdict
from finslerjet.general_utils.errors import FinslerError, SpecError
from finslerjet.general_utils.metric_families import FAMILY_HELP
from finslerjet.general_utils.report_utils import RunReport, format_table, write_residual_csv
from finslerjet.general_utils.sampling import SampleConfig
from finslerjet.families import load_spec
from finslerjet.identities import resolve_checks
from finslerjet.main import detect_metric, inspect_metric, verify_metric

logger = logging.getLogger(__name__)


def _sampler(args) -> SampleConfig:
    return SampleConfig(num_points=args.points, seed=args.seed)


def _sampler_echo(sampler: SampleConfig) -> dict:
    return {"num_points": sampler.num_points, "seed": sampler.seed, "box": sampler.box,
            "normalize_F": sampler.normalize_F, "directions": sampler.directions}


def _norm(array) -> float:
    return float(np.sqrt(np.sum(np.square(array))))


def cmd_inspect(args) -> ExitCode:
    spec = load_spec(args.spec)
    n = spec.dimension
    x = np.zeros(n) if args.x is None else np.asarray(args.x, dtype=float)
    y = np.eye(n)[0] if args.y is None else np.asarray(args.y, dtype=float)
    start = time.perf_counter()
    result = inspect_metric(spec, x, y, with_s_curvature=not args.no_s)
    bundle = result["bundle"]
    elapsed = time.perf_counter() - start
    scale = max(float(np.max(np.abs(bundle.riemann))), constants.SCALE_FLOOR)
    scalar_flag = bundle.scalar_flag_residual <= constants.SCALAR_FLAG_TOLERANCE * scale
    rows = [
        ("F", bundle.F),
        ("g eigenvalues", ", ".join(f"{v:.6g}" for v in np.linalg.eigvalsh(bundle.g))),
        ("K", bundle.K if scalar_flag else "not scalar flag"),
        ("S", bundle.S),
        ("|C|", _norm(bundle.cartan)),
        ("|B|", _norm(bundle.berwald)),
        ("|L|", _norm(bundle.landsberg)),
    ]
    print(format_table(["quantity", "value"], rows))
    if args.report:
        report = RunReport(version=finslerjet.__version__, command="inspect", spec=spec.echo(),
                           inspection={"x": x.tolist(), "y": y.tolist(), **bundle.as_dict(),
                                       "homogeneity": result["homogeneity"]},
                           jet_orders={"inspect": constants.REQUIRED_ORDER["berwald"]},
                           timing={"inspect": elapsed})
        report.write(args.report)
    return ExitCode.SUCCESS


def cmd_verify(args) -> ExitCode:
    spec = load_spec(args.spec)
    checks = resolve_checks(args.checks)
    sampler = _sampler(args)
    source_kind = IsotropySourceKind(args.source) if args.source else None
    start = time.perf_counter()
    reports = verify_metric(spec, [c.name for c in checks], sampler, args.tol, args.jet_order, source_kind,
                            args.workers)
    elapsed = time.perf_counter() - start
    rows = [(r.name, r.verdict.value, r.max_residual, r.points, r.skipped_reason or "") for r in reports]
    print(format_table(["identity", "verdict", "max residual", "samples", "note"], rows))
    if args.report:
        report = RunReport(version=finslerjet.__version__, command="verify", spec=spec.echo(),
                           sampler=_sampler_echo(sampler), identities=reports,
                           jet_orders={r.name: r.jet_order for r in reports}, timing={"verify": elapsed})
        report.write(args.report)
    if args.csv:
        write_residual_csv(args.csv, reports)
    failed = [r.name for r in reports if r.verdict == Verdict.FAIL]
    if failed:
        logger.warning("%d identities failed: %s", len(failed), ", ".join(failed))
        return ExitCode.CHECK_FAILED
    return ExitCode.SUCCESS


def cmd_detect(args) -> ExitCode:
    spec = load_spec(args.spec)
    sampler = _sampler(args)
    start = time.perf_counter()
    verdicts = detect_metric(spec, args.grid, sampler, args.workers)
    elapsed = time.perf_counter() - start
    rows = [(", ".join(f"{v:.3g}" for v in verdict.x), "yes" if verdict.is_scalar_flag else "no",
             verdict.isotropy_verdict(), verdict.randers_verdict()) for verdict in verdicts]
    print(format_table(["x", "scalar flag", "weakly isotropic", "Randers"], rows))
    if args.report:
        report = RunReport(version=finslerjet.__version__, command="detect", spec=spec.echo(),
                           sampler=_sampler_echo(sampler), detection=verdicts,
                           jet_orders={"scalar_flag": constants.REQUIRED_ORDER["riemann"], "randers": 2},
                           timing={"detect": elapsed})
        report.write(args.report)
    return ExitCode.SUCCESS


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("spec", help="path of the JSON metric spec {family, dimension, params}")
    parser.add_argument("--report", help="write the JSON run report to this path")
    parser.add_argument("--quiet", action="store_true", help="only log warnings and errors")


def _sampling(parser: argparse.ArgumentParser):
    parser.add_argument("--points", type=int, default=constants.DEFAULT_POINTS, help="number of sampled points")
    parser.add_argument("--seed", type=int, default=constants.DEFAULT_SEED, help="sampling seed")
    parser.add_argument("--workers", type=int, default=1, help="thread pool size")


def _families_epilog() -> str:
    return "metric families:\n" + "\n".join(f"  {name:<12} {text}" for name, text in FAMILY_HELP.items())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finslerjet", description="Finsler curvature by Taylor jets:"
                                                                    " inspection, identity checks, detection.",
                                     epilog=_families_epilog(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    inspect = sub.add_parser("inspect", help="curvature quantities at one tangent point")
    _common(inspect)
    inspect.add_argument("--x", type=float, nargs="+", help="position (default: origin)")
    inspect.add_argument("--y", type=float, nargs="+", help="direction (default: first basis vector)")
    inspect.add_argument("--no-s", action="store_true", help="skip the S-curvature quadrature")
    inspect.set_defaults(handler=cmd_inspect)

    verify = sub.add_parser("verify", help="run identity checks over sampled tangent points")
    _common(verify)
    _sampling(verify)
    verify.add_argument("--checks", default="all", help="'all' or a comma separated list of identity names")
    verify.add_argument("--tol", type=float, default=constants.DEFAULT_TOLERANCE, help="pass threshold")
    verify.add_argument("--jet-order", type=int, default=None, help="override of the F-jet order")
    verify.add_argument("--source", choices=[k.value for k in IsotropySourceKind], default=None,
                        help="where θ and σ come from (default: predicted for the navigation family)")
    verify.add_argument("--csv", help="write per-sample residuals to this CSV path")
    verify.set_defaults(handler=cmd_verify)

    detect = sub.add_parser("detect", help="scalar flag, weakly isotropic and Randers verdicts over a grid")
    _common(detect)
    _sampling(detect)
    detect.add_argument("--grid", type=int, default=constants.DEFAULT_GRID, help="grid points per axis")
    detect.set_defaults(handler=cmd_detect)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(levelname)s: %(message)s")
    try:
        return args.handler(args).value
    except SpecError as e:
        logger.error(str(e))
        return ExitCode.USAGE_ERROR.value
    except FinslerError as e:
        logger.error(str(e))
        return ExitCode.DOMAIN_ERROR.value


if __name__ == "__main__":
    sys.exit(main())
