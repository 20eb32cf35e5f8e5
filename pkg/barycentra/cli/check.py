"""`check`: run law suites against a model."""
import argparse
import logging

from barycentra.cli.deps import add_output_flags, add_strategy_flags, emit, load_model, strategy_of
from barycentra.core.errors import UnsupportedModelError
from barycentra.services.laws import check_homomorphism, check_identity, classify_algebra_type, resolve_laws

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "check",
        help="Check identities and quasi-identities on a model",
        description="Exit 0 when every requested law passes, 1 with a counterexample otherwise.",
    )
    parser.add_argument("model", help="builtin:NAME, polytope:FILE, semilattice:FILE, plonka:FILE or affine-gf:SPACE")
    parser.add_argument(
        "--laws",
        default="barycentric",
        help="Comma-separated law names or groups (barycentric, affine, semilattice, cancellativity)",
    )
    parser.add_argument(
        "--homomorphism", action="store_true", help="Also check the model's built-in homomorphism, if any"
    )
    parser.add_argument("--classify", action="store_true", help="Also report geometric/combinatorial/mixed")
    add_strategy_flags(parser)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    loaded = load_model(args.model)
    if loaded.model is None:
        raise UnsupportedModelError(
            f"{loaded.kind} models cannot be law-checked; use `affine rational-demo`",
            witness={"kind": loaded.kind},
        )
    model = loaded.model
    laws = resolve_laws(name.strip() for name in args.laws.split(",") if name.strip())
    strategy = strategy_of(args)

    reports = []
    for law in laws:
        report = check_identity(model, law, strategy)
        logger.info("%s on %s: %s", law.name, model.name, report.result)
        reports.append(report)

    bundle = loaded.bundle
    if args.homomorphism and bundle is not None and bundle.homomorphism is not None:
        reports.append(check_homomorphism(model, bundle.target, bundle.homomorphism, strategy, "homomorphism"))

    payload = {
        "model": model.describe(),
        "strategy": strategy.describe(),
        "reports": reports,
        "passed": all(r.result != "fail" for r in reports),
    }
    if args.classify:
        payload["algebra_type"] = classify_algebra_type(model, strategy)
    emit(payload, args.out)
    return 0 if payload["passed"] else 1
