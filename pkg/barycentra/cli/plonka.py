"""`plonka`: validate, evaluate and reconstruct Płonka sums."""
import argparse
import logging

from barycentra.cli.deps import add_output_flags, emit, load_json, load_plonka_sum, load_polytope, seed_of, split_spec
from barycentra.core.config import settings
from barycentra.core.errors import PlonkaStructureError
from barycentra.core.scalar import Weight
from barycentra.schemas.inputs import PlonkaSumSpec
from barycentra.schemas.reports import PlonkaValidationReport
from barycentra.services.plonka import PlonkaSum, eval_report, polytope_as_plonka

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "plonka",
        help="Work with Płonka sums",
        description="validate a sum, eval one operation, or rebuild a polytope as the sum of its faces.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    validate = verbs.add_parser("validate", help="Check identities, images and functoriality of the transitions")
    validate.add_argument("sum", help="Płonka sum JSON file or builtin:NAME")
    add_output_flags(validate)
    validate.set_defaults(handler=run_validate)

    evaluate = verbs.add_parser("eval", help="Evaluate p(x, y) in the sum")
    evaluate.add_argument("sum", help="Płonka sum JSON file or builtin:NAME")
    evaluate.add_argument("--p", required=True, help="Weight a/b in ]0,1[")
    evaluate.add_argument("--x", required=True, help="Element FIBER:NAME or FIBER:COORDS")
    evaluate.add_argument("--y", required=True, help="Element FIBER:NAME or FIBER:COORDS")
    add_output_flags(evaluate)
    evaluate.set_defaults(handler=run_eval)

    as_plonka = verbs.add_parser("as-plonka", help="Rebuild a polytope as the sum of its faces")
    as_plonka.add_argument("polytope", help="Polytope JSON file")
    as_plonka.add_argument("--samples", type=int, default=settings.replica_samples, help="Sampled comparisons")
    add_output_flags(as_plonka)
    as_plonka.set_defaults(handler=run_as_plonka)


def _strip_kind(source: str) -> str:
    kind, payload = split_spec(source, default_kind="plonka")
    return f"builtin:{payload}" if kind == "builtin" else payload


def run_validate(args: argparse.Namespace) -> int:
    source = _strip_kind(args.sum)
    if source.startswith("builtin:"):
        report = load_plonka_sum(source).validation_report()
    else:
        spec = PlonkaSumSpec.model_validate(load_json(source))
        try:
            report = PlonkaSum.from_spec(spec).validation_report()
        except PlonkaStructureError as exc:
            logger.warning("Validation failed: %s", exc.message)
            report = PlonkaValidationReport(
                fibers=list(spec.index.elements),
                transitions=len(spec.transitions),
                functoriality_checks=0,
                passed=False,
                error=exc.to_dict(),
            )
    emit(report, args.out)
    return 0 if report.passed else 1


def run_eval(args: argparse.Namespace) -> int:
    plonka_sum = load_plonka_sum(_strip_kind(args.sum))
    report = eval_report(
        plonka_sum, Weight.parse(args.p), plonka_sum.parse_element(args.x), plonka_sum.parse_element(args.y)
    )
    emit(report, args.out)
    return 0


def run_as_plonka(args: argparse.Namespace) -> int:
    _, source = split_spec(args.polytope, default_kind="polytope")
    _, report = polytope_as_plonka(load_polytope(source), samples=args.samples, seed=seed_of(args))
    emit(report, args.out)
    return 0 if report.passed else 1
