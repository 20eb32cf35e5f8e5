"""`affine`: coset algebras over GF(p)ⁿ and over join-closed rational families."""
import argparse

from barycentra.cli.deps import add_output_flags, emit, load_json, load_space, seed_of, split_spec
from barycentra.schemas.inputs import RationalFamilySpec
from barycentra.services.affine import (
    check_affine_identity_suite,
    rational_coset_demo,
    verify_plonka_structure,
    verify_replica_is_projective,
)

SPACE_HELP = "GF(p)^n as {p:3,n:2}, affine-gf:{...} or a JSON file"


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "affine",
        help="Affine spaces, their coset algebras and projective replicas",
        description="Verify the Płonka structure of the coset algebra and its projective replica.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    plonka = verbs.add_parser("plonka", help="Check the coset algebra is a Płonka sum over its subspaces")
    plonka.add_argument("space", help=SPACE_HELP)
    plonka.add_argument("--k", type=int, required=True, help="Operation index, k ∉ {0, 1}")
    add_output_flags(plonka)
    plonka.set_defaults(handler=run_plonka)

    replica = verbs.add_parser("replica", help="Check the replica of the coset algebra is the subspace lattice")
    replica.add_argument("space", help=SPACE_HELP)
    replica.add_argument("--k", type=int, nargs="*", default=None, help="Weights used (default all k ∉ {0, 1})")
    add_output_flags(replica)
    replica.set_defaults(handler=run_replica)

    identities = verbs.add_parser("identities", help="Exhaustive affine law suite on GF(p)^n")
    identities.add_argument("space", help=SPACE_HELP)
    add_output_flags(identities)
    identities.set_defaults(handler=run_identities)

    demo = verbs.add_parser("rational-demo", help="Cosets over a join-closed family of rational subspaces")
    demo.add_argument("family", help="Rational family JSON file")
    demo.add_argument("--samples", type=int, default=500, help="Sampled operation comparisons")
    add_output_flags(demo)
    demo.set_defaults(handler=run_rational_demo)


def _space(text: str):
    _, payload = split_spec(text, default_kind="affine-gf")
    return load_space(payload)


def run_plonka(args: argparse.Namespace) -> int:
    report = verify_plonka_structure(_space(args.space), args.k)
    emit(report, args.out)
    return 0 if report.passed else 1


def run_replica(args: argparse.Namespace) -> int:
    report = verify_replica_is_projective(_space(args.space), args.k or None)
    emit(report, args.out)
    return 0 if report.passed else 1


def run_identities(args: argparse.Namespace) -> int:
    space = _space(args.space)
    reports = check_affine_identity_suite(space)
    passed = all(r.result != "fail" for r in reports)
    emit({"space": space.name, "reports": reports, "passed": passed}, args.out)
    return 0 if passed else 1


def run_rational_demo(args: argparse.Namespace) -> int:
    _, payload = split_spec(args.family, default_kind="affine-q-family")
    spec = RationalFamilySpec.model_validate(load_json(payload))
    report = rational_coset_demo(spec, samples=args.samples, seed=seed_of(args))
    emit(report, args.out)
    return 0 if report.passed else 1
