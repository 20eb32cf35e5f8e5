"""`replica`: semilattice replica of a model, with an optional Hasse diagram."""
import argparse
import logging

from barycentra.cli.deps import LoadedModel, add_output_flags, emit, load_model, seed_of, write_text
from barycentra.core.errors import UnsupportedModelError
from barycentra.schemas.reports import ClassDescriptor, ReplicaReport
from barycentra.services.affine import affine_replica_report
from barycentra.services.plonka import polytope_plonka_sum, refined_replica
from barycentra.services.semilattice import FiniteSemilattice

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "replica",
        help="Compute the semilattice replica of a model",
        description="Classes, their join table and sample classifications as JSON.",
    )
    parser.add_argument("model", help="builtin:NAME, polytope:FILE, semilattice:FILE, plonka:FILE or affine-gf:SPACE")
    parser.add_argument("--dot", metavar="FILE", help="Write the replica's Hasse diagram in DOT")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def replica_report(loaded: LoadedModel, seed: int) -> ReplicaReport:
    if loaded.bundle is not None:
        bundle = loaded.bundle
        return bundle.replica(seed).report(expected=bundle.expected_replica)
    if loaded.polytope is not None:
        return refined_replica(polytope_plonka_sum(loaded.polytope), seed=seed).report()
    if loaded.plonka_sum is not None:
        return refined_replica(loaded.plonka_sum, seed=seed).report()
    if loaded.space is not None:
        return affine_replica_report(loaded.space)
    if loaded.semilattice is not None:
        # A semilattice is its own replica.
        s = loaded.semilattice
        return ReplicaReport(
            model=loaded.name,
            class_count=len(s),
            classes=[ClassDescriptor(label=a, fiber=a, descriptor=a, kind="point") for a in s.elements],
            semilattice=s.to_dict(),
            classifier_samples=[{"element": a, "class": a} for a in s.elements[:5]],
            classes_open=True,
        )
    raise UnsupportedModelError(
        f"No replica computation for {loaded.kind} models", witness={"kind": loaded.kind}
    )


def run(args: argparse.Namespace) -> int:
    loaded = load_model(args.model)
    report = replica_report(loaded, seed_of(args))
    report.model = loaded.name
    logger.info("Replica of %s has %d classes", loaded.name, report.class_count)
    if args.dot:
        replica = FiniteSemilattice.from_join_table(report.semilattice["elements"], report.semilattice["join"])
        write_text(args.dot, replica.to_dot(f"replica of {loaded.name}"))
    emit(report, args.out)
    return 0
