"""`faces`: face lattice of a polytope."""
import argparse

from barycentra.cli.deps import add_output_flags, emit, load_polytope, split_spec, write_text
from barycentra.services.convex import FaceLattice


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "faces",
        help="Enumerate the faces of a polytope",
        description="Faces with vertex subsets and dimensions, plus counts per dimension.",
    )
    parser.add_argument("polytope", help="Polytope JSON file (a polytope: prefix is accepted)")
    parser.add_argument("--dot", metavar="FILE", help="Write the face lattice in DOT")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    _, source = split_spec(args.polytope, default_kind="polytope")
    lattice = FaceLattice(load_polytope(source))
    if args.dot:
        write_text(args.dot, lattice.to_dot())
    emit(lattice.report(), args.out)
    return 0
