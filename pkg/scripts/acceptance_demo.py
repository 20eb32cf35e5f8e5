#!/usr/bin/env python3
"""
Barycentric Algebra Walkthrough

This script runs the headline computations end to end:
1. Law checks on the T algebra
2. Face lattices of the bundled polytopes
3. The refined replica of T
4. One operation evaluated in a Płonka sum
5. The coset algebra of GF(3)² and its projective replica
6. Cosets over a rational subspace family
"""

import argparse
import sys
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from barycentra.core.errors import BarycentraError
from barycentra.core.scalar import Weight
from barycentra.schemas.inputs import PolytopeSpec, RationalFamilySpec
from barycentra.services.affine import (
    FiniteVectorSpace,
    coset_algebra,
    rational_coset_demo,
    verify_plonka_structure,
    verify_replica_is_projective,
)
from barycentra.services.builtins import builtin
from barycentra.services.convex import FaceLattice, Polytope
from barycentra.services.laws import Sampled, check_identity, resolve_laws
from barycentra.services.plonka import eval_report

console = Console()

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def status(ok: bool) -> str:
    return "[green]✓[/green]" if ok else "[red]✗[/red]"


def step_laws(samples: int, seed: int) -> bool:
    """T satisfies the barycentric axioms and fails cancellativity."""
    model = builtin("t-algebra").model
    table = Table(title="Laws on T", show_lines=False)
    table.add_column("Law", style="cyan")
    table.add_column("Result")
    table.add_column("Witness", style="dim")

    ok = True
    for law in resolve_laws(["barycentric", "cancellativity"]):
        report = check_identity(model, law, Sampled(samples, seed))
        expected = "fail" if law.name == "cancellativity" else "pass"
        ok &= report.result == expected
        witness = ""
        if report.counterexample is not None:
            witness = ", ".join(f"{k}={v}" for k, v in report.counterexample.elements.items())
        table.add_row(law.name, f"{status(report.result == expected)} {report.result}", witness)
    console.print(table)
    return ok


def step_faces() -> bool:
    expected = {"segment": [2, 1], "triangle": [3, 3, 1], "square": [4, 4, 1], "cube": [8, 12, 6, 1]}
    table = Table(title="Face lattices")
    table.add_column("Polytope", style="cyan")
    table.add_column("Faces per dimension")
    table.add_column("Total", justify="right")

    ok = True
    for name, counts in expected.items():
        spec = PolytopeSpec.model_validate_json((DATA_DIR / f"{name}.json").read_text(encoding="utf-8"))
        report = FaceLattice(Polytope.from_spec(spec)).report()
        ok &= report.counts_by_dimension == counts
        table.add_row(
            name,
            f"{status(report.counts_by_dimension == counts)} {report.counts_by_dimension}",
            str(report.face_count),
        )
    console.print(table)
    return ok


def step_replica(seed: int) -> bool:
    bundle = builtin("t-algebra")
    report = bundle.replica(seed).report(expected=bundle.expected_replica)
    table = Table(title=f"Replica of T ({report.class_count} classes)")
    table.add_column("Class", style="cyan")
    table.add_column("Fiber")
    table.add_column("Cell")
    for cls in report.classes:
        table.add_row(cls.label, cls.fiber, cls.descriptor)
    console.print(table)
    console.print(
        f"  {status(bool(report.isomorphic_to_expected))} isomorphic to the expected semilattice, "
        f"{status(report.classes_open)} classes open"
    )
    return report.class_count == 5 and bool(report.isomorphic_to_expected) and report.classes_open


def step_eval() -> bool:
    plonka_sum = builtin("t-algebra").plonka_sum
    report = eval_report(
        plonka_sum, Weight.parse("1/2"), plonka_sum.parse_element("0:α"), plonka_sum.parse_element("1:γ")
    )
    console.print(
        Panel(
            f"1/2(0:α, 1:γ) = [bold]{report.result}[/bold]\n"
            f"[dim]in fiber {report.fiber}:[/dim] {report.combination}",
            title="Płonka evaluation",
            border_style="blue",
        )
    )
    return report.result == "1:1"


def step_affine(seed: int) -> bool:
    space = FiniteVectorSpace(3, 2)
    algebra = coset_algebra(space, seed=seed)
    structure = verify_plonka_structure(space, 2, algebra)
    replica = verify_replica_is_projective(space, algebra=algebra)

    table = Table(show_header=False, box=None, padding=(0, 1))
    table.add_column("Key", style="cyan")
    table.add_column("Value")
    table.add_row("Subspaces", str(structure.subspace_count))
    table.add_row("Cosets", str(structure.coset_count))
    table.add_row("Fiber sizes", str(structure.fiber_sizes))
    table.add_row("Operation checks", f"{status(structure.passed)} {structure.operation_checks}")
    table.add_row("Replica size", str(replica.replica_size))
    table.add_row("Projective replica", status(replica.isomorphic_to_projective_space))
    console.print(Panel(table, title=f"Coset algebra of {space.name}", border_style="cyan"))
    return structure.passed and replica.passed and structure.coset_count == 22


def step_rational(samples: int, seed: int) -> bool:
    spec = RationalFamilySpec.model_validate_json(
        (DATA_DIR / "rational-family.json").read_text(encoding="utf-8")
    )
    report = rational_coset_demo(spec, samples=samples, seed=seed)
    console.print(
        f"  {status(report.passed)} rational cosets over {', '.join(report.family)}: "
        f"{report.agreed}/{samples} samples agree"
    )
    return report.passed


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Walk through the headline barycentric algebra computations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s
  %(prog)s --samples 200 --seed 3
        """,
    )
    parser.add_argument("--samples", type=int, default=1000, help="Sampled trials per check (default: 1000)")
    parser.add_argument("--seed", type=int, default=7, help="Seed for every sampler (default: 7)")
    args = parser.parse_args()

    console.print(
        Panel.fit(
            "[bold cyan]barycentra walkthrough[/bold cyan]\n"
            "[dim]Exact law checks, face lattices, replicas and Płonka sums[/dim]",
            border_style="cyan",
        )
    )

    steps = [
        ("Checking laws on T", lambda: step_laws(args.samples, args.seed)),
        ("Enumerating faces", step_faces),
        ("Computing the replica of T", lambda: step_replica(args.seed)),
        ("Evaluating in a Płonka sum", step_eval),
        ("Building the coset algebra of GF(3)²", lambda: step_affine(args.seed)),
        ("Sampling rational cosets", lambda: step_rational(min(args.samples, 500), args.seed)),
    ]

    results = []
    for description, step in steps:
        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console) as progress:
            task = progress.add_task(f"{description}...", total=None)
            try:
                ok = step()
            except BarycentraError as e:
                ok = False
                console.print(f"[red]✗[/red] {e.message}")
            progress.update(task, completed=True)
        results.append(ok)
        console.print()

    if all(results):
        console.print(Panel("[bold green]All results reproduced[/bold green]", border_style="green"))
        return 0
    failed = [description for (description, _), ok in zip(steps, results) if not ok]
    console.print(Panel("[bold red]Mismatches:[/bold red]\n" + "\n".join(failed), border_style="red"))
    return 1


if __name__ == "__main__":
    sys.exit(main())
