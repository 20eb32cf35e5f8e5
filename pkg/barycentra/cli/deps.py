"""Shared CLI plumbing: model specs, JSON output and strategy flags."""
from __future__ import annotations

import argparse
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel

from barycentra.core.config import settings
from barycentra.core.errors import InputError
from barycentra.schemas.inputs import PlonkaSumSpec, PolytopeSpec, RationalFamilySpec, SemilatticeSpec, SpaceSpec
from barycentra.services.affine import FiniteAffineModel, FiniteVectorSpace
from barycentra.services.builtins import BuiltinBundle, builtin
from barycentra.services.convex import Polytope, PolytopeModel
from barycentra.services.laws import Exhaustive, Sampled, Strategy
from barycentra.services.models import BarycentricModel
from barycentra.services.plonka import PlonkaModel, PlonkaSum
from barycentra.services.semilattice import FiniteSemilattice, SemilatticeModel

MODEL_KINDS = ("builtin", "polytope", "semilattice", "plonka", "affine-gf", "affine-q-family")

_BARE_KEY = re.compile(r"([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:")


@dataclass
class LoadedModel:
    """A parsed model spec and the structures behind it."""

    kind: str
    name: str
    model: Optional[BarycentricModel] = None
    bundle: Optional[BuiltinBundle] = None
    polytope: Optional[Polytope] = None
    semilattice: Optional[FiniteSemilattice] = None
    plonka_sum: Optional[PlonkaSum] = None
    space: Optional[FiniteVectorSpace] = None
    family: Optional[RationalFamilySpec] = None


def load_json(source: str) -> Any:
    """Read JSON from a file, or inline when ``source`` starts with '{'.

    Inline objects may leave keys unquoted: {p:3,n:2}.
    """
    text = source.strip()
    if not text.startswith(("{", "[")):
        path = Path(source)
        if not path.is_file():
            raise InputError(f"No such file: {source}", witness={"path": source})
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return json.loads(_BARE_KEY.sub(r'\1"\2":', text))
    except json.JSONDecodeError as exc:
        raise InputError(f"Invalid JSON in {source}: {exc.msg}", witness={"line": exc.lineno}) from exc


def split_spec(spec: str, default_kind: Optional[str] = None) -> tuple[str, str]:
    kind, sep, payload = spec.partition(":")
    if sep and kind in MODEL_KINDS:
        return kind, payload
    if default_kind is not None:
        return default_kind, spec
    raise InputError(
        f"Model spec {spec!r} must look like KIND:PAYLOAD with KIND in {', '.join(MODEL_KINDS)}",
        witness={"spec": spec},
    )


def load_polytope(source: str) -> Polytope:
    return Polytope.from_spec(PolytopeSpec.model_validate(load_json(source)))


def load_space(source: str) -> FiniteVectorSpace:
    return FiniteVectorSpace.from_spec(SpaceSpec.model_validate(load_json(source)))


def load_plonka_sum(source: str) -> PlonkaSum:
    if source.startswith("builtin:"):
        bundle = builtin(source.partition(":")[2])
        if bundle.plonka_sum is None:
            raise InputError(f"Built-in {bundle.name} has no Płonka presentation")
        return bundle.plonka_sum
    return PlonkaSum.from_spec(PlonkaSumSpec.model_validate(load_json(source)))


def load_model(spec: str, default_kind: Optional[str] = None) -> LoadedModel:
    """Resolve "builtin:NAME", "polytope:FILE", "affine-gf:{p:3,n:2}" and friends."""
    kind, payload = split_spec(spec, default_kind)
    if kind == "builtin":
        bundle = builtin(payload)
        return LoadedModel(kind, bundle.name, bundle.model, bundle=bundle, plonka_sum=bundle.plonka_sum)
    if kind == "polytope":
        polytope = load_polytope(payload)
        name = Path(payload).stem if not payload.lstrip().startswith("{") else "polytope"
        return LoadedModel(kind, name, PolytopeModel(polytope, name), polytope=polytope)
    if kind == "semilattice":
        semilattice = FiniteSemilattice.from_spec(SemilatticeSpec.model_validate(load_json(payload)))
        return LoadedModel(kind, "semilattice", SemilatticeModel(semilattice), semilattice=semilattice)
    if kind == "plonka":
        plonka_sum = load_plonka_sum(payload)
        return LoadedModel(kind, "plonka", PlonkaModel(plonka_sum), plonka_sum=plonka_sum)
    if kind == "affine-gf":
        space = load_space(payload)
        return LoadedModel(kind, space.name, FiniteAffineModel(space), space=space)
    family = RationalFamilySpec.model_validate(load_json(payload))
    return LoadedModel(kind, "rational-family", family=family)


# Output


def to_payload(value: Union[BaseModel, dict, list]) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json", exclude_none=True)
    if isinstance(value, list):
        return [to_payload(v) for v in value]
    if isinstance(value, dict):
        return {k: to_payload(v) for k, v in value.items()}
    return value


def emit(value: Union[BaseModel, dict], out: Optional[str] = None) -> None:
    """Write a JSON report to stdout or ``out``; rationals are already strings."""
    text = json.dumps(to_payload(value), ensure_ascii=False, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        print(text, end="")


def write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# Flags


def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="Write the JSON report to this file instead of stdout")
    parser.add_argument(
        "--seed", type=int, default=None, help=f"Seed for sampling (default {settings.seed}, env BARYCENTRA_SEED)"
    )


def seed_of(args: argparse.Namespace) -> int:
    return settings.seed if args.seed is None else args.seed


def add_strategy_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--sampled", type=int, metavar="N", help="Check N seeded samples")
    group.add_argument("--exhaustive", action="store_true", help="Check every assignment (finite models)")


def strategy_of(args: argparse.Namespace) -> Strategy:
    if args.exhaustive:
        return Exhaustive()
    return Sampled(args.sampled or settings.sample_size, seed_of(args))
