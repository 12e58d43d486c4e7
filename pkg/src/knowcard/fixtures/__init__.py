"""Shipped fixture files: the lbn-v1.2 link vocabulary, the lead-protection
link graph, and the cone-geometry constraint with its bindings."""

from importlib import resources
from pathlib import Path


def _path(name: str) -> Path:
    with resources.as_file(resources.files(__package__).joinpath(name)) as p:
        return Path(p)


def lbn_schema_path() -> Path:
    return _path("lbn-v1.2.rdf")


def lead_protection_rdf_path() -> Path:
    return _path("lead_protection.rdf")


def lead_protection_card_path() -> Path:
    return _path("lead_protection.card.xml")


def interior_diameter_ocl_path() -> Path:
    return _path("interior_diameter.ocl")


def interior_diameter_bindings_path() -> Path:
    return _path("interior_diameter.bindings")
