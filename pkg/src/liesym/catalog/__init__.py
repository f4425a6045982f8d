"""Library of named metrics, vector fields, systems, solutions and symmetry tables."""
from .data import SolutionFamily, scenario_bindings
from .entry import (
    DEFAULT_BODIES, KINDS, CatalogEntry, CatalogError, default_instantiations, opaque_arities,
    to_bindings,
)
from .model import Model, ModelError, OpaqueSpec, load_model_file, model_from_json
from .registry import (
    aliases, catalog_model, enumerate, export, ids, load, resolve_metric_id, resolve_model,
)

__all__ = [
    "CatalogEntry", "CatalogError", "DEFAULT_BODIES", "KINDS", "Model", "ModelError",
    "OpaqueSpec", "SolutionFamily", "aliases", "catalog_model", "default_instantiations",
    "enumerate", "export", "ids", "load", "load_model_file", "model_from_json", "opaque_arities",
    "resolve_metric_id", "resolve_model", "scenario_bindings", "to_bindings",
]
