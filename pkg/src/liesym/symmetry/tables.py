"""Generator/potential pairs of the flat-space symmetry tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..config import CheckConfig
from ..expr import Bindings, Expr
from ..geometry import Metric, VectorField
from .conformal import kg_symmetry_residual
from .report import ConstraintReport, merge, skipped


@dataclass(frozen=True, eq=False)
class TableRow:
    """One row: generator and invariant potential family on a flat metric.

    ``instantiations`` are the default meanings of the arbitrary functions;
    a row is verified under each of them.  ``skip_reason`` marks rows that
    cannot be checked as printed.
    """

    id: str
    table: int
    label: str
    metric: Metric
    generator: VectorField
    potential: Expr
    instantiations: tuple = ()
    constants: dict = field(default_factory=dict)
    skip_reason: str | None = None
    notes: tuple = ()
    anchor: str = ""


def table_verify(row: TableRow, instantiations: Bindings | Sequence[Bindings] | None = None,
                 config: CheckConfig | None = None) -> ConstraintReport:
    """Run the Klein–Gordon symmetry condition for every instantiation of the row."""
    name = f"table{row.table}:{row.label}"
    if row.skip_reason:
        return skipped(name, row.skip_reason, extra={"row": row.id})
    if instantiations is None:
        insts = list(row.instantiations)
    elif isinstance(instantiations, Bindings):
        insts = [instantiations]
    else:
        insts = list(instantiations)
    if not insts:
        raise ValueError(f"row {row.id} has no instantiation for its arbitrary functions")
    cfg = (config or CheckConfig()).with_domain(row.constants)
    reports = [kg_symmetry_residual(row.metric, row.potential, row.generator, cfg, b)
               for b in insts]
    return merge(name, reports, notes=row.notes, extra={"row": row.id, "instantiations": len(insts)})
