"""Exact construction and classification of HKT structures on Lie algebras.

All arithmetic is exact over Q(sqrt2).  Typical use::

    from hktlie import builtin, classify
    report = classify(builtin("e2_tangent").structure)
    report.forms["c"].render()   # '2*e^{256}'
"""

from .catalog import BUILTIN_NAMES, CatalogEntry, Expectation, builtin
from .classify import Report, classify
from .constructions import QuatRep, iterate_tangent, kaehler_to_hkt, rho_extension, tangent_algebra
from .errors import (
    ConstructionError,
    HKTError,
    InternalConsistencyError,
    ObataError,
    PreconditionError,
    TorsionNotSkewError,
)
from .fileformat import FormatSyntaxError, parse, serialize
from .geometry import (
    GeomStructure,
    Metric,
    bismut,
    codifferential,
    hkt_check,
    infinitesimal_holonomy,
    lee_form,
    levi_civita,
    nijenhuis,
    obata,
    torsion_3form,
)
from .lie import KForm, LieAlgebra, ce_differential, jacobi_defect, wedge
from .scalar import Scalar, parse_scalar

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES",
    "CatalogEntry",
    "ConstructionError",
    "Expectation",
    "FormatSyntaxError",
    "GeomStructure",
    "HKTError",
    "InternalConsistencyError",
    "KForm",
    "LieAlgebra",
    "Metric",
    "ObataError",
    "PreconditionError",
    "QuatRep",
    "Report",
    "Scalar",
    "TorsionNotSkewError",
    "bismut",
    "builtin",
    "ce_differential",
    "classify",
    "codifferential",
    "hkt_check",
    "infinitesimal_holonomy",
    "iterate_tangent",
    "jacobi_defect",
    "kaehler_to_hkt",
    "lee_form",
    "levi_civita",
    "nijenhuis",
    "obata",
    "parse",
    "parse_scalar",
    "rho_extension",
    "serialize",
    "tangent_algebra",
    "torsion_3form",
    "wedge",
]
