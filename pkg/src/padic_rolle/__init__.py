"""Exact p-adic toolkit: Newton polygons, Rolle-type injectivity radii,
generic radii of differential systems and sections of disk coverings."""

from .covering import (
    CoveringReport,
    SectionSeries,
    analyze_covering,
    kummer_system,
    section_radius_check,
    section_series,
    surjectivity_witness,
)
from .diffsys import (
    DiffSystem,
    RadiusEstimate,
    SystemIterates,
    gauge_transform,
    generic_radius,
    is_unimodular,
    iterate_system,
    solution_at_point,
    trivial_estimate,
)
from .errors import DomainError
from .expr import parse_poly_expr, parse_ratfunc, render
from .newton import (
    NewtonPolygon,
    build_polygon,
    has_root_in_open_unit_disk,
    roots_by_log_radius,
    tail_slope_estimate,
)
from .rolle import RolleReport, etale_check, open_immersion_log_radius, rolle_verify
from .series import GaussPoint, PSeries, RatFunc, compose, derivative, gauss_valuation
from .valuation import INF, PrimeContext, factorial_valuation, key_inequality_check, ord_p

__version__ = "0.1.0"

__all__ = [
    "CoveringReport",
    "DiffSystem",
    "DomainError",
    "GaussPoint",
    "INF",
    "NewtonPolygon",
    "PSeries",
    "PrimeContext",
    "RadiusEstimate",
    "RatFunc",
    "RolleReport",
    "SectionSeries",
    "SystemIterates",
    "analyze_covering",
    "build_polygon",
    "compose",
    "derivative",
    "etale_check",
    "factorial_valuation",
    "gauge_transform",
    "gauss_valuation",
    "generic_radius",
    "has_root_in_open_unit_disk",
    "is_unimodular",
    "iterate_system",
    "key_inequality_check",
    "kummer_system",
    "open_immersion_log_radius",
    "ord_p",
    "parse_poly_expr",
    "parse_ratfunc",
    "render",
    "rolle_verify",
    "roots_by_log_radius",
    "section_radius_check",
    "section_series",
    "solution_at_point",
    "surjectivity_witness",
    "tail_slope_estimate",
    "trivial_estimate",
]
