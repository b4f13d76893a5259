"""Deterministic canonical text rendering.

Terms are ordered by graded lexicographic comparison of the even exponent
vectors (higher total degree first, then earlier generators with higher
powers first) and, on ties, lexicographically by the odd factor tuple, the
shorter or earlier subset first. Identical inputs therefore always print as
identical text.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key

from .fields import RelationReport, VectorField
from .geometry import Jet, Morphism, SCurve, SPoint
from .grassmann import Monomial, SuperPolynomial, TIME, TimeSeries


def _compare_monomials(a: Monomial, b: Monomial) -> int:
    da, db = a.even_degree, b.even_degree
    if da != db:
        return -1 if da > db else 1
    ia = ib = 0
    ea, eb = a.even, b.even
    while ia < len(ea) and ib < len(eb):
        (ga, xa), (gb, xb) = ea[ia], eb[ib]
        if ga.index != gb.index:
            return -1 if ga.index < gb.index else 1
        if xa != xb:
            return -1 if xa > xb else 1
        ia += 1
        ib += 1
    if ia < len(ea):
        return -1
    if ib < len(eb):
        return 1
    oa = tuple(g.index for g in a.odd)
    ob = tuple(g.index for g in b.odd)
    if oa == ob:
        return 0
    return -1 if oa < ob else 1


_MONOMIAL_KEY = cmp_to_key(_compare_monomials)


def sorted_terms(p: SuperPolynomial) -> list[tuple[Monomial, Fraction]]:
    return sorted(p.items(), key=lambda item: _MONOMIAL_KEY(item[0]))


def format_scalar(c: Fraction) -> str:
    return str(c)


def _monomial_factors(mono: Monomial) -> list[str]:
    parts = []
    for g, e in mono.even:
        parts.append(g.name if e == 1 else f"{g.name}^{e}")
    parts.extend(g.name for g in mono.odd)
    return parts


def format_polynomial(p: SuperPolynomial) -> str:
    terms = sorted_terms(p)
    if not terms:
        return "0"
    pieces = []
    for i, (mono, coeff) in enumerate(terms):
        factors = _monomial_factors(mono)
        magnitude = abs(coeff)
        if not factors:
            body = format_scalar(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_scalar(magnitude)] + factors)
        if i == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


def format_series(series: TimeSeries) -> str:
    """Render a series as a canonical polynomial in the time variable."""
    total = SuperPolynomial.zero()
    t = SuperPolynomial.generator(TIME)
    for r, c in enumerate(series.coefficients):
        total = total + c * t**r
    return format_polynomial(total)


def format_morphism(phi: Morphism) -> str:
    lines = [
        f"{y.name} = {format_polynomial(phi.assignment[y])}"
        for y in phi.target.coordinates
    ]
    return "\n".join(lines)


def format_jet(jet: Jet) -> str:
    lines = []
    for g in jet.chart.coordinates:
        inner = ", ".join(format_polynomial(c) for c in jet.coefficients[g])
        lines.append(f"{g.name}: ({inner})")
    return "\n".join(lines)


def format_point(point: SPoint) -> str:
    lines = [
        f"{g.name} = {format_polynomial(point.values[g])}"
        for g in point.chart.coordinates
    ]
    return "\n".join(lines)


def format_curve(curve: SCurve) -> str:
    lines = [
        f"{g.name} = {format_series(curve.components[g])}"
        for g in curve.chart.coordinates
    ]
    return "\n".join(lines)


def format_field(field: VectorField) -> str:
    lines = [
        f"d/d {g.name} = {format_polynomial(field.values[g])}"
        for g in field.chart.coordinates
    ]
    return "\n".join(lines)


def format_relation_report(report: RelationReport) -> str:
    lines = []
    for row in report.rows:
        status = "ok" if row.ok else "FAILED"
        lines.append(f"block {row.block}: {row.label} ... {status}")
    return "\n".join(lines)


def print_canonical(obj) -> str:
    """Canonical text of any printable engine value."""
    from .dsl import Document, format_document

    if isinstance(obj, Document):
        return format_document(obj)
    if isinstance(obj, SuperPolynomial):
        return format_polynomial(obj)
    if isinstance(obj, TimeSeries):
        return format_series(obj)
    if isinstance(obj, Morphism):
        return format_morphism(obj)
    if isinstance(obj, Jet):
        return format_jet(obj)
    if isinstance(obj, SPoint):
        return format_point(obj)
    if isinstance(obj, SCurve):
        return format_curve(obj)
    if isinstance(obj, VectorField):
        return format_field(obj)
    if isinstance(obj, RelationReport):
        return format_relation_report(obj)
    raise TypeError(f"cannot print values of type {type(obj).__name__}")
