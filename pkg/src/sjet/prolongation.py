"""Higher tangent lifts, parity-reversed tangent lifts, and their interplay.

The k-th tangent lift of a chart adjoins jet coordinates "x@r" for r = 0..k,
one block per base coordinate, each of the base coordinate's parity and of
weight r. A morphism lifts by feeding the generic curve sum(x@r t^r) through
its pullback and reading off coefficients of t^r; because jet coordinates
already carry the 1/r! normalisation, no factorials appear.

The parity-reversed tangent lift adjoins one differential "d.x" per
coordinate, with flipped parity and the same weight. Its morphism lift sends
d.y to sum(d.x * left-partial of the pullback), differentials on the left.

Combining the two in either order gives charts whose coordinates match up
by the renaming "(d.x)@r" <-> "d.(x@r)"; both spell the same name, and the
interchange morphism realises the identification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .errors import DomainError, ParityError
from .geometry import Chart, Morphism, compose, validate_morphism
from .grassmann import (
    Generator,
    Parity,
    Scalar,
    SuperPolynomial,
    TimeSeries,
    _as_polynomial,
    partial,
    poly,
    series_compose,
    substitute,
)


@dataclass(frozen=True, eq=False, repr=False)
class ProlongedChart(Chart):
    """Chart of k-th order jets over a base chart."""

    base: Chart = None
    order: int = 0

    def jet(self, base_coordinate: Generator, r: int) -> Generator:
        """The jet coordinate of a base coordinate at order r."""
        return self._jets[(base_coordinate, r)]

    def __repr__(self):
        n, m = self.dimension
        return f"ProlongedChart({self.name!r}, order={self.order}, dim=({n}|{m}))"


@dataclass(frozen=True, eq=False, repr=False)
class AntitangentChart(Chart):
    """Chart extended by one parity-flipped differential per coordinate."""

    base: Chart = None

    def differential_of(self, base_coordinate: Generator) -> Generator:
        return self._differentials[base_coordinate]

    def base_of(self, differential: Generator) -> Generator:
        return self._bases[differential]

    def is_differential(self, g: Generator) -> bool:
        return g in self._bases

    @property
    def differentials(self) -> tuple[Generator, ...]:
        return self.coordinates[len(self.base.coordinates) :]

    def __repr__(self):
        n, m = self.dimension
        return f"AntitangentChart({self.name!r}, dim=({n}|{m}))"


@lru_cache(maxsize=None)
def prolong_chart(chart: Chart, k: int) -> ProlongedChart:
    """The chart of k-th order jet coordinates over ``chart``.

    Repeated calls with the same arguments return the identical chart, so
    lifted morphisms stay composable.
    """
    if k < 0:
        raise DomainError(f"jet order must be nonnegative, got {k}")
    coordinates = []
    jets = {}
    for g in chart.coordinates:
        for r in range(k + 1):
            jet = Generator(f"{g.name}@{r}", g.parity, weight=r)
            coordinates.append(jet)
            jets[(g, r)] = jet
    prolonged = ProlongedChart(
        name=f"T{k}({chart.name})",
        coordinates=tuple(coordinates),
        base=chart,
        order=k,
    )
    object.__setattr__(prolonged, "_jets", jets)
    return prolonged


@lru_cache(maxsize=None)
def antitangent_chart(chart: Chart) -> AntitangentChart:
    """Adjoin one parity-flipped differential to every coordinate."""
    differentials = {}
    bases = {}
    coords = list(chart.coordinates)
    for g in chart.coordinates:
        d = Generator(f"d.{g.name}", g.parity + Parity.ODD, weight=g.weight)
        differentials[g] = d
        bases[d] = g
        coords.append(d)
    extended = AntitangentChart(
        name=f"PiT({chart.name})",
        coordinates=tuple(coords),
        base=chart,
    )
    object.__setattr__(extended, "_differentials", differentials)
    object.__setattr__(extended, "_bases", bases)
    return extended


def _require_valid(phi: Morphism):
    report = validate_morphism(phi)
    if not report.valid:
        bad = ", ".join(row.coordinate.name for row in report.rows if not row.ok)
        raise ParityError(f"morphism is not parity-homogeneous at: {bad}")


def prolong_morphism(phi: Morphism, k: int) -> Morphism:
    """Lift a morphism to k-th order jet charts.

    The lift substitutes the generic curve sum(x@r t^r) into each pullback
    and assigns the coefficient of t^r to y@r.
    """
    _require_valid(phi)
    source = prolong_chart(phi.source, k)
    target = prolong_chart(phi.target, k)
    generic = {
        g: TimeSeries([poly(source.jet(g, r)) for r in range(k + 1)])
        for g in phi.source.coordinates
    }
    assignment = {}
    for y in phi.target.coordinates:
        series = series_compose(phi.assignment[y], generic)
        for r in range(k + 1):
            assignment[target.jet(y, r)] = series[r]
    return Morphism(source, target, assignment)


def project(chart: ProlongedChart, l: int) -> Morphism:
    """The truncation map from k-th order jets down to l-th order jets."""
    if not 0 <= l <= chart.order:
        raise DomainError(
            f"projection order must lie in 0..{chart.order}, got {l}"
        )
    lower = prolong_chart(chart.base, l)
    assignment = {
        lower.jet(g, r): poly(chart.jet(g, r))
        for g in chart.base.coordinates
        for r in range(l + 1)
    }
    return Morphism(chart, lower, assignment)


def zero_section(chart: ProlongedChart) -> Morphism:
    """The inclusion of order-zero jets with all higher coordinates zero."""
    lowest = prolong_chart(chart.base, 0)
    assignment = {}
    for g in chart.base.coordinates:
        assignment[chart.jet(g, 0)] = poly(lowest.jet(g, 0))
        for r in range(1, chart.order + 1):
            assignment[chart.jet(g, r)] = SuperPolynomial.zero()
    return Morphism(lowest, chart, assignment)


def antitangent_morphism(phi: Morphism) -> Morphism:
    """Lift a morphism to the parity-reversed tangent charts.

    Base coordinates keep their pullbacks; the differential of a target
    coordinate pulls back to sum(d.x * left-partial), differentials on the
    left.
    """
    _require_valid(phi)
    source = antitangent_chart(phi.source)
    target = antitangent_chart(phi.target)
    assignment = {}
    for y in phi.target.coordinates:
        f = phi.assignment[y]
        assignment[y] = f
        total = SuperPolynomial.zero()
        for x in phi.source.coordinates:
            df = partial(f, x)
            if df.is_zero():
                continue
            total = total + poly(source.differential_of(x)) * df
        assignment[target.differential_of(y)] = total
    return Morphism(source, target, assignment)


def interchange(chart: Chart, k: int) -> Morphism:
    """The coordinate renaming between the two iterated lifts.

    Maps k-th order jets of the parity-reversed lift to the parity-reversed
    lift of the k-th order jets, matching "(d.x)@r" with "d.(x@r)".
    """
    lifted = antitangent_chart(chart)
    source = prolong_chart(lifted, k)
    target = antitangent_chart(prolong_chart(chart, k))
    assignment = {}
    for g in chart.coordinates:
        for r in range(k + 1):
            jet = target.base.jet(g, r)
            assignment[jet] = poly(source.jet(g, r))
            assignment[target.differential_of(jet)] = poly(
                source.jet(lifted.differential_of(g), r)
            )
    return Morphism(source, target, assignment)


LambdaLike = Union[Scalar, Generator, SuperPolynomial]


def homothety(chart: ProlongedChart, lam: LambdaLike) -> Morphism:
    """Rescale each jet coordinate of weight r by the r-th power of lam.

    lam may be an exact rational, an even generator adjoined as a symbolic
    parameter, or any even polynomial (products of parameters included).
    """
    if isinstance(lam, Generator):
        factor = poly(lam)
    else:
        factor = _as_polynomial(lam)
        if factor is NotImplemented:
            raise TypeError("homothety factor must be rational, generator or polynomial")
    if not factor.is_homogeneous(Parity.EVEN):
        raise ParityError("homothety factor must be even")
    assignment = {
        g: (factor ** g.weight) * poly(g) for g in chart.coordinates
    }
    return Morphism(chart, chart, assignment)


@dataclass(frozen=True, eq=False, repr=False)
class ProductChart(Chart):
    """Chart with one renamed coordinate block per factor."""

    left: Chart = None
    right: Chart = None

    def from_left(self, g: Generator) -> Generator:
        return self._left_map[g]

    def from_right(self, g: Generator) -> Generator:
        return self._right_map[g]

    def __repr__(self):
        n, m = self.dimension
        return f"ProductChart({self.name!r}, dim=({n}|{m}))"


@lru_cache(maxsize=None)
def product_chart(left: Chart, right: Chart) -> ProductChart:
    """The product chart, coordinates renamed with factor prefixes."""
    lp, rp = left.name, right.name
    if lp == rp:
        lp, rp = f"{lp}1", f"{rp}2"
    coords = []
    left_map = {}
    right_map = {}
    for g in left.coordinates:
        renamed = Generator(f"{lp}_{g.name}", g.parity, weight=g.weight)
        left_map[g] = renamed
        coords.append(renamed)
    for g in right.coordinates:
        renamed = Generator(f"{rp}_{g.name}", g.parity, weight=g.weight)
        right_map[g] = renamed
        coords.append(renamed)
    product = ProductChart(
        name=f"{left.name}x{right.name}",
        coordinates=tuple(coords),
        left=left,
        right=right,
    )
    object.__setattr__(product, "_left_map", left_map)
    object.__setattr__(product, "_right_map", right_map)
    return product


def product_morphism(phi: Morphism, psi: Morphism) -> Morphism:
    """The pair morphism acting factorwise on product charts."""
    source = product_chart(phi.source, psi.source)
    target = product_chart(phi.target, psi.target)
    rename_left = {g: poly(source.from_left(g)) for g in phi.source.coordinates}
    rename_right = {g: poly(source.from_right(g)) for g in psi.source.coordinates}
    assignment = {}
    for y in phi.target.coordinates:
        assignment[target.from_left(y)] = substitute(phi.assignment[y], rename_left)
    for y in psi.target.coordinates:
        assignment[target.from_right(y)] = substitute(psi.assignment[y], rename_right)
    return Morphism(source, target, assignment)


def product_prolong_identification(left: Chart, right: Chart, k: int) -> Morphism:
    """Canonical identification of jets of a product with products of jets.

    The morphism goes from the k-th lift of the product chart to the product
    of the k-th lifts, matching jet coordinates block by block.
    """
    source = prolong_chart(product_chart(left, right), k)
    target = product_chart(prolong_chart(left, k), prolong_chart(right, k))
    assignment = {}
    for g in left.coordinates:
        for r in range(k + 1):
            assignment[target.from_left(prolong_chart(left, k).jet(g, r))] = poly(
                source.jet(product_chart(left, right).from_left(g), r)
            )
    for g in right.coordinates:
        for r in range(k + 1):
            assignment[target.from_right(prolong_chart(right, k).jet(g, r))] = poly(
                source.jet(product_chart(left, right).from_right(g), r)
            )
    return Morphism(source, target, assignment)


@dataclass(frozen=True)
class WeightCheck:
    coordinate: Generator
    homogeneous: bool
    triangular: bool

    @property
    def ok(self) -> bool:
        return self.homogeneous and self.triangular


@dataclass(frozen=True)
class WeightReport:
    rows: tuple[WeightCheck, ...]

    @property
    def valid(self) -> bool:
        return all(row.ok for row in self.rows)


def weight_report(phi: Morphism) -> WeightReport:
    """Weight homogeneity and triangularity of a lifted morphism.

    The assignment of a jet coordinate of weight r must be weight-homogeneous
    of weight r and must only involve jet coordinates of order at most r.
    """
    rows = []
    for y in phi.target.coordinates:
        p = phi.assignment[y]
        homogeneous = all(m.weight == y.weight for m in p.terms)
        triangular = all(m.max_factor_weight() <= y.weight for m in p.terms)
        rows.append(WeightCheck(y, homogeneous, triangular))
    return WeightReport(tuple(rows))
