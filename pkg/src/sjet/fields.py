"""Graded vector fields, the superbracket, and the canonical fields.

A vector field is a graded derivation recorded by its values on chart
coordinates: X(f) = sum over coordinates of value * left-partial. The
superbracket of two homogeneous fields is the graded commutator

    [X, Y] = X Y - (-1)^(|X||Y|) Y X,

again a derivation, of parity |X| + |Y|.

On the parity-reversed lift of a k-th order jet chart live five canonical
fields: the odd total differential d, the even counters of differential
degree and of jet weight, their sum, and the odd shift J that lowers jet
order into differentials. Their pairwise brackets close on a small table,
which verify_relations recomputes exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import AlgebraError, DomainError, ParityError
from .geometry import Chart
from .grassmann import (
    EVEN,
    Generator,
    ODD,
    Parity,
    Scalar,
    SuperPolynomial,
    _as_polynomial,
    partial,
    poly,
)
from .prolongation import antitangent_chart, prolong_chart


class VectorField:
    """A graded derivation on a chart, stored by its coordinate values.

    Missing coordinates default to zero. Every stored value must be
    homogeneous of parity |X| + |coordinate| and may only use coordinates of
    the chart.
    """

    __slots__ = ("chart", "parity", "values")

    def __init__(
        self,
        chart: Chart,
        parity: Parity,
        values: Mapping[Generator, SuperPolynomial | Scalar],
    ):
        out: dict[Generator, SuperPolynomial] = {}
        for g, value in values.items():
            if g not in chart:
                raise AlgebraError(
                    f"'{g.name}' is not a coordinate of chart '{chart.name}'"
                )
        for g in chart.coordinates:
            p = _as_polynomial(values.get(g, SuperPolynomial.zero()))
            if p is NotImplemented:
                raise TypeError("field values must be polynomials")
            foreign = p.generators() - set(chart.coordinates)
            if foreign:
                names = ", ".join(sorted(x.name for x in foreign))
                raise AlgebraError(
                    f"value on '{g.name}' uses generators outside "
                    f"'{chart.name}': {names}"
                )
            if not p.is_homogeneous(parity + g.parity):
                raise ParityError(
                    f"value on '{g.name}' must be homogeneous of parity "
                    f"{parity + g.parity}"
                )
            out[g] = p
        self.chart = chart
        self.parity = parity
        self.values = out

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        """Evaluate the derivation on a chart function."""
        present = f.generators()
        foreign = present - set(self.chart.coordinates)
        if foreign:
            names = ", ".join(sorted(x.name for x in foreign))
            raise AlgebraError(
                f"function uses generators outside '{self.chart.name}': {names}"
            )
        result = SuperPolynomial.zero()
        for g in self.chart.coordinates:
            if g not in present:
                continue
            value = self.values[g]
            if value.is_zero():
                continue
            df = partial(f, g)
            if df.is_zero():
                continue
            result = result + value * df
        return result

    __call__ = apply

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (
            self.chart is other.chart
            and self.parity is other.parity
            and self.values == other.values
        )

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        if self.chart is not other.chart:
            raise AlgebraError("cannot add fields on different charts")
        if self.parity is not other.parity:
            raise ParityError("cannot add fields of different parities")
        return VectorField(
            self.chart,
            self.parity,
            {g: self.values[g] + other.values[g] for g in self.chart.coordinates},
        )

    def __neg__(self):
        return VectorField(
            self.chart,
            self.parity,
            {g: -v for g, v in self.values.items()},
        )

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return VectorField(
            self.chart,
            self.parity,
            {g: v * scalar for g, v in self.values.items()},
        )

    def __repr__(self):
        return f"VectorField(chart={self.chart.name!r}, parity={self.parity})"


def apply(X: VectorField, f: SuperPolynomial) -> SuperPolynomial:
    return X.apply(f)


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """The superbracket [X, Y] = XY - (-1)^(|X||Y|) YX."""
    if X.chart is not Y.chart:
        raise AlgebraError("cannot bracket fields on different charts")
    koszul = -1 if (X.parity is ODD and Y.parity is ODD) else 1
    values = {}
    for g in X.chart.coordinates:
        values[g] = X.apply(Y.values[g]) - koszul * Y.apply(X.values[g])
    return VectorField(X.chart, X.parity + Y.parity, values)


def weight_field(chart: Chart) -> VectorField:
    """The even field multiplying each coordinate by its weight."""
    return VectorField(
        chart,
        EVEN,
        {g: Fraction(g.weight) * poly(g) for g in chart.coordinates},
    )


@dataclass(frozen=True)
class CanonicalFields:
    """The five canonical fields on the parity-reversed k-th jet lift."""

    chart: Chart
    order: int
    d: VectorField
    delta1: VectorField
    delta2: VectorField
    delta: VectorField
    J: VectorField

    def by_name(self) -> dict[str, VectorField]:
        return {
            "d": self.d,
            "Delta1": self.delta1,
            "Delta2": self.delta2,
            "Delta": self.delta,
            "J": self.J,
        }


def canonical_fields(chart: Chart, k: int) -> CanonicalFields:
    """Construct d, the two counters, their sum, and J at jet order k.

    All five live on the parity-reversed lift of the k-th jet chart of
    ``chart``. J is identically zero at k = 0.
    """
    if k < 0:
        raise DomainError(f"jet order must be nonnegative, got {k}")
    jets = prolong_chart(chart, k)
    ambient = antitangent_chart(jets)

    d_values = {g: poly(ambient.differential_of(g)) for g in jets.coordinates}
    d = VectorField(ambient, ODD, d_values)

    delta1 = VectorField(
        ambient,
        EVEN,
        {dg: poly(dg) for dg in ambient.differentials},
    )
    delta2 = weight_field(ambient)
    delta = delta1 + delta2

    j_values = {}
    for g in chart.coordinates:
        for r in range(k):
            j_values[jets.jet(g, r + 1)] = poly(
                ambient.differential_of(jets.jet(g, r))
            )
    J = VectorField(ambient, ODD, j_values)

    return CanonicalFields(ambient, k, d, delta1, delta2, delta, J)


@dataclass(frozen=True)
class RelationRow:
    """One bracket identity: [left, right] compared against an expected field."""

    block: int
    left: str
    right: str
    expected: str
    ok: bool

    @property
    def label(self) -> str:
        return f"[{self.left},{self.right}] = {self.expected}"


@dataclass(frozen=True)
class RelationReport:
    chart: Chart
    order: int
    rows: tuple[RelationRow, ...]

    @property
    def all_pass(self) -> bool:
        return all(row.ok for row in self.rows)


# The three displayed blocks of the bracket table. Some identities repeat
# across blocks; each displayed row is recomputed independently.
RELATION_TABLE = (
    (1, "d", "d", "0"),
    (1, "Delta1", "Delta2", "0"),
    (1, "Delta1", "d", "d"),
    (1, "Delta2", "d", "0"),
    (2, "J", "J", "0"),
    (2, "Delta1", "J", "J"),
    (2, "Delta2", "J", "-J"),
    (2, "d", "J", "0"),
    (3, "d", "d", "0"),
    (3, "Delta", "d", "d"),
    (3, "Delta", "J", "0"),
    (3, "d", "J", "0"),
    (3, "J", "J", "0"),
)


def verify_relations(chart: Chart, k: int) -> RelationReport:
    """Recompute every displayed bracket identity of the canonical fields."""
    if k < 1:
        raise DomainError(f"the relation table needs jet order >= 1, got {k}")
    fields = canonical_fields(chart, k)
    named = fields.by_name()
    rows = []
    for block, left, right, expected in RELATION_TABLE:
        result = bracket(named[left], named[right])
        if expected == "0":
            ok = result.is_zero()
        elif expected.startswith("-"):
            ok = result == -named[expected[1:]]
        else:
            ok = result == named[expected]
        rows.append(RelationRow(block, left, right, expected, ok))
    return RelationReport(fields.chart, k, tuple(rows))
