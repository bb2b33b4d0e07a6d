"""Exact-arithmetic instance types for the five problems in the pipeline.

Everything here is immutable after construction and validated eagerly.  All
arithmetic is over arbitrary-precision integers and :class:`~fractions.Fraction`;
no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Union

from .errors import (
    MalformedInstance,
    PartialLabeling,
    UnknownEdge,
    UnknownLabel,
)

Label = Union[int, str]
Vertex = Union[int, str]
Edge = tuple[Vertex, Vertex]


# ---------------------------------------------------------------------------
# Label cover
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabelCoverInstance:
    """Bipartite constraint graph with one projection table per edge.

    ``projections`` maps each edge to a total function table from the A-side
    alphabet into the B-side alphabet.  Vertex and label collections are
    ordered; every iteration in the package follows these orders, so all
    derived objects are deterministic.
    """

    a_vertices: tuple[Vertex, ...]
    b_vertices: tuple[Vertex, ...]
    sigma_a: tuple[Label, ...]
    sigma_b: tuple[Label, ...]
    edges: tuple[Edge, ...]
    projections: dict[Edge, dict[Label, Label]]

    def __post_init__(self):
        a_set, b_set = set(self.a_vertices), set(self.b_vertices)
        if len(a_set) != len(self.a_vertices) or len(b_set) != len(self.b_vertices):
            raise MalformedInstance("duplicate vertex identifiers")
        if len(set(self.sigma_a)) != len(self.sigma_a) or len(set(self.sigma_b)) != len(self.sigma_b):
            raise MalformedInstance("duplicate alphabet labels")
        if not self.sigma_a or not self.sigma_b:
            raise MalformedInstance("alphabets must be nonempty")
        if len(set(self.edges)) != len(self.edges):
            raise MalformedInstance("duplicate edges")
        sig_a, sig_b = set(self.sigma_a), set(self.sigma_b)
        for e in self.edges:
            a, b = e
            if a not in a_set or b not in b_set:
                raise MalformedInstance(f"edge {e!r} has a dangling endpoint")
            table = self.projections.get(e)
            if table is None:
                raise MalformedInstance(f"edge {e!r} has no projection table")
            if set(table) != sig_a:
                raise MalformedInstance(f"projection table of {e!r} is not total on sigma_a")
            for y in table.values():
                if y not in sig_b:
                    raise MalformedInstance(f"projection table of {e!r} maps outside sigma_b")
        extra = set(self.projections) - set(self.edges)
        if extra:
            raise MalformedInstance(f"projection tables for unknown edges {sorted(map(repr, extra))}")

    # -- derived structure ---------------------------------------------------

    @cached_property
    def sigma_a_index(self) -> dict[Label, int]:
        return {x: i for i, x in enumerate(self.sigma_a)}

    @cached_property
    def sigma_b_index(self) -> dict[Label, int]:
        return {y: i for i, y in enumerate(self.sigma_b)}

    @cached_property
    def edges_of_b(self) -> dict[Vertex, tuple[Edge, ...]]:
        """Incident edges per B-vertex, in global edge order."""
        out: dict[Vertex, list[Edge]] = {b: [] for b in self.b_vertices}
        for e in self.edges:
            out[e[1]].append(e)
        return {b: tuple(es) for b, es in out.items()}

    @cached_property
    def edges_of_a(self) -> dict[Vertex, tuple[Edge, ...]]:
        out: dict[Vertex, list[Edge]] = {a: [] for a in self.a_vertices}
        for e in self.edges:
            out[e[0]].append(e)
        return {a: tuple(es) for a, es in out.items()}

    def neighbors_of_b(self, b: Vertex) -> tuple[Vertex, ...]:
        return tuple(e[0] for e in self.edges_of_b[b])

    @property
    def size_n(self) -> int:
        return len(self.a_vertices) + len(self.b_vertices) + len(self.edges)


@dataclass(frozen=True)
class Labeling:
    """An A-side labeling, optionally paired with a B-side labeling."""

    phi_a: dict[Vertex, Label]
    phi_b: Optional[dict[Vertex, Label]] = None

    def require_total(self, lc: LabelCoverInstance) -> None:
        if set(self.phi_a) != set(lc.a_vertices):
            raise PartialLabeling("phi_a does not cover A exactly")
        if self.phi_b is not None and set(self.phi_b) != set(lc.b_vertices):
            raise PartialLabeling("phi_b does not cover B exactly")


@dataclass(frozen=True)
class ValidationReport:
    bi_regular: bool
    d_a: int
    d_b: int
    p: int
    size_n: int


def validate_label_cover(lc: LabelCoverInstance) -> ValidationReport:
    """Report degrees, projection arity and size for a label cover.

    Structural invariants are enforced at construction time; this reports the
    derived quantities and flags non-bi-regular instances without rejecting
    them.  ``d_a`` and ``d_b`` are the maximum side degrees.
    """
    a_degrees = [len(lc.edges_of_a[a]) for a in lc.a_vertices]
    b_degrees = [len(lc.edges_of_b[b]) for b in lc.b_vertices]
    bi_regular = len(set(a_degrees)) <= 1 and len(set(b_degrees)) <= 1
    p = 0
    for e in lc.edges:
        table = lc.projections[e]
        counts: dict[Label, int] = {}
        for y in table.values():
            counts[y] = counts.get(y, 0) + 1
        p = max(p, max(counts.values()))
    return ValidationReport(
        bi_regular=bi_regular,
        d_a=max(a_degrees, default=0),
        d_b=max(b_degrees, default=0),
        p=p,
        size_n=lc.size_n,
    )


def preimage(lc: LabelCoverInstance, e: Edge, y: Label) -> tuple[Label, ...]:
    """All A-labels that the edge's table maps to ``y``, in alphabet order."""
    if e not in lc.projections:
        raise UnknownEdge(f"{e!r}")
    if y not in lc.sigma_b_index:
        raise UnknownLabel(f"{y!r}")
    table = lc.projections[e]
    return tuple(x for x in lc.sigma_a if table[x] == y)


def count_satisfied_edges(lc: LabelCoverInstance, lab: Labeling) -> int:
    """Number of edges whose projection constraint holds under ``lab``."""
    if lab.phi_b is None:
        raise PartialLabeling("phi_b is required to evaluate edge satisfaction")
    lab.require_total(lc)
    count = 0
    for (a, b) in lc.edges:
        if lc.projections[(a, b)][lab.phi_a[a]] == lab.phi_b[b]:
            count += 1
    return count


# ---------------------------------------------------------------------------
# SSAT
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SsatTest:
    """A test: an ordered variable tuple plus its satisfying assignments."""

    variables: tuple[Vertex, ...]
    assignments: tuple[tuple[Label, ...], ...]


@dataclass(frozen=True)
class LcProvenance:
    """Origin of an SSAT instance produced from a label cover."""

    lc: LabelCoverInstance
    var_to_a: tuple[Vertex, ...]
    test_to_b: tuple[Vertex, ...]


@dataclass(frozen=True)
class SsatInstance:
    variables: tuple[Vertex, ...]
    field_values: tuple[Label, ...]
    tests: tuple[SsatTest, ...]
    provenance: Optional[LcProvenance] = None

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise MalformedInstance("duplicate variables")
        if len(set(self.field_values)) != len(self.field_values) or not self.field_values:
            raise MalformedInstance("field values must be a nonempty ordered set")
        var_set = set(self.variables)
        values = set(self.field_values)
        used: set[Vertex] = set()
        for idx, test in enumerate(self.tests):
            if not test.variables:
                raise MalformedInstance(f"test {idx} has no variables")
            if len(set(test.variables)) != len(test.variables):
                raise MalformedInstance(f"test {idx} repeats a variable")
            if not var_set.issuperset(test.variables):
                raise MalformedInstance(f"test {idx} uses unknown variables")
            seen = set()
            for r in test.assignments:
                if len(r) != len(test.variables):
                    raise MalformedInstance(f"test {idx} has a partial assignment tuple")
                if not values.issuperset(r):
                    raise MalformedInstance(f"test {idx} assignment uses values outside the field")
                if r in seen:
                    raise MalformedInstance(f"test {idx} lists a duplicate assignment")
                seen.add(r)
            used.update(test.variables)
        if used != var_set:
            raise MalformedInstance("every variable must occur in at least one test")
        if self.provenance is not None:
            self._check_provenance()

    def _check_provenance(self) -> None:
        prov = self.provenance
        if len(prov.var_to_a) != len(self.variables) or len(prov.test_to_b) != len(self.tests):
            raise MalformedInstance("provenance maps have wrong lengths")
        report = validate_label_cover(prov.lc)
        for idx, test in enumerate(self.tests):
            b = prov.test_to_b[idx]
            d_b = len(prov.lc.edges_of_b[b])
            bound = len(prov.lc.sigma_b) * report.p ** d_b
            if len(test.assignments) > bound:
                raise MalformedInstance(
                    f"test {idx} has {len(test.assignments)} assignments, above the |sigma_b|*p^D_B bound {bound}"
                )

    # -- convenience ----------------------------------------------------------

    @cached_property
    def field_index(self) -> dict[Label, int]:
        return {v: i for i, v in enumerate(self.field_values)}

    @cached_property
    def variable_index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.variables)}

    @cached_property
    def tests_of_variable(self) -> dict[Vertex, tuple[int, ...]]:
        out: dict[Vertex, list[int]] = {v: [] for v in self.variables}
        for idx, test in enumerate(self.tests):
            for v in test.variables:
                out[v].append(idx)
        return {v: tuple(ix) for v, ix in out.items()}

    def value_at(self, test_idx: int, r_idx: int, var: Vertex) -> Label:
        """The value the ``r_idx``-th assignment of a test gives ``var``."""
        test = self.tests[test_idx]
        try:
            pos = test.variables.index(var)
        except ValueError:
            from .errors import VariableNotInTest

            raise VariableNotInTest(f"{var!r} not in test {test_idx}") from None
        return test.assignments[r_idx][pos]


# ---------------------------------------------------------------------------
# SIS
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NonTrivialityRow:
    test: int


@dataclass(frozen=True)
class ConsistencyRow:
    test_i: int
    test_j: int
    variable: Vertex
    value: Label


RowTag = Union[NonTrivialityRow, ConsistencyRow]


@dataclass(frozen=True)
class SisInstance:
    """Integer linear system ``matrix @ z == target`` with an l1 budget."""

    matrix: tuple[tuple[int, ...], ...]
    target: tuple[int, ...]
    bound: int
    column_provenance: Optional[tuple[tuple[int, int], ...]] = None
    row_provenance: Optional[tuple[RowTag, ...]] = None

    def __post_init__(self):
        n = len(self.matrix)
        if len(self.target) != n:
            raise MalformedInstance("target length differs from row count")
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise MalformedInstance("ragged matrix")
        m = widths.pop() if widths else 0
        if self.column_provenance is not None and len(self.column_provenance) != m:
            raise MalformedInstance("column provenance length differs from column count")
        if self.row_provenance is not None and len(self.row_provenance) != n:
            raise MalformedInstance("row provenance length differs from row count")

    @property
    def num_rows(self) -> int:
        return len(self.matrix)

    @property
    def num_cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def multiply(self, z: Iterable[int]) -> tuple[int, ...]:
        zs = tuple(z)
        if len(zs) != self.num_cols:
            raise MalformedInstance("vector length differs from column count")
        return tuple(sum(c * v for c, v in zip(row, zs)) for row in self.matrix)


# ---------------------------------------------------------------------------
# NCP
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class NcpInstance:
    """Nearest-codeword instance over a prime field."""

    modulus: int
    matrix: tuple[tuple[int, ...], ...]
    target: tuple[int, ...]
    bound: int
    replication: int

    def __post_init__(self):
        if not _is_prime(self.modulus):
            raise MalformedInstance(f"modulus {self.modulus} is not prime")
        if len(self.target) != len(self.matrix):
            raise MalformedInstance("target length differs from row count")
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise MalformedInstance("ragged matrix")

    @property
    def num_rows(self) -> int:
        return len(self.matrix)

    @property
    def num_cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def distance(self, z: Iterable[int]) -> int:
        """Hamming distance between ``matrix @ z`` and the target, mod q."""
        q = self.modulus
        zs = [v % q for v in z]
        if len(zs) != self.num_cols:
            raise MalformedInstance("vector length differs from column count")
        dist = 0
        for row, t in zip(self.matrix, self.target):
            if sum(c * v for c, v in zip(row, zs)) % q != t % q:
                dist += 1
        return dist


def hamming_weight(vec: Iterable[int], modulus: int) -> int:
    return sum(1 for v in vec if v % modulus != 0)


# ---------------------------------------------------------------------------
# LHP
# ---------------------------------------------------------------------------

class _Epsilon:
    """Positive infinitesimal; compares via (standard, epsilon) lexicographic pairs."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "EPSILON"


EPSILON = _Epsilon()

GT = "gt"
LT = "lt"

LHP_GROUPS = ("G1", "G2", "G3", "G4", "G5")


@dataclass(frozen=True)
class LhpInequality:
    """One strict homogeneous inequality over (x, y, delta).

    ``coeff_x`` is sparse: ascending ``(index, coefficient)`` pairs.  The
    right-hand side is always zero after homogenization; the field is kept so
    serialized records stay self-describing.
    """

    coeff_x: tuple[tuple[int, Fraction], ...]
    coeff_y: Fraction
    coeff_delta: Fraction
    sense: str
    group: str
    copies_of: str
    rhs: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sense not in (GT, LT):
            raise MalformedInstance(f"unknown sense {self.sense!r}")
        if self.group not in LHP_GROUPS:
            raise MalformedInstance(f"unknown group {self.group!r}")
        if self.rhs != 0:
            raise MalformedInstance("inequalities must be homogenized (rhs = 0)")
        prev = -1
        for i, _ in self.coeff_x:
            if i <= prev:
                raise MalformedInstance("coeff_x indices must be strictly ascending")
            prev = i

    def value_at(self, a: "LhpAssignment") -> tuple[Fraction, Fraction]:
        """Evaluate lhs - rhs as a (standard, epsilon-coefficient) pair."""
        std = sum((c * a.x_values[i] for i, c in self.coeff_x), Fraction(0))
        std += self.coeff_y * a.y_value
        if isinstance(a.delta_value, _Epsilon):
            eps = self.coeff_delta
        else:
            std += self.coeff_delta * a.delta_value
            eps = Fraction(0)
        return (std - self.rhs, eps)

    def satisfied_by(self, a: "LhpAssignment") -> bool:
        std, eps = self.value_at(a)
        if self.sense == GT:
            return (std, eps) > (0, 0)
        return (std, eps) < (0, 0)


@dataclass(frozen=True)
class LhpSystem:
    """A list of strict linear inequalities produced by homogenization."""

    num_x: int
    u_param: int
    inequalities: tuple[LhpInequality, ...]

    def __post_init__(self):
        if self.u_param < 1:
            raise MalformedInstance("u_param must be at least 1")
        for ineq in self.inequalities:
            for i, _ in ineq.coeff_x:
                if not (0 <= i < self.num_x):
                    raise MalformedInstance("coeff_x index out of range")

    def group_counts(self) -> dict[str, int]:
        counts = {g: 0 for g in LHP_GROUPS}
        for ineq in self.inequalities:
            counts[ineq.group] += 1
        return counts


@dataclass(frozen=True)
class LhpAssignment:
    """Values for (x, y, delta); delta may be the symbolic infinitesimal."""

    x_values: tuple[Fraction, ...]
    y_value: Fraction
    delta_value: Union[Fraction, _Epsilon]

    @classmethod
    def of(cls, xs: Iterable[Union[int, Fraction]], y: Union[int, Fraction] = 1,
           delta: Union[int, Fraction, _Epsilon] = EPSILON) -> "LhpAssignment":
        dv = delta if isinstance(delta, _Epsilon) else Fraction(delta)
        return cls(tuple(Fraction(v) for v in xs), Fraction(y), dv)
