"""The constructive reductions and the solution embedding/extraction maps.

Four instance transformations: label cover to SSAT, SSAT to SIS, and SIS to
both NCP and LHP.  Each one comes with maps carrying solutions forward
(completeness direction) and pulling low-cost solutions back (soundness
direction, as exact inverses on their images).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    BadParameters,
    EmptyRange,
    Infeasible,
    LengthMismatch,
    VariableNotShared,
)
from .instances import (
    EPSILON,
    GT,
    LT,
    ConsistencyRow,
    Label,
    LabelCoverInstance,
    LcProvenance,
    LhpAssignment,
    LhpInequality,
    LhpSystem,
    NcpInstance,
    NonTrivialityRow,
    SisInstance,
    SsatInstance,
    SsatTest,
    Vertex,
    _is_prime,
    preimage,
    validate_label_cover,
)
from .superassign import SuperAssignment


# ---------------------------------------------------------------------------
# Label cover -> SSAT
# ---------------------------------------------------------------------------

def lc_to_ssat(lc: LabelCoverInstance) -> SsatInstance:
    """One variable per A-vertex, one test per B-vertex.

    A test's satisfying assignments are, for each B-label in alphabet order,
    the cross product of the per-neighbor preimages of that label; labels with
    an empty preimage at some neighbor contribute nothing.  A test with no
    assignment at all is unsatisfiable and surfaced as an error rather than
    silently dropped.
    """
    validate_label_cover(lc)
    tests: list[SsatTest] = []
    for b in lc.b_vertices:
        edges = lc.edges_of_b[b]
        variables = tuple(e[0] for e in edges)
        assignments: list[tuple[Label, ...]] = []
        for y in lc.sigma_b:
            axes = [preimage(lc, e, y) for e in edges]
            if any(not axis for axis in axes):
                continue
            assignments.extend(itertools.product(*axes))
        if not assignments:
            raise EmptyRange(b)
        tests.append(SsatTest(variables=variables, assignments=tuple(assignments)))
    return SsatInstance(
        variables=tuple(lc.a_vertices),
        field_values=tuple(lc.sigma_a),
        tests=tuple(tests),
        provenance=LcProvenance(lc=lc, var_to_a=tuple(lc.a_vertices), test_to_b=tuple(lc.b_vertices)),
    )


# ---------------------------------------------------------------------------
# SSAT -> SIS
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetPair:
    """Characteristic / complemented-characteristic column matrices.

    ``g1`` has one column per assignment of the first test with a single 1 at
    the row of the assignment's value for the shared variable; ``g2`` has the
    complementary pattern for the second test.  Matching-value column pairs
    sum to the all-ones vector.
    """

    g1: tuple[tuple[int, ...], ...]
    g2: tuple[tuple[int, ...], ...]


def gadget_pair(ssat: SsatInstance, psi_i: int, psi_j: int, x: Vertex) -> GadgetPair:
    test_i, test_j = ssat.tests[psi_i], ssat.tests[psi_j]
    if x not in test_i.variables or x not in test_j.variables:
        raise VariableNotShared(f"{x!r} is not shared by tests {psi_i} and {psi_j}")
    pos_i, pos_j = test_i.variables.index(x), test_j.variables.index(x)
    g1 = tuple(
        tuple(1 if r[pos_i] == f else 0 for r in test_i.assignments)
        for f in ssat.field_values
    )
    g2 = tuple(
        tuple(0 if r[pos_j] == f else 1 for r in test_j.assignments)
        for f in ssat.field_values
    )
    return GadgetPair(g1=g1, g2=g2)


def _shared_variable_pairs(ssat: SsatInstance):
    """(i, j, x) triples for unordered test pairs, in (i, j, variable) order."""
    n = len(ssat.tests)
    for i in range(n):
        vars_i = set(ssat.tests[i].variables)
        for j in range(i + 1, n):
            if vars_i.isdisjoint(ssat.tests[j].variables):
                continue
            for x in ssat.variables:
                if x in vars_i and x in ssat.tests[j].variables:
                    yield i, j, x


def ssat_to_sis(ssat: SsatInstance) -> SisInstance:
    """Non-triviality rows plus consistency gadget rows, all-ones target.

    Columns are (test, assignment) pairs in instance order.  Each test
    contributes one row forcing its coefficient sum to 1; each unordered test
    pair sharing a variable contributes one gadget row per field value.  The
    norm budget is the number of tests.
    """
    col_offsets: list[int] = []
    off = 0
    for test in ssat.tests:
        col_offsets.append(off)
        off += len(test.assignments)
    m = off
    column_provenance = tuple(
        (t_idx, r_idx)
        for t_idx, test in enumerate(ssat.tests)
        for r_idx in range(len(test.assignments))
    )

    rows: list[tuple[int, ...]] = []
    tags: list = []
    for t_idx, test in enumerate(ssat.tests):
        row = [0] * m
        for r_idx in range(len(test.assignments)):
            row[col_offsets[t_idx] + r_idx] = 1
        rows.append(tuple(row))
        tags.append(NonTrivialityRow(test=t_idx))

    for i, j, x in _shared_variable_pairs(ssat):
        pair = gadget_pair(ssat, i, j, x)
        for f_idx, f in enumerate(ssat.field_values):
            row = [0] * m
            for r_idx, v in enumerate(pair.g1[f_idx]):
                row[col_offsets[i] + r_idx] = v
            for r_idx, v in enumerate(pair.g2[f_idx]):
                row[col_offsets[j] + r_idx] = v
            rows.append(tuple(row))
            tags.append(ConsistencyRow(test_i=i, test_j=j, variable=x, value=f))

    return SisInstance(
        matrix=tuple(rows),
        target=tuple(1 for _ in rows),
        bound=len(ssat.tests),
        column_provenance=column_provenance,
        row_provenance=tuple(tags),
    )


def sis_solution_from_superassignment(ssat: SsatInstance, s: SuperAssignment) -> tuple[int, ...]:
    """Concatenate the weight vectors in column order."""
    s.validate_for(ssat)
    return tuple(w for row in s.weights for w in row)


def superassignment_from_sis_solution(ssat: SsatInstance, z) -> SuperAssignment:
    """Break a coefficient vector into per-test pieces; inverse of the embedding."""
    zs = tuple(z)
    sizes = [len(test.assignments) for test in ssat.tests]
    if len(zs) != sum(sizes):
        raise LengthMismatch(f"expected a vector of length {sum(sizes)}, got {len(zs)}")
    rows = []
    off = 0
    for size in sizes:
        rows.append(tuple(zs[off:off + size]))
        off += size
    return SuperAssignment(tuple(rows))


# ---------------------------------------------------------------------------
# SIS -> NCP
# ---------------------------------------------------------------------------

def _smallest_prime_above(n: int) -> int:
    candidate = max(2, n + 1)
    while not _is_prime(candidate):
        candidate += 1
    return candidate


def sis_to_ncp(
    sis: SisInstance,
    g: int,
    d_rep: Optional[int] = None,
    q: Optional[int] = None,
) -> NcpInstance:
    """Replicate every SIS row and append an identity block.

    Each equation row is repeated ``d_rep`` times (strictly more than g times
    the SIS budget, so a single broken equation already costs more than any
    in-budget solution) and the identity block charges the Hamming weight of
    the coefficient vector itself.  The prime modulus must exceed g times the
    larger matrix dimension so that in-range arithmetic never wraps.
    """
    if g < 1:
        raise BadParameters("g must be at least 1")
    n_rows, m_cols = sis.num_rows, sis.num_cols
    if d_rep is None:
        d_rep = g * sis.bound + 1
    elif d_rep <= g * sis.bound:
        raise BadParameters(f"d_rep must exceed g*bound = {g * sis.bound}")
    if q is None:
        q = _smallest_prime_above(g * max(n_rows, m_cols))
    elif not _is_prime(q) or q <= g * max(n_rows, m_cols):
        raise BadParameters(f"q must be a prime above g*max(rows, cols) = {g * max(n_rows, m_cols)}")

    matrix: list[tuple[int, ...]] = []
    target: list[int] = []
    for row, t in zip(sis.matrix, sis.target):
        reduced = tuple(c % q for c in row)
        for _ in range(d_rep):
            matrix.append(reduced)
            target.append(t % q)
    for i in range(m_cols):
        matrix.append(tuple(1 if k == i else 0 for k in range(m_cols)))
        target.append(0)
    return NcpInstance(
        modulus=q,
        matrix=tuple(matrix),
        target=tuple(target),
        bound=sis.bound,
        replication=d_rep,
    )


# ---------------------------------------------------------------------------
# SIS -> LHP
# ---------------------------------------------------------------------------

def sis_to_lhp(sis: SisInstance, u_param: Optional[int] = None, g: int = 1) -> LhpSystem:
    """Homogenize the SIS equations into strict inequalities over (x, y, delta).

    Group layout (U copies of each member, emitted consecutively):

    * G1 squeezes delta into (-y/U, y/U).
    * G2 turns every equation ``sum a_i x_i = c`` into the pair
      ``sum a_i x_i - c y + delta > 0`` and ``sum a_i x_i - c y - delta < 0``.
    * G3 boxes every variable into (-2y, 2y).
    * G4 charges one violation per nonzero variable (single copies).
    * G5 keeps y positive.
    """
    if u_param is not None and u_param < 1:
        raise BadParameters("u_param must be at least 1")
    u = u_param if u_param is not None else g * sis.bound + 1
    m = sis.num_cols
    ineqs: list[LhpInequality] = []

    def emit(copies, coeff_x, coeff_y, coeff_delta, sense, group, tag):
        record = LhpInequality(
            coeff_x=tuple((i, Fraction(c)) for i, c in coeff_x),
            coeff_y=Fraction(coeff_y),
            coeff_delta=Fraction(coeff_delta),
            sense=sense,
            group=group,
            copies_of=tag,
        )
        ineqs.extend([record] * copies)

    emit(u, (), Fraction(1, u), 1, GT, "G1", "g1_lower")
    emit(u, (), Fraction(-1, u), 1, LT, "G1", "g1_upper")
    for row_idx, (row, c) in enumerate(zip(sis.matrix, sis.target)):
        sparse = tuple((i, v) for i, v in enumerate(row) if v != 0)
        emit(u, sparse, -c, 1, GT, "G2", f"g2_row{row_idx}_plus")
        emit(u, sparse, -c, -1, LT, "G2", f"g2_row{row_idx}_minus")
    for i in range(m):
        emit(u, ((i, 1),), -2, 0, LT, "G3", f"g3_x{i}_upper")
        emit(u, ((i, 1),), 2, 0, GT, "G3", f"g3_x{i}_lower")
    for i in range(m):
        emit(1, ((i, 1),), 0, 1, GT, "G4", f"g4_x{i}_plus")
        emit(1, ((i, 1),), 0, -1, LT, "G4", f"g4_x{i}_minus")
    emit(u, (), 1, 0, GT, "G5", "g5_y_positive")

    return LhpSystem(num_x=m, u_param=u, inequalities=tuple(ineqs))


def lhp_assignment_from_sis_solution(z) -> LhpAssignment:
    """x = z, y = 1, delta = the symbolic infinitesimal."""
    return LhpAssignment.of(list(z), y=1, delta=EPSILON)


def sis_solution_from_lhp_assignment(lhp: LhpSystem, a: LhpAssignment) -> tuple[int, ...]:
    """Divide the x-values by y after checking the G1-G3 prerequisites.

    G1 forces y > 0, G3 keeps every quotient inside (-2, 2) and G2 squeezes
    each equation to exactness (automatic under the symbolic delta; enforced
    explicitly for explicit-delta assignments, which can otherwise sit a
    nonzero slack away from the equation).  Quotients must come out integral.
    """
    if len(a.x_values) != lhp.num_x:
        raise LengthMismatch(f"assignment has {len(a.x_values)} x-values, system has {lhp.num_x}")
    # structural prerequisites (delta window, variable box) are reported
    # before equation rows
    for group in ("G1", "G3", "G2"):
        for idx, ineq in enumerate(lhp.inequalities):
            if ineq.group == group and not ineq.satisfied_by(a):
                raise Infeasible(group, idx, ineq.copies_of)
    y = a.y_value
    quotients = [x / y for x in a.x_values]
    seen: set[str] = set()
    for idx, ineq in enumerate(lhp.inequalities):
        if ineq.group != "G2" or ineq.copies_of in seen:
            continue
        seen.add(ineq.copies_of)
        residue = sum((c * quotients[i] for i, c in ineq.coeff_x), Fraction(0)) + ineq.coeff_y
        if residue != 0:
            raise Infeasible("g2_exactness", idx, ineq.copies_of)
    for i, value in enumerate(quotients):
        if value.denominator != 1:
            raise Infeasible("integrality", i, f"x_{i}/y = {value}")
    return tuple(int(v) for v in quotients)
