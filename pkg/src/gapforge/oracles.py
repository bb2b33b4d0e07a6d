"""Exact brute-force solvers: ground truth for every problem in the pipeline.

All searches iterate a finite box or grid in lexicographic order and keep the
first strict improvement, so results and witnesses are deterministic.  The
state cap is a hard error, never a silent approximation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Optional, Sequence

from .errors import EmptyGrid, SearchSpaceTooLarge
from .instances import (
    Label,
    LabelCoverInstance,
    Labeling,
    LhpAssignment,
    LhpSystem,
    NcpInstance,
    NonTrivialityRow,
    SisInstance,
    SsatInstance,
)
from .superassign import (
    SuperAssignment,
    is_consistent,
    is_nontrivial,
    is_not_all_zero,
    norm_l1,
    norm_linf,
)

Mode = Literal["l1", "linf"]


@dataclass(frozen=True)
class SearchBudget:
    """Box radius and state cap for the exact searches."""

    coeff_box: int = 2
    max_states: int = 10 ** 8
    mode: Mode = "l1"

    def __post_init__(self):
        if self.coeff_box < 1:
            raise ValueError("coeff_box must be at least 1")
        if self.mode not in ("l1", "linf"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def check(self, states: int) -> None:
        if states > self.max_states:
            raise SearchSpaceTooLarge(states, self.max_states)


# ---------------------------------------------------------------------------
# Label cover
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LcMaxResult:
    best_fraction: Fraction
    witness: Labeling
    states_visited: int


def solve_lc_max(lc: LabelCoverInstance, budget: SearchBudget = SearchBudget()) -> LcMaxResult:
    """Exact maximum fraction of satisfiable edges.

    Enumerates A-labelings; the B-side is chosen per vertex as the plurality
    of projected labels (lowest alphabet index on ties), which is optimal.
    """
    n_a = len(lc.a_vertices)
    budget.check(len(lc.sigma_a) ** n_a)
    best_count = -1
    best: Optional[Labeling] = None
    states = 0
    for combo in itertools.product(lc.sigma_a, repeat=n_a):
        states += 1
        phi_a = dict(zip(lc.a_vertices, combo))
        phi_b: dict = {}
        satisfied = 0
        for b in lc.b_vertices:
            counts: dict[Label, int] = {y: 0 for y in lc.sigma_b}
            for e in lc.edges_of_b[b]:
                counts[lc.projections[e][phi_a[e[0]]]] += 1
            top = max(counts.values(), default=0)
            phi_b[b] = next(y for y in lc.sigma_b if counts[y] == top)
            satisfied += top
        if satisfied > best_count:
            best_count = satisfied
            best = Labeling(phi_a=phi_a, phi_b=phi_b)
    total = len(lc.edges)
    fraction = Fraction(best_count, total) if total else Fraction(1)
    return LcMaxResult(best_fraction=fraction, witness=best, states_visited=states)


# ---------------------------------------------------------------------------
# SSAT
# ---------------------------------------------------------------------------

def enumerate_superassignments(ssat: SsatInstance, k: int) -> Iterator[SuperAssignment]:
    """All super-assignments with weights in [-k, k], in lexicographic order."""
    sizes = [len(t.assignments) for t in ssat.tests]
    total = sum(sizes)
    for flat in itertools.product(range(-k, k + 1), repeat=total):
        rows = []
        off = 0
        for size in sizes:
            rows.append(flat[off:off + size])
            off += size
        yield SuperAssignment(tuple(rows))


def enumerate_consistent_superassignments(ssat: SsatInstance, k: int) -> Iterator[SuperAssignment]:
    for s in enumerate_superassignments(ssat, k):
        if is_consistent(ssat, s):
            yield s


@dataclass(frozen=True)
class SsatMinResult:
    mode: Mode
    min_norm: Optional[Fraction]
    witness: Optional[SuperAssignment]
    states_visited: int


SideCondition = Literal["nontrivial", "not_all_zero"]


def solve_ssat_min_norm(
    ssat: SsatInstance,
    budget: SearchBudget,
    side_condition: Optional[SideCondition] = None,
) -> SsatMinResult:
    """Exact minimum norm over consistent super-assignments in the box.

    The l1 mode minimizes the average test norm subject to non-triviality;
    the linf mode minimizes the maximum test norm subject to not-all-zero.
    ``side_condition`` overrides the mode's default filter so the two minima
    can be compared under either condition.  Returns ``None`` when no
    admissible super-assignment exists in the box.
    """
    total = sum(len(t.assignments) for t in ssat.tests)
    k = budget.coeff_box
    budget.check((2 * k + 1) ** total)
    if side_condition is None:
        side_condition = "nontrivial" if budget.mode == "l1" else "not_all_zero"
    best_norm = None
    best: Optional[SuperAssignment] = None
    states = 0
    for s in enumerate_superassignments(ssat, k):
        states += 1
        if side_condition == "nontrivial":
            if not is_nontrivial(ssat, s):
                continue
        elif not is_not_all_zero(s):
            continue
        if not is_consistent(ssat, s):
            continue
        norm = norm_l1(s) if budget.mode == "l1" else norm_linf(s)
        if best_norm is None or norm < best_norm:
            best_norm = norm
            best = s
    return SsatMinResult(mode=budget.mode, min_norm=best_norm, witness=best, states_visited=states)


# ---------------------------------------------------------------------------
# SIS
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SisMinResult:
    min_l1: Optional[int]
    witness: Optional[tuple[int, ...]]
    states_visited: int


def _non_triviality_groups(sis: SisInstance) -> Optional[list[tuple[int, int]]]:
    """Column ranges per test when the instance carries a trusted pipeline layout.

    Requires contiguous (test, assignment) column provenance and one
    non-triviality row per test that is exactly the indicator of the test's
    columns with target 1; otherwise returns None and the solver falls back
    to plain enumeration.
    """
    if sis.column_provenance is None or sis.row_provenance is None:
        return None
    groups: list[tuple[int, int]] = []
    current, start = None, 0
    for col, (t_idx, _) in enumerate(sis.column_provenance):
        if t_idx != current:
            if current is not None:
                if t_idx != current + 1:
                    return None
                groups.append((start, col))
            elif t_idx != 0:
                return None
            current, start = t_idx, col
    if current is None:
        return None
    groups.append((start, len(sis.column_provenance)))
    nt_rows = [i for i, tag in enumerate(sis.row_provenance) if isinstance(tag, NonTrivialityRow)]
    if len(nt_rows) != len(groups):
        return None
    for row_idx in nt_rows:
        t_idx = sis.row_provenance[row_idx].test
        if not (0 <= t_idx < len(groups)):
            return None
        lo, hi = groups[t_idx]
        row = sis.matrix[row_idx]
        if sis.target[row_idx] != 1:
            return None
        if any((row[c] == 1) != (lo <= c < hi) for c in range(len(row))):
            return None
        if any(row[c] not in (0, 1) for c in range(len(row))):
            return None
    return groups


def _vectors_with_sum(length: int, k: int, target: int) -> Iterator[tuple[int, ...]]:
    """Vectors over [-k, k] with a fixed coordinate sum, lexicographic order."""

    def rec(prefix: list[int], remaining: int, need: int):
        if remaining == 0:
            if need == 0:
                yield tuple(prefix)
            return
        # prune branches whose suffix cannot reach the needed sum
        for v in range(-k, k + 1):
            rest = need - v
            if abs(rest) > k * (remaining - 1):
                continue
            prefix.append(v)
            yield from rec(prefix, remaining - 1, rest)
            prefix.pop()

    yield from rec([], length, target)


def solve_sis_min(sis: SisInstance, budget: SearchBudget) -> SisMinResult:
    """Exact minimum l1 norm of a box solution of ``matrix @ z == target``.

    Pipeline instances are pruned through their non-triviality rows (each
    column block must sum to 1), which cuts the box without changing the
    solution set.  Returns ``None`` when the target is unreachable in the box.
    """
    m = sis.num_cols
    k = budget.coeff_box
    budget.check((2 * k + 1) ** m)
    best_norm: Optional[int] = None
    best: Optional[tuple[int, ...]] = None
    states = 0

    groups = _non_triviality_groups(sis)
    if groups is not None:
        per_group = [
            list(_vectors_with_sum(hi - lo, k, 1))
            for lo, hi in groups
        ]
        candidates: Iterable[tuple[int, ...]] = (
            tuple(v for part in combo for v in part)
            for combo in itertools.product(*per_group)
        )
    else:
        candidates = itertools.product(range(-k, k + 1), repeat=m)

    for z in candidates:
        states += 1
        if sis.multiply(z) != sis.target:
            continue
        norm = sum(abs(v) for v in z)
        if best_norm is None or norm < best_norm:
            best_norm = norm
            best = z
    return SisMinResult(min_l1=best_norm, witness=best, states_visited=states)


# ---------------------------------------------------------------------------
# NCP
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NcpMinResult:
    min_dist: int
    witness: tuple[int, ...]
    mode: Literal["full", "box"]
    states_visited: int


def solve_ncp_min(
    ncp: NcpInstance, budget: SearchBudget, full_field: bool = False
) -> NcpMinResult:
    """Exact (full-field) or box-restricted minimum Hamming distance.

    Box mode restricts coordinates to the images of [-k, k] modulo q and is
    flagged as such in the result; witnesses are canonical field elements.
    """
    m = ncp.num_cols
    q = ncp.modulus
    if full_field:
        values: Sequence[int] = range(q)
        mode: Literal["full", "box"] = "full"
    else:
        k = budget.coeff_box
        seen = set()
        vals = []
        for v in range(-k, k + 1):
            c = v % q
            if c not in seen:
                seen.add(c)
                vals.append(c)
        values = vals
        mode = "box"
    budget.check(len(values) ** m)
    best_dist: Optional[int] = None
    best: Optional[tuple[int, ...]] = None
    states = 0
    for z in itertools.product(values, repeat=m):
        states += 1
        dist = ncp.distance(z)
        if best_dist is None or dist < best_dist:
            best_dist = dist
            best = z
    return NcpMinResult(min_dist=best_dist, witness=best, mode=mode, states_visited=states)


# ---------------------------------------------------------------------------
# LHP
# ---------------------------------------------------------------------------

def count_lhp_violations(lhp: LhpSystem, a: LhpAssignment) -> int:
    """Exact number of violated strict inequalities under dual-number evaluation.

    Identical copies of an inequality are evaluated once and weighted by
    multiplicity; the count is the same as evaluating each record.
    """
    multiplicity: dict[object, int] = {}
    for ineq in lhp.inequalities:
        multiplicity[ineq] = multiplicity.get(ineq, 0) + 1
    return sum(
        count for ineq, count in multiplicity.items() if not ineq.satisfied_by(a)
    )


@dataclass(frozen=True)
class LhpMinResult:
    min_violations: int
    witness: LhpAssignment
    states_visited: int


def default_lhp_grid(lhp: LhpSystem) -> Iterator[LhpAssignment]:
    """The soundness normal form: x in {-1,0,1}^n, y = 1, delta infinitesimal."""
    for xs in itertools.product((-1, 0, 1), repeat=lhp.num_x):
        yield LhpAssignment.of(xs)


def solve_lhp_min(
    lhp: LhpSystem,
    grid: Optional[Iterable[LhpAssignment]] = None,
    budget: SearchBudget = SearchBudget(),
) -> LhpMinResult:
    """Minimum violation count over a finite grid of candidate assignments.

    With the default grid this is an upper-bound oracle for the true noise:
    low-violation assignments reduce to the grid's normal form, but the exact
    optimum over all of rational space is not computed here.
    """
    if grid is None:
        budget.check(3 ** lhp.num_x)
        grid = default_lhp_grid(lhp)
    states = 0
    best_count: Optional[int] = None
    best_witness: Optional[LhpAssignment] = None
    for a in grid:
        states += 1
        count = count_lhp_violations(lhp, a)
        if best_count is None or count < best_count:
            best_count = count
            best_witness = a
    if best_count is None:
        raise EmptyGrid("no candidate assignments supplied")
    return LhpMinResult(min_violations=best_count, witness=best_witness, states_visited=states)
