"""Agreement-soundness machinery and the randomized list constructions.

Exact agreement and list-agreement soundness are computed by enumeration.
The list constructions turn a low-norm consistent super-assignment into label
lists that create agreement on many B-vertices; sampling uses exact rational
thresholds against 64-bit uniform draws, split into one independent stream
per test so the output is reproducible and order-independent.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import (
    MalformedInstance,
    NormBoundViolated,
    NotLcDerived,
    PreconditionFailed,
    SearchSpaceTooLarge,
)
from .instances import Label, LabelCoverInstance, SsatInstance, Vertex
from .superassign import (
    SuperAssignment,
    TestKind,
    assigned_value_sets,
    classify_test,
    is_consistent,
    is_nontrivial,
    is_not_all_zero,
    norm_l1,
    norm_linf,
    test_norm,
)

DEFAULT_MAX_STATES = 10 ** 8


# ---------------------------------------------------------------------------
# Disagreement predicates and exact soundness
# ---------------------------------------------------------------------------

def totally_disagree(lc: LabelCoverInstance, phi_a: Mapping[Vertex, Label], b: Vertex) -> bool:
    """No two neighbors of ``b`` project their labels to a common value."""
    edges = lc.edges_of_b[b]
    images = [lc.projections[e][phi_a[e[0]]] for e in edges]
    return len(images) == len(set(images))


@dataclass(frozen=True)
class ListLabeling:
    """A label list per A-vertex; list entries follow the alphabet order."""

    lists: dict[Vertex, tuple[Label, ...]]
    max_list_size: int

    @classmethod
    def from_sets(cls, lc: LabelCoverInstance, sets: Mapping[Vertex, Iterable[Label]]) -> "ListLabeling":
        lists: dict[Vertex, tuple[Label, ...]] = {}
        for a in lc.a_vertices:
            members = set(sets.get(a, ()))
            if not members.issubset(lc.sigma_a):
                raise MalformedInstance(f"list of {a!r} contains labels outside sigma_a")
            lists[a] = tuple(x for x in lc.sigma_a if x in members)
        return cls(lists=lists, max_list_size=max((len(v) for v in lists.values()), default=0))

    def sizes(self) -> dict[Vertex, int]:
        return {a: len(v) for a, v in self.lists.items()}


def list_totally_disagree(lc: LabelCoverInstance, lists: ListLabeling, b: Vertex) -> bool:
    """No two neighbors of ``b`` hold list members projecting to a common value."""
    edges = lc.edges_of_b[b]
    image_sets = [
        {lc.projections[e][x] for x in lists.lists[e[0]]}
        for e in edges
    ]
    for i in range(len(image_sets)):
        for j in range(i + 1, len(image_sets)):
            if image_sets[i] & image_sets[j]:
                return False
    return True


def agreement_soundness_exact(lc: LabelCoverInstance, max_states: int = DEFAULT_MAX_STATES) -> Fraction:
    """Exact agreement-soundness error by enumerating every A-labeling.

    The result is the maximum, over labelings, of the fraction of B-vertices
    that are not in total disagreement.
    """
    n_a = len(lc.a_vertices)
    states = len(lc.sigma_a) ** n_a
    if states > max_states:
        raise SearchSpaceTooLarge(states, max_states)
    n_b = len(lc.b_vertices)
    if n_b == 0:
        return Fraction(0)
    best = 0
    for combo in itertools.product(lc.sigma_a, repeat=n_a):
        phi_a = dict(zip(lc.a_vertices, combo))
        agreeing = sum(1 for b in lc.b_vertices if not totally_disagree(lc, phi_a, b))
        if agreeing > best:
            best = agreeing
    return Fraction(best, n_b)


def list_agreement_soundness_exact(
    lc: LabelCoverInstance, l: int, max_states: int = DEFAULT_MAX_STATES
) -> Fraction:
    """Exact list-agreement soundness for lists of size at most ``l``.

    Agreement is monotone in list contents, so the maximum over lists of size
    at most ``l`` is attained with every list of size exactly
    ``min(l, |sigma_a|)``; only those are enumerated.
    """
    if l < 1:
        raise MalformedInstance("list size must be at least 1")
    k = min(l, len(lc.sigma_a))
    subsets = list(itertools.combinations(lc.sigma_a, k))
    n_a = len(lc.a_vertices)
    states = len(subsets) ** n_a
    if states > max_states:
        raise SearchSpaceTooLarge(states, max_states)
    n_b = len(lc.b_vertices)
    if n_b == 0:
        return Fraction(0)
    best = 0
    for combo in itertools.product(subsets, repeat=n_a):
        labeling = ListLabeling.from_sets(lc, dict(zip(lc.a_vertices, combo)))
        agreeing = sum(1 for b in lc.b_vertices if not list_totally_disagree(lc, labeling, b))
        if agreeing > best:
            best = agreeing
    return Fraction(best, n_b)


@dataclass(frozen=True)
class BoundCheck:
    lhs: Fraction
    rhs: Fraction
    holds: bool


def check_list_soundness_bound(
    lc: LabelCoverInstance, l: int, max_states: int = DEFAULT_MAX_STATES
) -> BoundCheck:
    """List soundness is at most l^2 times plain agreement soundness (capped at 1)."""
    lhs = list_agreement_soundness_exact(lc, l, max_states)
    rhs = min(Fraction(1), l * l * agreement_soundness_exact(lc, max_states))
    return BoundCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs)


# ---------------------------------------------------------------------------
# List construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ListConstructionParams:
    """Norm bound, target fraction, the derived threshold and inclusion probability."""

    g: Fraction
    s_list: Fraction
    g1: Fraction
    p_include: Fraction
    seed: int

    def __post_init__(self):
        if not (0 < self.s_list < Fraction(1, 2)):
            raise MalformedInstance("s_list must lie strictly between 0 and 1/2")
        if not (0 < self.p_include <= 1):
            raise MalformedInstance("p_include must lie in (0, 1]")

    @classmethod
    def derive(
        cls,
        g,
        s_list,
        d_a: int,
        seed: int = 0,
        force_p_one: bool = False,
    ) -> "ListConstructionParams":
        g = Fraction(g)
        s_list = Fraction(s_list)
        g1 = g * (1 - s_list) / (1 - 2 * s_list)
        p = Fraction(1) if force_p_one else min(Fraction(1), g1 / d_a)
        return cls(g=g, s_list=s_list, g1=g1, p_include=p, seed=seed)


def _stream(seed: int, test_idx: int) -> random.Random:
    # one independent, reproducible stream per test
    return random.Random((seed << 32) + test_idx)


def _draw(rng: random.Random, p: Fraction) -> bool:
    u = rng.getrandbits(64)
    return u * p.denominator < p.numerator * (1 << 64)


def select_low_norm_tests(
    ssat: SsatInstance, s: SuperAssignment, params: ListConstructionParams
) -> tuple[int, ...]:
    """Tests whose norm is at most the Markov threshold g1.

    When the average norm is at most g, at least an s_list fraction of tests
    fall below g1 = g(1 - s_list)/(1 - 2 s_list); that floor is asserted.
    """
    avg = norm_l1(s)
    if avg > params.g:
        raise NormBoundViolated(f"average norm {avg} exceeds the bound {params.g}")
    selected = tuple(i for i in range(len(ssat.tests)) if test_norm(s, i) <= params.g1)
    assert Fraction(len(selected), len(ssat.tests)) >= params.s_list
    return selected


def _require_lc(ssat: SsatInstance) -> LabelCoverInstance:
    if ssat.provenance is None:
        raise NotLcDerived("list construction needs label-cover provenance")
    return ssat.provenance.lc


def _include_from_assignment(
    ssat: SsatInstance,
    lists: dict[Vertex, set[Label]],
    test_idx: int,
    r_idx: int,
    skip_var: Optional[Vertex],
    assigned: Mapping[Vertex, frozenset[Label]],
    p: Fraction,
    rng: random.Random,
) -> None:
    """Offer each non-assigned value of one assignment to its variable's list."""
    test = ssat.tests[test_idx]
    r = test.assignments[r_idx]
    for var, value in zip(test.variables, r):
        if var == skip_var or value in assigned[var]:
            continue
        if _draw(rng, p):
            lists[var].add(value)


def list_construction(
    ssat: SsatInstance, s: SuperAssignment, params: ListConstructionParams
) -> ListLabeling:
    """Build label lists from a consistent non-trivial super-assignment.

    Step 1 puts every assigned value into its variable's list.  Step 2 walks
    the low-norm tests; wherever every nonzero assignment has exactly one
    assigned value, the lowest-index nonzero assignment donates its
    non-assigned values, each kept with probability ``p_include``.  Ties are
    always broken by index, and p_include = 1 makes the construction fully
    deterministic.
    """
    lc = _require_lc(ssat)
    if not is_consistent(ssat, s) or not is_nontrivial(ssat, s):
        raise PreconditionFailed("list construction needs a consistent, non-trivial super-assignment")
    assigned = assigned_value_sets(ssat, s)
    lists: dict[Vertex, set[Label]] = {x: set(assigned[x]) for x in ssat.variables}
    for t_idx in select_low_norm_tests(ssat, s, params):
        if classify_test(ssat, s, t_idx) is not TestKind.ALL_SINGLE_GOOD:
            continue
        r_idx = next(i for i, w in enumerate(s.weights[t_idx]) if w != 0)
        rng = _stream(params.seed, t_idx)
        _include_from_assignment(ssat, lists, t_idx, r_idx, None, assigned, params.p_include, rng)
    return ListLabeling.from_sets(lc, lists)


@dataclass(frozen=True)
class LinfListResult:
    """Lists plus the bookkeeping of the max-norm construction.

    ``marked_step3`` is the set of tests claimed while covering variables with
    no assigned value; ``g_times_d_a`` and ``marked_value_counts`` report the
    quantities the construction's applicability conditions talk about.
    """

    labeling: ListLabeling
    marked_step2: tuple[int, ...]
    marked_step3: tuple[int, ...]
    g_times_d_a: int
    marked_value_counts: dict[Vertex, int]


def list_construction_linf(
    ssat: SsatInstance,
    s: SuperAssignment,
    g: int,
    seed: int,
    p_override: Optional[Fraction] = None,
) -> LinfListResult:
    """Max-norm variant: every nonzero test participates, plus a marking walk.

    Steps 1 and 2 match :func:`list_construction` with threshold g and
    p = min(1, g/D_A).  Step 3 then covers each variable with an empty
    assigned set: walking its not-yet-marked tests in index order, it prefers
    an assignment whose value for the variable is already listed, includes
    that value, offers the assignment's other values with probability p, and
    stops once taking a fresh value would exceed g distinct marked values.
    """
    lc = _require_lc(ssat)
    if not is_consistent(ssat, s):
        raise PreconditionFailed("max-norm list construction needs a consistent super-assignment")
    if not is_not_all_zero(s):
        raise PreconditionFailed("super-assignment is all zero")
    if norm_linf(s) > g:
        raise PreconditionFailed(f"max test norm {norm_linf(s)} exceeds the bound {g}")
    d_a = max(len(lc.edges_of_a[a]) for a in lc.a_vertices)
    p = p_override if p_override is not None else min(Fraction(1), Fraction(g, d_a))
    assigned = assigned_value_sets(ssat, s)
    lists: dict[Vertex, set[Label]] = {x: set(assigned[x]) for x in ssat.variables}

    marked: set[int] = set()
    step2: list[int] = []
    for t_idx in range(len(ssat.tests)):
        if test_norm(s, t_idx) == 0:
            continue
        if classify_test(ssat, s, t_idx) is not TestKind.ALL_SINGLE_GOOD:
            continue
        r_idx = next(i for i, w in enumerate(s.weights[t_idx]) if w != 0)
        rng = _stream(seed, t_idx)
        _include_from_assignment(ssat, lists, t_idx, r_idx, None, assigned, p, rng)
        marked.add(t_idx)
        step2.append(t_idx)

    step3: list[int] = []
    marked_value_counts: dict[Vertex, int] = {}
    for x in ssat.variables:
        if assigned[x]:
            continue
        taken: set[Label] = set()
        for t_idx in ssat.tests_of_variable[x]:
            if t_idx in marked:
                continue
            test = ssat.tests[t_idx]
            pos = test.variables.index(x)
            r_idx = next(
                (i for i, r in enumerate(test.assignments) if r[pos] in lists[x]),
                0,
            )
            value = test.assignments[r_idx][pos]
            if value not in taken and len(taken) >= g:
                break
            lists[x].add(value)
            taken.add(value)
            rng = _stream(seed, t_idx)
            _include_from_assignment(ssat, lists, t_idx, r_idx, x, assigned, p, rng)
            marked.add(t_idx)
            step3.append(t_idx)
        marked_value_counts[x] = len(taken)

    return LinfListResult(
        labeling=ListLabeling.from_sets(lc, lists),
        marked_step2=tuple(step2),
        marked_step3=tuple(step3),
        g_times_d_a=g * d_a,
        marked_value_counts=marked_value_counts,
    )


@dataclass(frozen=True)
class DefeatReport:
    non_disagree_fraction: Fraction
    defeats: bool


def verify_defeats_list_soundness(
    lc: LabelCoverInstance, lists: ListLabeling, s_list
) -> DefeatReport:
    """Fraction of B-vertices with agreement through the lists, against a target."""
    n_b = len(lc.b_vertices)
    if n_b == 0:
        return DefeatReport(Fraction(0), False)
    agreeing = sum(1 for b in lc.b_vertices if not list_totally_disagree(lc, lists, b))
    fraction = Fraction(agreeing, n_b)
    return DefeatReport(non_disagree_fraction=fraction, defeats=fraction >= Fraction(s_list))
