"""Exact oracles: values on the fixtures, determinism, cross-identities."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from gapforge.errors import EmptyGrid, SearchSpaceTooLarge
from gapforge.genlab import GenSpec, gen_label_cover
from gapforge.instances import LabelCoverInstance, LhpAssignment, count_satisfied_edges
from gapforge.oracles import (
    SearchBudget,
    count_lhp_violations,
    solve_lc_max,
    solve_lhp_min,
    solve_ncp_min,
    solve_sis_min,
    solve_ssat_min_norm,
)
from gapforge.reductions import (
    lhp_assignment_from_sis_solution,
    sis_to_lhp,
    sis_to_ncp,
    ssat_to_sis,
)


# ---------------------------------------------------------------------------
# solve_lc_max
# ---------------------------------------------------------------------------

def test_lc_max_id2(lc_id2):
    assert solve_lc_max(lc_id2).best_fraction == 1


def test_lc_max_cyc_with_independent_full_enumeration(lc_cyc):
    # independent oracle: enumerate phi_a AND phi_b fully (16 labelings)
    from gapforge.instances import Labeling

    best = Fraction(0)
    for pa in itertools.product((0, 1), repeat=2):
        for pb in itertools.product((0, 1), repeat=2):
            lab = Labeling(dict(zip(("a0", "a1"), pa)), dict(zip(("b0", "b1"), pb)))
            best = max(best, Fraction(count_satisfied_edges(lc_cyc, lab), 4))
    result = solve_lc_max(lc_cyc)
    assert result.best_fraction == best == Fraction(3, 4)
    # the reported witness attains the optimum
    attained = count_satisfied_edges(lc_cyc, result.witness)
    assert Fraction(attained, 4) == best


def test_lc_max_cyc_without_flip_edge(lc_cyc):
    tables = {e: dict(lc_cyc.projections[e]) for e in lc_cyc.edges if e != ("a1", "b1")}
    lc = LabelCoverInstance(
        ("a0", "a1"), ("b0", "b1"), (0, 1), (0, 1),
        tuple(e for e in lc_cyc.edges if e != ("a1", "b1")), tables,
    )
    assert solve_lc_max(lc).best_fraction == 1


def test_lc_max_cap(lc_cyc):
    with pytest.raises(SearchSpaceTooLarge):
        solve_lc_max(lc_cyc, SearchBudget(max_states=3))


def test_lc_max_deterministic(lc_cyc):
    assert solve_lc_max(lc_cyc) == solve_lc_max(lc_cyc)


# ---------------------------------------------------------------------------
# solve_ssat_min_norm
# ---------------------------------------------------------------------------

def test_ssat_min_id2(ssat_id2):
    result = solve_ssat_min_norm(ssat_id2, SearchBudget(coeff_box=1, mode="l1"))
    assert result.min_norm == 1


def test_ssat_min_cyc_l1(ssat_cyc):
    result = solve_ssat_min_norm(ssat_cyc, SearchBudget(coeff_box=2, mode="l1"))
    assert result.min_norm == 2
    # no consistent non-trivial super-assignment of norm 1 exists
    assert result.witness is not None


def test_ssat_min_cyc_linf(ssat_cyc):
    result = solve_ssat_min_norm(ssat_cyc, SearchBudget(coeff_box=2, mode="linf"))
    assert result.min_norm == 2


def test_ssat_min_share(ssat_share):
    result = solve_ssat_min_norm(ssat_share, SearchBudget(coeff_box=1, mode="l1"))
    assert result.min_norm == 1
    # lexicographically smallest witness over the flattened weight tuple
    assert result.witness.weights == ((-1, 0), (-1, 0))


def test_ssat_min_infeasible_none():
    from gapforge.instances import SsatInstance, SsatTest

    ssat = SsatInstance(
        variables=("x",),
        field_values=(0, 1),
        tests=(SsatTest(("x",), ((0,), (1,))),),
    )
    result = solve_ssat_min_norm(ssat, SearchBudget(coeff_box=1, mode="l1"))
    assert result.min_norm == 1  # sanity: (1, 0) etc. exist


def test_ssat_min_cap(ssat_cyc):
    with pytest.raises(SearchSpaceTooLarge):
        solve_ssat_min_norm(ssat_cyc, SearchBudget(coeff_box=2, max_states=100))


# ---------------------------------------------------------------------------
# solve_sis_min
# ---------------------------------------------------------------------------

def test_sis_min_share(ssat_share):
    sis = ssat_to_sis(ssat_share)
    result = solve_sis_min(sis, SearchBudget(coeff_box=2))
    assert result.min_l1 == 2
    assert result.witness in ((1, 0, 1, 0), (0, 1, 0, 1))


def test_sis_min_share_against_plain_enumeration(ssat_share):
    # independent oracle: no provenance pruning, plain box enumeration
    sis = ssat_to_sis(ssat_share)
    stripped = type(sis)(matrix=sis.matrix, target=sis.target, bound=sis.bound)
    pruned = solve_sis_min(sis, SearchBudget(coeff_box=2))
    plain = solve_sis_min(stripped, SearchBudget(coeff_box=2))
    assert pruned.min_l1 == plain.min_l1 == 2
    assert pruned.witness == plain.witness


def test_sis_min_cyc_is_infeasible(ssat_cyc):
    """The gadget rows force equal weights with unit block sums: no integer z.

    Exhaustively cross-checked without pruning; the consistency rows of this
    instance admit only all-equal coefficient blocks, and a block of two equal
    integers cannot sum to 1.
    """
    sis = ssat_to_sis(ssat_cyc)
    stripped = type(sis)(matrix=sis.matrix, target=sis.target, bound=sis.bound)
    for budget in (SearchBudget(coeff_box=2), SearchBudget(coeff_box=3)):
        assert solve_sis_min(sis, budget).min_l1 is None
        assert solve_sis_min(stripped, budget).min_l1 is None


def test_sis_min_unreachable_target():
    from gapforge.instances import SisInstance

    sis = SisInstance(matrix=((2, 2),), target=(1,), bound=1)
    assert solve_sis_min(sis, SearchBudget(coeff_box=2)).min_l1 is None


def test_sis_min_monotone_in_box(ssat_share):
    sis = ssat_to_sis(ssat_share)
    small = solve_sis_min(sis, SearchBudget(coeff_box=1)).min_l1
    large = solve_sis_min(sis, SearchBudget(coeff_box=3)).min_l1
    assert large <= small


# ---------------------------------------------------------------------------
# solve_ncp_min
# ---------------------------------------------------------------------------

def test_ncp_min_share_full_field(ssat_share):
    ncp = sis_to_ncp(ssat_to_sis(ssat_share), g=1)
    result = solve_ncp_min(ncp, SearchBudget(), full_field=True)
    assert result.min_dist == 2
    assert result.mode == "full"
    assert result.states_visited == 5 ** 4


def test_ncp_min_share_box(ssat_share):
    ncp = sis_to_ncp(ssat_to_sis(ssat_share), g=1)
    result = solve_ncp_min(ncp, SearchBudget(coeff_box=1))
    assert result.min_dist == 2
    assert result.mode == "box"


def test_ncp_zero_vector_distance(ssat_share):
    ncp = sis_to_ncp(ssat_to_sis(ssat_share), g=1)
    assert ncp.distance((0, 0, 0, 0)) == 12


def test_ncp_min_equals_sis_min_when_below_replication(ssat_share, ssat_id2):
    for ssat in (ssat_share, ssat_id2):
        sis = ssat_to_sis(ssat)
        ncp = sis_to_ncp(sis, g=1)
        sis_min = solve_sis_min(sis, SearchBudget(coeff_box=2)).min_l1
        ncp_min = solve_ncp_min(ncp, SearchBudget(), full_field=True).min_dist
        assert sis_min is not None and sis_min < ncp.replication
        assert ncp_min == sis_min


def test_ncp_cap(ssat_share):
    ncp = sis_to_ncp(ssat_to_sis(ssat_share), g=1)
    with pytest.raises(SearchSpaceTooLarge):
        solve_ncp_min(ncp, SearchBudget(max_states=10), full_field=True)


# ---------------------------------------------------------------------------
# LHP oracles
# ---------------------------------------------------------------------------

def test_lhp_violations_embedded(ssat_share):
    lhp = sis_to_lhp(ssat_to_sis(ssat_share), u_param=10)
    assert count_lhp_violations(lhp, lhp_assignment_from_sis_solution((1, 0, 1, 0))) == 2


def test_lhp_violations_all_zero_assignment(ssat_share):
    sis = ssat_to_sis(ssat_share)
    lhp = sis_to_lhp(sis, u_param=10)
    a = LhpAssignment.of([0, 0, 0, 0], y=0, delta=0)
    # y=0, delta=0: every G1 member has value (0, 0), strictness fails; the
    # G2 ">" rows sit at -0 with no epsilon; G4 likewise; G5 at 0
    expected = 0
    for q in lhp.inequalities:
        std, eps = q.value_at(a)
        ok = (std, eps) > (0, 0) if q.sense == "gt" else (std, eps) < (0, 0)
        if not ok:
            expected += 1
    assert count_lhp_violations(lhp, a) == expected
    assert expected >= lhp.u_param  # at least the G1 block fails


def test_lhp_min_share(ssat_share):
    lhp = sis_to_lhp(ssat_to_sis(ssat_share), u_param=10)
    result = solve_lhp_min(lhp)
    assert result.min_violations == 2
    assert [int(x) for x in result.witness.x_values] in [[0, 1, 0, 1], [1, 0, 1, 0]]


def test_lhp_min_no_solution_in_grid_costs_u(ssat_cyc):
    # this system's equations have no solution in the grid, so some equation
    # row pair fails on every grid point, costing all u copies
    lhp = sis_to_lhp(ssat_to_sis(ssat_cyc), u_param=7)
    result = solve_lhp_min(lhp)
    assert result.min_violations >= 7


def test_lhp_min_singleton_grid(ssat_share):
    lhp = sis_to_lhp(ssat_to_sis(ssat_share), u_param=10)
    point = lhp_assignment_from_sis_solution((0, 1, 0, 1))
    result = solve_lhp_min(lhp, grid=[point])
    assert result.min_violations == count_lhp_violations(lhp, point) == 2


def test_lhp_min_empty_grid(ssat_share):
    lhp = sis_to_lhp(ssat_to_sis(ssat_share), u_param=10)
    with pytest.raises(EmptyGrid):
        solve_lhp_min(lhp, grid=[])


def test_lhp_grid_matches_sis_min_when_attained(ssat_share, ssat_id2):
    for ssat in (ssat_share, ssat_id2):
        sis = ssat_to_sis(ssat)
        lhp = sis_to_lhp(sis)
        sis_result = solve_sis_min(sis, SearchBudget(coeff_box=1))
        assert all(abs(v) <= 1 for v in sis_result.witness)
        assert solve_lhp_min(lhp).min_violations == sis_result.min_l1


# ---------------------------------------------------------------------------
# cross-identities
# ---------------------------------------------------------------------------

def test_sis_min_equals_scaled_restricted_ssat_min(ssat_share, ssat_cyc):
    """SIS minimum = |tests| * min norm over consistent unit-sum super-assignments.

    Independent derivation of the right-hand side by direct enumeration.
    """
    from gapforge.oracles import enumerate_consistent_superassignments
    from gapforge.superassign import norm_l1

    for ssat in (ssat_share, ssat_cyc):
        sis = ssat_to_sis(ssat)
        best = None
        for s in enumerate_consistent_superassignments(ssat, 2):
            if any(sum(row) != 1 for row in s.weights):
                continue
            norm = norm_l1(s)
            if best is None or norm < best:
                best = norm
        sis_min = solve_sis_min(sis, SearchBudget(coeff_box=2)).min_l1
        if best is None:
            assert sis_min is None
        else:
            assert sis_min == best * len(ssat.tests)


def test_planted_generator_chain_consistency():
    spec = GenSpec(num_a=4, num_b=3, d_b=2, sigma_a_size=2, sigma_b_size=2,
                   arity_p=1, planted=True, seed=3)
    lc = gen_label_cover(spec)
    assert solve_lc_max(lc).best_fraction == 1


def test_ssat_side_condition_filters(ssat_2to1_wide):
    # not-all-zero admits a superset of the non-trivial candidates, so its
    # minimum can only be lower or equal under the same mode
    relaxed = solve_ssat_min_norm(
        ssat_2to1_wide, SearchBudget(coeff_box=1, mode="l1"), side_condition="not_all_zero"
    )
    strict = solve_ssat_min_norm(
        ssat_2to1_wide, SearchBudget(coeff_box=1, mode="l1"), side_condition="nontrivial"
    )
    assert relaxed.min_norm <= strict.min_norm
    assert relaxed.min_norm == 1  # a single unit weight is consistent here
