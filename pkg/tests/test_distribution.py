import warnings
from collections import Counter
from fractions import Fraction

import pytest

from andortrees.counting import brute_enumerate, series
from andortrees.distribution import (
    DistributionError,
    exact_distribution,
    function_counts,
    limit_estimate,
    prob,
    prob_ge,
    tautology_count,
)
from andortrees.formula import (
    AND,
    Leaf,
    Literal,
    TruthTable,
    literal_mask,
    truth_table,
)


def lit_table(var, n, neg=False):
    return TruthTable.of_literal(Literal(var, neg), n)


def test_single_leaves():
    table = function_counts(1, 1)
    for f in (lit_table(1, 1), lit_table(1, 1, True)):
        assert table.and_rooted[f.bits] == 1
        assert table.or_rooted[f.bits] == 1
        assert table.total(f.bits) == 1  # one leaf, not two


def test_size_three_one_variable():
    table = function_counts(3, 1)
    true_bits = TruthTable.constant(1, True).bits
    assert table.or_rooted[true_bits] == 2
    assert table.and_rooted[true_bits] == 0
    assert prob(3, 1, lit_table(1, 1)) == Fraction(1, 4)
    assert prob(3, 1, TruthTable.constant(1, True)) == Fraction(1, 4)


def test_empty_size_class():
    with pytest.raises(DistributionError, match="empty size class"):
        prob(2, 1, lit_table(1, 1))


def test_mass_conservation():
    for n in (1, 2):
        for m in (1, 3, 5, 8, 13):
            dist = exact_distribution(m, n)
            assert sum(dist.probabilities.values()) == 1


def test_rooted_sums_match_series():
    for n in (1, 2):
        cs = series(n, 10)
        for m in range(1, 11):
            table = function_counts(m, n)
            assert sum(table.and_rooted) == cs.a_hat[m]
            assert sum(table.or_rooted) == cs.a_hat[m]


def test_counts_match_brute_enumeration_by_root():
    for n in (1, 2):
        for m in range(1, 9):
            and_seen = Counter()
            or_seen = Counter()
            for tree in brute_enumerate(m, n):
                bits = truth_table(tree, n).bits
                if isinstance(tree, Leaf):
                    and_seen[bits] += 1
                    or_seen[bits] += 1
                elif tree.op == AND:
                    and_seen[bits] += 1
                else:
                    or_seen[bits] += 1
            table = function_counts(m, n)
            for bits in range(1 << (1 << n)):
                assert table.and_rooted[bits] == and_seen.get(bits, 0)
                assert table.or_rooted[bits] == or_seen.get(bits, 0)


def test_duality_complement_map():
    # swapping connectives and negating leaves sends or-rooted trees
    # computing f to and-rooted trees computing not-f
    for n in (1, 2):
        full = (1 << (1 << n)) - 1
        for m in (3, 5, 8):
            table = function_counts(m, n)
            for bits in range(full + 1):
                assert table.or_rooted[bits] == table.and_rooted[bits ^ full]


def test_leaf_negation_map():
    # negating every leaf maps and-rooted trees computing f(x) to and-rooted
    # trees computing f(not x): permute assignments by complementation
    for n in (1, 2):
        size = 1 << n
        full = (1 << size) - 1
        for m in (3, 6):
            table = function_counts(m, n)
            for bits in range(full + 1):
                permuted = 0
                for k in range(size):
                    if (bits >> k) & 1:
                        permuted |= 1 << (size - 1 - k)
                assert table.and_rooted[bits] == table.and_rooted[permuted]


def test_variable_permutation_symmetry():
    n = 2
    m = 7
    table = function_counts(m, n)
    # swap x1 and x2: assignment bits swap
    for bits in range(16):
        swapped = 0
        for k in range(4):
            ks = ((k & 1) << 1) | ((k >> 1) & 1)
            if (bits >> k) & 1:
                swapped |= 1 << ks
        assert table.total(bits) == table.total(swapped)


def test_prob_ge_single_literal():
    assert prob_ge(1, 1, lit_table(1, 1)) == Fraction(1, 2)


def test_prob_ge_dominates_true():
    for m in (3, 5, 9):
        assert prob_ge(m, 2, lit_table(1, 2)) >= prob(
            m, 2, TruthTable.constant(2, True)
        )


def test_prob_ge_matches_brute_force():
    n, m = 2, 5
    f0 = TruthTable(n, literal_mask(1, False, n) & literal_mask(2, False, n))
    count = 0
    for tree in brute_enumerate(m, n):
        g = truth_table(tree, n)
        if g.dominates(f0):
            count += 1
    assert prob_ge(m, n, f0) == Fraction(count, series(n, m).a_total[m])


def test_prob_ge_rejects_constants():
    with pytest.raises(ValueError):
        prob_ge(3, 1, TruthTable.constant(1, True))


def test_true_false_symmetry_every_size():
    for n in (1, 2, 3):
        full = (1 << (1 << n)) - 1
        for m in range(1, 41):
            table = function_counts(m, n)
            assert table.total(full) == table.total(0)


def test_literal_symmetry_under_negation():
    for m in (1, 3, 7, 12):
        assert prob(m, 1, lit_table(1, 1)) == prob(m, 1, lit_table(1, 1, True))


def test_limit_estimate_convergence():
    for n in (1, 2):
        rep = limit_estimate(n, TruthTable.constant(n, True), M=60, tol=1e-4)
        assert rep.converged
        assert 0.12 < rep.estimate < 0.5
        assert abs(rep.odd_tail - rep.even_tail) <= 1e-4


def test_limit_estimate_reports_nonconvergence():
    rep = limit_estimate(1, TruthTable.constant(1, True), M=12, tol=1e-12)
    assert not rep.converged  # never an exception


def test_limit_estimate_requires_reasonable_M():
    with pytest.raises(ValueError):
        limit_estimate(1, TruthTable.constant(1, True), M=5)


def test_tautology_count_examples():
    assert tautology_count(3, 1) == 2
    assert tautology_count(1, 1) == 0


def test_n4_warns():
    with pytest.warns(RuntimeWarning):
        function_counts(3, 4)


def test_n5_rejected():
    with pytest.raises(DistributionError):
        function_counts(3, 5)


def test_theta_trend_band():
    # prob(m, n, x1 and x2) * n^3 stays inside a fixed band across n = 2, 3, 4
    # at a fixed moderately large size; golden band recorded from this code.
    values = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for n in (2, 3, 4):
            conj = TruthTable(
                n, literal_mask(1, False, n) & literal_mask(2, False, n)
            )
            values[n] = float(prob(14, n, conj)) * n**3
    assert values[2] == pytest.approx(0.252065, rel=1e-4)
    assert values[3] == pytest.approx(0.205049, rel=1e-4)
    assert values[4] == pytest.approx(0.184253, rel=1e-4)
    assert all(0.15 <= v <= 0.30 for v in values.values())
