import pytest

from andortrees.complexity import (
    B_EXPANSION,
    CONTRADICTION_EXPANSION,
    TAUTOLOGY_EXPANSION,
    ComplexityBudgetError,
    ExpansionStep,
    complexity,
    expand,
    expansion_count,
    full_table,
    is_valid_expansion,
    minimal_trees,
    reduce_irreducible,
    slots_and_bounds,
)
from andortrees.counting import brute_enumerate
from andortrees.distribution import function_counts, tautology_count
from andortrees.formula import (
    Literal,
    StratificationError,
    TruthTable,
    literal_mask,
    parse_formula,
    serialize,
    tree_size,
    truth_table,
)
from andortrees.sampler import sample_many

XOR = TruthTable(2, 0b0110)
CONJ = TruthTable(2, literal_mask(1, False, 2) & literal_mask(2, False, 2))


def test_constants_and_literals():
    rec = complexity(TruthTable.constant(2, True), 2)
    assert rec.L == 0 and rec.m_f is None and rec.witnesses is None
    rec = complexity(TruthTable.of_literal(Literal(1), 2), 2)
    assert rec.L == 2 and rec.m_f == 2 and rec.witnesses is None


def test_xor_has_complexity_seven():
    rec = complexity(XOR, 2)
    assert rec.L == 7
    assert rec.m_f == 16
    for w in rec.witnesses:
        assert tree_size(w) == 7
        assert truth_table(w, 2) == XOR


def test_minimal_trees_of_conjunction():
    trees = minimal_trees(CONJ, 2)
    assert sorted(serialize(t) for t in trees) == ["(and x1 x2)", "(and x2 x1)"]


def test_minimal_trees_by_duality():
    disj = TruthTable(2, literal_mask(1, False, 2) | literal_mask(2, False, 2))
    assert complexity(disj, 2).m_f == complexity(CONJ, 2).m_f == 2


def test_duality_preserves_complexity():
    # swap connectives + negate leaves maps f to not-f, preserving size
    table = full_table(2)
    by_bits = {rec.f.bits: rec for rec in table}
    for bits, rec in by_bits.items():
        assert rec.L == by_bits[bits ^ 0b1111].L


def test_budget_error_message():
    with pytest.raises(ComplexityBudgetError, match=r"unknown, L\(f\) > 5"):
        complexity(XOR, 2, budget=5)


def test_minimal_trees_raises_for_literals():
    with pytest.raises(ValueError):
        minimal_trees(TruthTable.of_literal(Literal(1), 2), 2)


# -- expansions -----------------------------------------------------------------


def test_tautology_expansion_is_valid():
    base = parse_formula("(and x1 x3)", 3)
    step = ExpansionStep((), 1, parse_formula("(or x2 ~x2)", 3), TAUTOLOGY_EXPANSION)
    assert is_valid_expansion(base, step, 3)
    grown = expand(base, step)
    assert serialize(grown) == "(and x1 (or x2 ~x2) x3)"


def test_expansion_step_rejects_leaf_b_expansion():
    with pytest.raises(ValueError):
        ExpansionStep((), 0, parse_formula("x2", 3), B_EXPANSION)


def test_expand_rejects_stratification_breach():
    base = parse_formula("(and x1 x3)", 3)
    with pytest.raises(StratificationError):
        expand(base, ExpansionStep((), 0, parse_formula("(and x2 ~x2)", 3)))


def test_expand_rejects_bad_paths():
    base = parse_formula("(and x1 x3)", 3)
    insert = parse_formula("(or x2 ~x2)", 3)
    with pytest.raises(ValueError):
        expand(base, ExpansionStep((0,), 0, insert))  # a leaf, not internal
    with pytest.raises(ValueError):
        expand(base, ExpansionStep((5,), 0, insert))
    with pytest.raises(ValueError):
        expand(base, ExpansionStep((), 7, insert))


def test_function_changing_insert_is_invalid():
    base = parse_formula("(and x1 x3)", 3)
    step = ExpansionStep((), 1, parse_formula("(or x2 x2)", 3), B_EXPANSION)
    assert not is_valid_expansion(base, step, 3)


def test_contradiction_expansion_host_kind():
    base = parse_formula("(or x1 x3)", 3)
    good = ExpansionStep((), 0, parse_formula("(and x2 ~x2)", 3), CONTRADICTION_EXPANSION)
    assert is_valid_expansion(base, good, 3)
    with pytest.raises(ValueError):
        expand(base, ExpansionStep((), 0, parse_formula("(and x2 ~x2)", 3), TAUTOLOGY_EXPANSION))


# -- slots ------------------------------------------------------------------------


def test_slots_and_bounds_example():
    result = slots_and_bounds(parse_formula("(and x1 x2)", 2), 2)
    assert result == {"P_t": 3, "L": 3, "check": True}


def test_slots_refuses_non_minimal():
    big = parse_formula("(and x1 x2 (or x3 ~x3))", 3)
    with pytest.raises(ValueError):
        slots_and_bounds(big, 3)


def test_all_minimal_trees_respect_slot_bounds():
    for rec in full_table(2):
        if not rec.witnesses:
            continue
        for tree in rec.witnesses:
            out = slots_and_bounds(tree, 2)
            assert out["check"]
            assert out["L"] <= out["P_t"] <= (3 * out["L"]) // 2


# -- irreducibility -----------------------------------------------------------------


def test_reduce_single_expansion():
    tree = parse_formula("(and x1 x2 (or x3 ~x3))", 3)
    reduced, trace = reduce_irreducible(tree, 3)
    assert serialize(reduced) == "(and x1 x2)"
    assert [serialize(t) for t in trace] == ["(or x3 ~x3)"]


def test_reduce_minimal_tree_is_identity():
    tree = parse_formula("(and x1 x2)", 2)
    reduced, trace = reduce_irreducible(tree, 2)
    assert reduced == tree and trace == []


def test_reduce_collapses_hosts():
    tree = parse_formula("(and (or x1 ~x1) (or x2 x3))", 3)
    reduced, _ = reduce_irreducible(tree, 3)
    assert serialize(reduced) == "(or x2 x3)"
    # splice into the parent when the host sits below the root
    tree2 = parse_formula("(or x1 (and (or x2 x3) (or x1 ~x1)))", 3)
    reduced2, _ = reduce_irreducible(tree2, 3)
    assert serialize(reduced2) == "(or x1 x2 x3)"


def test_reduce_preserves_function_and_is_idempotent():
    for m in (9, 15, 23):
        for tree in sample_many(m, 2, 350, seed=777 + m):
            reduced, trace = reduce_irreducible(tree, 2)
            assert truth_table(reduced, 2) == truth_table(tree, 2)
            again, trace2 = reduce_irreducible(reduced, 2)
            assert again == reduced
            assert trace2 == []
            # each removal drops the subtree; a collapse can also dissolve the
            # host and the surviving child's root (splice into the parent)
            removed = sum(tree_size(t) for t in trace)
            assert tree_size(reduced) + removed <= m
            assert tree_size(reduced) + removed + 2 * len(trace) >= m


# -- expansion counting ----------------------------------------------------------------


def test_expansion_count_no_room():
    assert expansion_count(CONJ, 2, 3) == 0
    assert expansion_count(CONJ, 2, 5) == 0  # no constant subtree of size 2


def test_expansion_count_at_size_six():
    assert expansion_count(CONJ, 2, 6) == 24


def test_expansion_count_matches_reduction_census():
    # size-6 trees computing x1 and x2 that reduce to a minimal tree are
    # exactly the single expansions of the two minimal trees
    m = 6
    census = 0
    for tree in brute_enumerate(m, 2):
        if truth_table(tree, 2) != CONJ:
            continue
        reduced, _ = reduce_irreducible(tree, 2)
        if tree_size(reduced) == 3:
            census += 1
    assert census == expansion_count(CONJ, 2, m)


def test_expansion_upper_bound():
    for f in (CONJ, TruthTable(2, 0b0111)):
        rec = complexity(f, 2)
        for m in range(rec.L + 3, 10):
            count = expansion_count(f, 2, m)
            cap = rec.m_f * ((3 * rec.L) // 2) * tautology_count(m - rec.L, 2)
            assert count <= cap


def test_expansion_lower_bound_sandwich():
    # every single expansion computes f, so the census of trees computing f
    # dominates the expansion count
    for bits in range(16):
        f = TruthTable(2, bits)
        if f.is_constant() or f.is_literal():
            continue
        rec = complexity(f, 2)
        if not 3 <= rec.L <= 5:
            continue
        for m in range(rec.L + 3, 10):
            table = function_counts(m, 2)
            assert table.total(bits) >= expansion_count(f, 2, m)
