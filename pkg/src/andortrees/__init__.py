"""Exact and asymptotic analysis of uniform random and/or trees.

Stratified rooted plane trees with and/or-labelled internal nodes and literal
leaves induce, for each size, a distribution over Boolean functions.  This
package makes that model computable end to end: exact counting, the exact
finite-size distribution and its numerical limit, exact singularity
arithmetic with a limiting-ratio engine and family catalog, uniform sampling
with Monte Carlo statistics, tree-size complexity tables, expansion and
irreducibility tooling, and a verification harness.
"""

__version__ = "0.1.0"

from .analytic import (
    SingularPoint,
    coefficient_ratio,
    expected_first_level_leaves,
    limiting_ratio,
    nonleaf_partition_sum,
    singularity,
    tautology_bounds,
)
from .complexity import (
    ComplexityRecord,
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
from .counting import CountSeries, brute_enumerate, series
from .distribution import (
    CountTable,
    Distribution,
    LimitReport,
    exact_distribution,
    function_counts,
    limit_estimate,
    prob,
    prob_ge,
    tautology_count,
)
from .formula import (
    AND,
    OR,
    AndOrTree,
    Assignment,
    Leaf,
    Literal,
    Node,
    TruthTable,
    evaluate,
    expansion_slots,
    internal_count,
    is_simple_contradiction,
    is_simple_tautology,
    is_simple_x_tree,
    is_tautology,
    parse_formula,
    serialize,
    tree_size,
    truth_table,
)
from .quadext import QuadExt
from .sampler import McReport, SamplerContext, monte_carlo, sample_uniform

__all__ = [name for name in dir() if not name.startswith("_")]
