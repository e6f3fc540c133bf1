"""Tree-size complexity, minimal trees, expansions and irreducibility.

Complexity search is plain iterative deepening over exhaustive enumeration:
at the sizes where it is feasible (n <= 3) this is trivially correct, which
is what an oracle module needs.  Constants have complexity 0 and literal
functions complexity 2 by convention; the two size-2 "minimal trees" of a
literal are degenerate unary shapes that are not valid trees here and are
never materialised (m_f = 2 is still reported for them).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .counting import BudgetError, _enumerator, series
from .formula import (
    AND,
    OR,
    AndOrTree,
    Leaf,
    Node,
    StratificationError,
    TruthTable,
    internal_count,
    serialize,
    tree_size,
    truth_table,
)


class ComplexityBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class ComplexityRecord:
    f: TruthTable
    L: int
    m_f: Optional[int]
    witnesses: Optional[Tuple[AndOrTree, ...]]

    @property
    def is_constant(self) -> bool:
        return self.L == 0


# per-n cache of (tree, truth-table-bits) lists by size
_table_cache: Dict[int, Dict[int, List[Tuple[AndOrTree, int]]]] = {}


def _trees_with_tables(size: int, n: int) -> List[Tuple[AndOrTree, int]]:
    per_n = _table_cache.setdefault(n, {})
    hit = per_n.get(size)
    if hit is None:
        hit = per_n[size] = [
            (t, truth_table(t, n).bits) for t in _enumerator(n).all_trees(size)
        ]
    return hit


def complexity(f: TruthTable, n: int, budget: int = 9) -> ComplexityRecord:
    """Smallest tree size computing f, with all witnesses of that size.

    budget is the largest size tried; exceeding it raises with the honest
    message that only a lower bound is known.
    """
    if f.n != n:
        raise ValueError("truth table n does not match")
    if f.is_constant():
        return ComplexityRecord(f=f, L=0, m_f=None, witnesses=None)
    if f.is_literal():
        return ComplexityRecord(f=f, L=2, m_f=2, witnesses=None)
    for size in [1] + list(range(3, budget + 1)):
        hits = [t for t, bits in _trees_with_tables(size, n) if bits == f.bits]
        if hits:
            return ComplexityRecord(
                f=f, L=size, m_f=len(hits), witnesses=tuple(hits)
            )
    raise ComplexityBudgetError(f"unknown, L(f) > {budget}")


def minimal_trees(f: TruthTable, n: int, budget: int = 9) -> List[AndOrTree]:
    """All size-L(f) trees computing f; needs L(f) >= 3 (real trees exist)."""
    record = complexity(f, n, budget)
    if record.witnesses is None:
        raise ValueError(
            "constants and literal functions have no materialised minimal trees"
        )
    return list(record.witnesses)


def full_table(n: int, budget: int = 9) -> List[ComplexityRecord]:
    """ComplexityRecord for every Boolean function of n variables."""
    return [
        complexity(TruthTable(n, bits), n, budget)
        for bits in range(1 << (1 << n))
    ]


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

TAUTOLOGY_EXPANSION = "tautology-expansion"
CONTRADICTION_EXPANSION = "contradiction-expansion"
B_EXPANSION = "B-expansion"


@dataclass(frozen=True)
class ExpansionStep:
    """Insert `inserted` as a new child of the internal node at `host_path`,
    at gap `position` (0..arity) in its child list."""

    host_path: Tuple[int, ...]
    position: int
    inserted: AndOrTree
    kind: str = B_EXPANSION

    def __post_init__(self):
        if self.kind not in (TAUTOLOGY_EXPANSION, CONTRADICTION_EXPANSION, B_EXPANSION):
            raise ValueError(f"unknown expansion kind {self.kind!r}")
        if self.kind == B_EXPANSION and isinstance(self.inserted, Leaf):
            raise ValueError("B-expansions must insert a non-leaf subtree")


def _node_at(tree: AndOrTree, path: Sequence[int]) -> AndOrTree:
    node = tree
    for idx in path:
        if not isinstance(node, Node) or not 0 <= idx < len(node.children):
            raise ValueError(f"invalid host path {tuple(path)}")
        node = node.children[idx]
    return node


def _replace_at(tree: AndOrTree, path: Sequence[int], new_node: AndOrTree) -> AndOrTree:
    if not path:
        return new_node
    assert isinstance(tree, Node)
    idx = path[0]
    children = list(tree.children)
    children[idx] = _replace_at(children[idx], path[1:], new_node)
    return Node(tree.op, tuple(children))


def expand(tree: AndOrTree, step: ExpansionStep) -> AndOrTree:
    """Structurally apply the expansion; semantic validity is separate.

    Raises on invalid paths, non-internal hosts, stratification breaches and
    kind/host mismatches (a tautology expansion needs an and-labelled host,
    a contradiction expansion an or-labelled one).
    """
    host = _node_at(tree, step.host_path)
    if not isinstance(host, Node):
        raise ValueError("host path must address an internal node")
    if not 0 <= step.position <= len(host.children):
        raise ValueError(f"insert position {step.position} out of range")
    if isinstance(step.inserted, Node) and step.inserted.op == host.op:
        raise StratificationError(
            f"inserting an {step.inserted.op!r}-rooted subtree under an "
            f"{host.op!r} node breaks stratification"
        )
    if step.kind == TAUTOLOGY_EXPANSION and host.op != AND:
        raise ValueError("tautology expansions graft under and-labelled nodes")
    if step.kind == CONTRADICTION_EXPANSION and host.op != OR:
        raise ValueError("contradiction expansions graft under or-labelled nodes")
    children = list(host.children)
    children.insert(step.position, step.inserted)
    return _replace_at(tree, step.host_path, Node(host.op, tuple(children)))


def is_valid_expansion(tree: AndOrTree, step: ExpansionStep, n: int) -> bool:
    """True when the expanded tree computes the same function as the original."""
    try:
        expanded = expand(tree, step)
    except (ValueError, StratificationError):
        return False
    return truth_table(expanded, n).bits == truth_table(tree, n).bits


def slots_and_bounds(tree: AndOrTree, n: int, budget: int = 9) -> Dict[str, object]:
    """Grafting-slot count of a minimal tree and the L <= P_t <= floor(3L/2) check.

    Refuses trees that are not minimal for their own function (or whose
    function is constant/literal, where no materialised minimal tree exists).
    """
    f = truth_table(tree, n)
    record = complexity(f, n, budget)
    size = tree_size(tree)
    if record.witnesses is None or size != record.L:
        raise ValueError(
            f"tree of size {size} is not minimal for its function (L={record.L})"
        )
    slots = internal_count(tree) + size - 1
    return {
        "P_t": slots,
        "L": record.L,
        "check": record.L <= slots <= (3 * record.L) // 2,
    }


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------


def _find_removal(
    tree: AndOrTree, n: int, path: Tuple[int, ...] = ()
) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Leftmost-innermost (host path, child index) of a removable child:
    a tautology child of an and-node or a contradiction child of an or-node."""
    if isinstance(tree, Leaf):
        return None
    for idx, child in enumerate(tree.children):
        found = _find_removal(child, n, path + (idx,))
        if found is not None:
            return found
    for idx, child in enumerate(tree.children):
        if isinstance(child, Leaf):
            continue  # a single literal is never constant
        table = truth_table(child, n)
        if tree.op == AND and table.is_true():
            return path, idx
        if tree.op == OR and table.is_false():
            return path, idx
    return None


def _remove_child(tree: AndOrTree, path: Tuple[int, ...], idx: int) -> AndOrTree:
    host = _node_at(tree, path)
    assert isinstance(host, Node)
    rest = host.children[:idx] + host.children[idx + 1 :]
    if len(rest) >= 2:
        return _replace_at(tree, path, Node(host.op, rest))
    survivor = rest[0]
    if not path:
        return survivor  # root collapses to its surviving child
    # splice into the parent: a surviving internal child carries the parent's
    # connective, a surviving leaf just replaces the host
    parent_path, host_idx = path[:-1], path[-1]
    parent = _node_at(tree, parent_path)
    assert isinstance(parent, Node)
    siblings = list(parent.children)
    if isinstance(survivor, Node):
        siblings[host_idx : host_idx + 1] = list(survivor.children)
    else:
        siblings[host_idx] = survivor
    return _replace_at(tree, parent_path, Node(parent.op, tuple(siblings)))


def reduce_irreducible(
    tree: AndOrTree, n: int
) -> Tuple[AndOrTree, List[AndOrTree]]:
    """Strip function-preserving constant children until none remain.

    Removal order is leftmost-innermost and deterministic; the trace lists the
    removed subtrees in order.  The result computes the same function and
    cannot be produced by grafting a constant subtree into a smaller tree
    computing that function.
    """
    trace: List[AndOrTree] = []
    current = tree
    while True:
        found = _find_removal(current, n)
        if found is None:
            return current, trace
        path, idx = found
        host = _node_at(current, path)
        assert isinstance(host, Node)
        trace.append(host.children[idx])
        current = _remove_child(current, path, idx)


# ---------------------------------------------------------------------------
# expansion counting
# ---------------------------------------------------------------------------


def _constant_subtrees(size: int, n: int, root_op: str, value: bool) -> List[AndOrTree]:
    """All size-`size` trees rooted at `root_op` computing the given constant."""
    target = TruthTable.constant(n, value).bits
    return [
        t
        for t, bits in _trees_with_tables(size, n)
        if bits == target and isinstance(t, Node) and t.op == root_op
    ]


def expansion_count(f: TruthTable, n: int, m: int, budget: int = 9) -> int:
    """Distinct trees of size m reachable by ONE constant-subtree expansion of
    a minimal tree of f (tautology under and-hosts, contradiction under
    or-hosts), deduplicated structurally."""
    record = complexity(f, n, budget)
    if record.witnesses is None:
        raise ValueError("f must have materialised minimal trees (L >= 3)")
    insert_size = m - record.L
    if insert_size < 3:
        return 0  # no constant subtree is that small
    if series(n, insert_size).a_total[insert_size] > 2_000_000:
        raise BudgetError(f"too many insertable subtrees at size {insert_size}")
    taut = _constant_subtrees(insert_size, n, OR, True)
    contra = _constant_subtrees(insert_size, n, AND, False)
    seen = set()
    for minimal in record.witnesses:
        for path, host in _internal_nodes(minimal):
            pool = taut if host.op == AND else contra
            for position in range(len(host.children) + 1):
                for inserted in pool:
                    kind = (
                        TAUTOLOGY_EXPANSION if host.op == AND else CONTRADICTION_EXPANSION
                    )
                    step = ExpansionStep(path, position, inserted, kind)
                    seen.add(serialize(expand(minimal, step)))
    return len(seen)


def _internal_nodes(tree: AndOrTree, path: Tuple[int, ...] = ()):
    if isinstance(tree, Node):
        yield path, tree
        for idx, child in enumerate(tree.children):
            yield from _internal_nodes(child, path + (idx,))
