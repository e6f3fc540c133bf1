"""Stratified and/or trees over literal leaves: representation, parsing,
evaluation and the structural measurements used everywhere else.

A tree is either a Leaf carrying a literal, or a Node carrying a connective
("and"/"or") with an ordered tuple of >= 2 children in which no child repeats
the parent connective.  Values are immutable; every function here is pure.

Text format: parenthesised prefix, e.g. ``(or x1 (and x2 ~x1))``.  Truth
tables are bit vectors over all 2^n assignments, assignment index k giving
variable j the value of bit j-1 of k; they serialise as lowercase hex with
the most significant bit belonging to the highest assignment index.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

AND = "and"
OR = "or"

#: Largest n for which full truth tables are built by default (2^2^n functions).
MAX_TABLE_VARS = 4


class FormulaError(ValueError):
    """Base class for malformed formulas."""


class ParseError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ArityError(FormulaError):
    pass


class StratificationError(FormulaError):
    pass


class VariableRangeError(FormulaError):
    pass


@dataclass(frozen=True, slots=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise VariableRangeError(f"variable index must be >= 1, got {self.var}")

    def __str__(self) -> str:
        return ("~" if self.negated else "") + f"x{self.var}"


@dataclass(frozen=True, slots=True)
class Leaf:
    literal: Literal


@dataclass(frozen=True, slots=True)
class Node:
    op: str
    children: Tuple["AndOrTree", ...]

    def __post_init__(self):
        if self.op not in (AND, OR):
            raise FormulaError(f"unknown connective {self.op!r}")
        if len(self.children) < 2:
            raise ArityError(
                f"internal node needs >= 2 children, got {len(self.children)}"
            )
        for child in self.children:
            if isinstance(child, Node) and child.op == self.op:
                raise StratificationError(
                    f"child {self.op!r} node directly under an {self.op!r} node"
                )


AndOrTree = Union[Leaf, Node]


@dataclass(frozen=True, slots=True)
class Assignment:
    values: Tuple[bool, ...]

    @classmethod
    def from_index(cls, k: int, n: int) -> "Assignment":
        return cls(tuple(bool((k >> j) & 1) for j in range(n)))

    def to_index(self) -> int:
        k = 0
        for j, v in enumerate(self.values):
            if v:
                k |= 1 << j
        return k

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, slots=True)
class TruthTable:
    """A Boolean function of n variables as a 2^n-bit integer."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.bits < (1 << (1 << self.n)):
            raise ValueError("bit vector does not fit 2^n bits")

    @property
    def size(self) -> int:
        return 1 << self.n

    @classmethod
    def constant(cls, n: int, value: bool) -> "TruthTable":
        return cls(n, (1 << (1 << n)) - 1 if value else 0)

    @classmethod
    def of_literal(cls, literal: Literal, n: int) -> "TruthTable":
        if literal.var > n:
            raise VariableRangeError(
                f"variable x{literal.var} out of range for n={n}"
            )
        return cls(n, literal_mask(literal.var, literal.negated, n))

    @classmethod
    def from_hex(cls, text: str, n: int) -> "TruthTable":
        return cls(n, int(text, 16))

    def to_hex(self) -> str:
        digits = max(1, (1 << self.n) // 4)
        return format(self.bits, f"0{digits}x")

    def value(self, k: int) -> bool:
        return bool((self.bits >> k) & 1)

    def is_true(self) -> bool:
        return self.bits == (1 << (1 << self.n)) - 1

    def is_false(self) -> bool:
        return self.bits == 0

    def is_constant(self) -> bool:
        return self.is_true() or self.is_false()

    def negated(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ ((1 << (1 << self.n)) - 1))

    def is_literal(self) -> bool:
        return any(
            self.bits == literal_mask(v, neg, self.n)
            for v in range(1, self.n + 1)
            for neg in (False, True)
        )

    def dominates(self, other: "TruthTable") -> bool:
        """Pointwise self >= other."""
        if self.n != other.n:
            raise ValueError("mixing truth tables of different n")
        return other.bits & ~self.bits == 0

    def __and__(self, other: "TruthTable") -> "TruthTable":
        if self.n != other.n:
            raise ValueError("mixing truth tables of different n")
        return TruthTable(self.n, self.bits & other.bits)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        if self.n != other.n:
            raise ValueError("mixing truth tables of different n")
        return TruthTable(self.n, self.bits | other.bits)


def literal_mask(var: int, negated: bool, n: int) -> int:
    """Bit vector of the literal as a function of n variables."""
    if var > n:
        raise VariableRangeError(f"variable x{var} out of range for n={n}")
    mask = 0
    for k in range(1 << n):
        if ((k >> (var - 1)) & 1) ^ negated:
            mask |= 1 << k
    return mask


# ---------------------------------------------------------------------------
# parsing / serialisation
# ---------------------------------------------------------------------------


def _tokenize(text: str) -> Iterator[Tuple[str, int]]:
    i, length = 0, len(text)
    while i < length:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "()":
            yield ch, i
            i += 1
            continue
        j = i
        while j < length and not text[j].isspace() and text[j] not in "()":
            j += 1
        yield text[i:j], i
        i = j


def _parse_atom(token: str, pos: int, n: int) -> Leaf:
    body = token
    negated = False
    if body.startswith("~"):
        negated = True
        body = body[1:]
    if not body.startswith("x") or not body[1:].isdigit():
        raise ParseError(f"expected literal like 'x3' or '~x3', got {token!r}", pos)
    var = int(body[1:])
    if var < 1 or var > n:
        raise VariableRangeError(
            f"variable x{var} out of range 1..{n} (at position {pos})"
        )
    return Leaf(Literal(var, negated))


def parse_formula(text: str, n: int) -> AndOrTree:
    """Parse the canonical prefix form into a validated tree."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # stack of (op, children, open_position)
    stack: list = []
    result: Optional[AndOrTree] = None

    def emit(tree: AndOrTree, pos: int):
        nonlocal result
        if stack:
            stack[-1][1].append(tree)
        elif result is None:
            result = tree
        else:
            raise ParseError("trailing content after complete formula", pos)

    tokens = list(_tokenize(text))
    i = 0
    while i < len(tokens):
        token, pos = tokens[i]
        if token == "(":
            if i + 1 >= len(tokens):
                raise ParseError("unexpected end of input after '('", pos)
            op, op_pos = tokens[i + 1]
            if op not in (AND, OR):
                raise ParseError(f"expected 'and' or 'or', got {op!r}", op_pos)
            stack.append((op, [], pos))
            i += 2
            continue
        if token == ")":
            if not stack:
                raise ParseError("unmatched ')'", pos)
            op, children, open_pos = stack.pop()
            if len(children) < 2:
                raise ArityError(
                    f"{op!r} node with {len(children)} child(ren); arity must be >= 2 "
                    f"(at position {open_pos})"
                )
            for child in children:
                if isinstance(child, Node) and child.op == op:
                    raise StratificationError(
                        f"nested {op!r} under {op!r} violates stratification "
                        f"(at position {open_pos})"
                    )
            emit(Node(op, tuple(children)), pos)
            i += 1
            continue
        emit(_parse_atom(token, pos, n), pos)
        i += 1
    if stack:
        raise ParseError("unclosed '('", stack[-1][2])
    if result is None:
        raise ParseError("empty input", 0)
    return result


def serialize(tree: AndOrTree) -> str:
    """Canonical text form; inverse of parse_formula."""
    out: list = []
    stack: list = [tree]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Leaf):
            out.append(str(item.literal))
        else:
            out.append(f"({item.op}")
            stack.append(")")
            for child in reversed(item.children):
                stack.append(child)
                stack.append(" ")
    return "".join(out)


def validate(tree: AndOrTree, n: int) -> None:
    """Check all structural invariants plus the variable range against n."""
    stack = [tree]
    while stack:
        t = stack.pop()
        if isinstance(t, Leaf):
            if t.literal.var > n:
                raise VariableRangeError(
                    f"variable x{t.literal.var} out of range for n={n}"
                )
        else:
            # Node.__post_init__ already enforced arity and stratification
            stack.extend(t.children)


# ---------------------------------------------------------------------------
# measurements
# ---------------------------------------------------------------------------


def tree_size(tree: AndOrTree) -> int:
    """Total node count, internal nodes plus leaves."""
    count = 0
    stack = [tree]
    while stack:
        t = stack.pop()
        count += 1
        if isinstance(t, Node):
            stack.extend(t.children)
    return count


def internal_count(tree: AndOrTree) -> int:
    count = 0
    stack = [tree]
    while stack:
        t = stack.pop()
        if isinstance(t, Node):
            count += 1
            stack.extend(t.children)
    return count


def expansion_slots(tree: AndOrTree) -> int:
    """Number of child positions where a new subtree could be grafted.

    Equals internal_count + tree_size - 1; defined as 0 for a bare leaf,
    which has no internal node to graft under.
    """
    if isinstance(tree, Leaf):
        return 0
    return internal_count(tree) + tree_size(tree) - 1


def first_level_leaf_count(tree: AndOrTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return sum(1 for c in tree.children if isinstance(c, Leaf))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def truth_table(tree: AndOrTree, n: int, max_vars: int = MAX_TABLE_VARS) -> TruthTable:
    """Bit-parallel evaluation over all 2^n assignments."""
    if n > max_vars:
        raise ValueError(
            f"truth tables limited to n <= {max_vars} (asked for n={n}); "
            "raise max_vars explicitly if you mean it"
        )
    full = (1 << (1 << n)) - 1
    # post-order over an explicit stack; masks combined bitwise
    out = {}
    stack = [(tree, False)]
    while stack:
        t, expanded = stack.pop()
        if isinstance(t, Leaf):
            out[id(t)] = literal_mask(t.literal.var, t.literal.negated, n)
            continue
        if not expanded:
            stack.append((t, True))
            stack.extend((c, False) for c in t.children)
            continue
        if t.op == AND:
            mask = full
            for c in t.children:
                mask &= out[id(c)]
        else:
            mask = 0
            for c in t.children:
                mask |= out[id(c)]
        out[id(t)] = mask
    return TruthTable(n, out[id(tree)])


def evaluate(tree: AndOrTree, assignment: Union[Assignment, int]) -> bool:
    """Evaluate under one assignment (bit j-1 of an int index = variable j).

    Iterative with short-circuiting, so arbitrarily deep sampled trees are fine.
    """
    bits = assignment.to_index() if isinstance(assignment, Assignment) else assignment
    stack = [(tree, 0)]
    result = False
    while stack:
        node, idx = stack.pop()
        if isinstance(node, Leaf):
            result = bool((bits >> (node.literal.var - 1)) & 1) ^ node.literal.negated
            continue
        if idx:
            # `result` holds the value of child idx-1
            if (node.op == AND and not result) or (node.op == OR and result):
                continue  # short-circuit, result stands for the whole node
            if idx == len(node.children):
                continue  # last child's value is the node's value
        stack.append((node, idx + 1))
        stack.append((node.children[idx], 0))
    return result


# ---------------------------------------------------------------------------
# tautology machinery
# ---------------------------------------------------------------------------


class SearchBudgetError(RuntimeError):
    pass


def _force_search(tree: AndOrTree, n: int, target: bool, budget: int) -> Optional[dict]:
    """Find an assignment making `tree` evaluate to `target`, or None.

    Complete backtracking over partial assignments; literal children are
    forced before internal children so conflicts surface early.
    """
    import sys

    needed = 4 * tree_size(tree) + 2000  # generator chains grow with tree size
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)
    assign: dict = {}
    calls = [0]

    def seek(node: AndOrTree, want: bool) -> Iterator[None]:
        calls[0] += 1
        if calls[0] > budget:
            raise SearchBudgetError(
                f"constant-function search exceeded budget {budget}"
            )
        if isinstance(node, Leaf):
            need = want ^ node.literal.negated
            var = node.literal.var
            if var in assign:
                if assign[var] == need:
                    yield
                return
            assign[var] = need
            yield
            del assign[var]
            return
        decomposing = (node.op == AND and not want) or (node.op == OR and want)
        if decomposing:
            # one child suffices
            for child in node.children:
                yield from seek(child, want)
            return
        # all children must take the wanted value
        ordered = sorted(node.children, key=lambda c: isinstance(c, Node))

        def conj(i: int) -> Iterator[None]:
            if i == len(ordered):
                yield
                return
            for _ in seek(ordered[i], want):
                yield from conj(i + 1)

        yield from conj(0)

    for _ in seek(tree, target):
        return dict(assign)
    return None


def is_tautology(
    tree: AndOrTree,
    n: int,
    rng: Optional[random.Random] = None,
    probes: int = 4,
    budget: int = 500_000,
) -> bool:
    """Exact check that the tree computes the constant True.

    Small n uses the full truth table.  Larger n first probes random
    assignments (cheap falsification), then runs a complete backtracking
    search for a falsifying assignment.
    """
    if n <= 13:
        return truth_table(tree, n, max_vars=13).is_true()
    rng = rng or random.Random(0x5EED)
    for _ in range(probes):
        if not evaluate(tree, rng.getrandbits(n)):
            return False
    return _force_search(tree, n, False, budget) is None


def is_contradiction(
    tree: AndOrTree,
    n: int,
    rng: Optional[random.Random] = None,
    probes: int = 4,
    budget: int = 500_000,
) -> bool:
    if n <= 13:
        return truth_table(tree, n, max_vars=13).is_false()
    rng = rng or random.Random(0x5EED)
    for _ in range(probes):
        if evaluate(tree, rng.getrandbits(n)):
            return False
    return _force_search(tree, n, True, budget) is None


# ---------------------------------------------------------------------------
# shape detectors
# ---------------------------------------------------------------------------


def is_simple_tautology(tree: AndOrTree) -> bool:
    """Or-rooted with some variable appearing both plain and negated at depth 1."""
    return _simple_clash(tree, OR)


def is_simple_contradiction(tree: AndOrTree) -> bool:
    return _simple_clash(tree, AND)


def _simple_clash(tree: AndOrTree, root_op: str) -> bool:
    if not isinstance(tree, Node) or tree.op != root_op:
        return False
    seen = set()
    for child in tree.children:
        if isinstance(child, Leaf):
            lit = child.literal
            if (lit.var, not lit.negated) in seen:
                return True
            seen.add((lit.var, lit.negated))
    return False


def is_simple_x_tree(tree: AndOrTree, n: int) -> Optional[Literal]:
    """Detect the two-child shape: one literal leaf plus one constant subtree.

    The constant must be the identity of the root connective, so the whole
    tree computes exactly the leaf literal: an or-root needs a contradiction
    subtree, an and-root a tautology subtree.  Returns the literal, or None.
    """
    if not isinstance(tree, Node) or len(tree.children) != 2:
        return None
    leaves = [c for c in tree.children if isinstance(c, Leaf)]
    nodes = [c for c in tree.children if isinstance(c, Node)]
    if len(leaves) != 1 or len(nodes) != 1:
        return None
    table = truth_table(nodes[0], n)
    if tree.op == OR and table.is_false():
        return leaves[0].literal
    if tree.op == AND and table.is_true():
        return leaves[0].literal
    return None


# ---------------------------------------------------------------------------
# misc constructors used by tests and the sampler
# ---------------------------------------------------------------------------


def all_leaves(n: int) -> Iterator[Leaf]:
    for var, negated in itertools.product(range(1, n + 1), (False, True)):
        yield Leaf(Literal(var, negated))
