"""Exact finite-size distribution over Boolean functions.

Per size m and function f we count, with exact big integers, the trees of
size m computing f, split by root connective.  The recurrence follows the
grammar: a root of one connective takes an ordered sequence (length >= 2) of
opposite-rooted subtrees, the function combining by AND (resp. OR) along the
sequence.

The sequence state is (root connective, size, function, one-vs-more flag) as
counts; to keep the per-size step quasi-linear in the number of functions the
whole sequence DP runs in zeta-transform space: AND-convolutions of function
tables diagonalise under superset sums, OR-convolutions under subset sums, so
sequence extension is a pointwise product per transformed mask.  Layers are
inverse-transformed once per size.  Counts are validated against brute-force
enumeration in the tests.
"""

from __future__ import annotations

import os
import pickle
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .counting import series
from .formula import TruthTable, literal_mask

#: full per-function sweeps default to n <= 3; n = 4 works but is slow.
MAX_SWEEP_VARS = 3
HARD_MAX_VARS = 4

CACHE_ENV_VAR = "ANDORTREES_CACHE_DIR"


class DistributionError(RuntimeError):
    pass


@dataclass(frozen=True)
class CountTable:
    """Exact per-function counts of size-m trees, split by root connective.

    and_rooted[f] / or_rooted[f] are indexed by the truth-table bit mask;
    single leaves appear in both (a leaf is a degenerate tree of either root
    type in the grammar), so the total count of trees computing f is
    and_rooted[f] + or_rooted[f] minus the double-counted leaf at m = 1.
    """

    n: int
    m: int
    and_rooted: Tuple[int, ...]
    or_rooted: Tuple[int, ...]

    def total(self, mask: int) -> int:
        value = self.and_rooted[mask] + self.or_rooted[mask]
        if self.m == 1 and self.and_rooted[mask]:
            value -= self.and_rooted[mask]  # leaf counted once, not twice
        return value


@dataclass(frozen=True)
class Distribution:
    n: int
    m: int
    probabilities: Dict[int, Fraction]  # mask -> exact probability


@dataclass(frozen=True)
class LimitReport:
    n: int
    f_hex: str
    M: int
    estimate: float
    converged: bool
    odd_tail: float
    even_tail: float
    tol: float
    window: int


# ---------------------------------------------------------------------------
# subset/superset zeta transforms over the function lattice
# ---------------------------------------------------------------------------


def _zeta_superset(v: List[int], bits: int) -> List[int]:
    v = v[:]
    for b in range(bits):
        bit = 1 << b
        for mask in range(len(v)):
            if not mask & bit:
                v[mask] += v[mask | bit]
    return v


def _mobius_superset(v: List[int], bits: int) -> List[int]:
    v = v[:]
    for b in range(bits):
        bit = 1 << b
        for mask in range(len(v)):
            if not mask & bit:
                v[mask] -= v[mask | bit]
    return v


def _zeta_subset(v: List[int], bits: int) -> List[int]:
    v = v[:]
    for b in range(bits):
        bit = 1 << b
        for mask in range(len(v)):
            if mask & bit:
                v[mask] += v[mask ^ bit]
    return v


def _mobius_subset(v: List[int], bits: int) -> List[int]:
    v = v[:]
    for b in range(bits):
        bit = 1 << b
        for mask in range(len(v)):
            if mask & bit:
                v[mask] -= v[mask ^ bit]
    return v


# ---------------------------------------------------------------------------
# the per-(n, duality) engine, grown one size layer at a time
# ---------------------------------------------------------------------------


class _Engine:
    def __init__(self, n: int, use_duality: bool):
        self.n = n
        self.use_duality = use_duality
        self.bits = 1 << n
        self.space = 1 << self.bits
        self.full = self.space - 1
        self.max_size = 0
        self.and_layers: List[Optional[List[int]]] = [None]
        self.or_layers: List[Optional[List[int]]] = [None]
        # zeta-space children series X and sequence-of->=2 series Q, per mask,
        # for each root type that is actually computed
        self._XA: Optional[List[List[int]]] = None
        self._QA: Optional[List[List[int]]] = None
        self._XO: List[List[int]] = [[] for _ in range(self.space)]
        self._QO: List[List[int]] = [[] for _ in range(self.space)]
        if not use_duality:
            self._XA = [[] for _ in range(self.space)]
            self._QA = [[] for _ in range(self.space)]
        for row in self._XO:
            row.append(0)
        for row in self._QO:
            row.append(0)
        if self._XA is not None:
            for row in self._XA:
                row.append(0)
            for row in self._QA:
                row.append(0)
        self._leaf_layer = [0] * self.space
        for var in range(1, n + 1):
            for neg in (False, True):
                self._leaf_layer[literal_mask(var, neg, n)] = 1
        self._complement_perm = [self.full ^ mask for mask in range(self.space)]

    def extend(self, max_size: int) -> None:
        for m in range(self.max_size + 1, max_size + 1):
            self._add_layer(m)
        self.max_size = max(self.max_size, max_size)

    def _add_layer(self, m: int) -> None:
        bits, space = self.bits, self.space
        if m == 1:
            or_layer = self._leaf_layer[:]
        else:
            or_layer = _mobius_subset([self._QO[h][m - 1] for h in range(space)], bits)
        if self.use_duality:
            # an and-rooted tree computing f maps to an or-rooted tree
            # computing not-f by swapping connectives and negating leaves
            and_layer = [or_layer[self._complement_perm[mask]] for mask in range(space)]
        elif m == 1:
            and_layer = self._leaf_layer[:]
        else:
            and_layer = _mobius_superset(
                [self._QA[h][m - 1] for h in range(space)], bits
            )
        self.and_layers.append(and_layer)
        self.or_layers.append(or_layer)

        # children of an or-root are and-rooted trees (or leaves): subset space
        zo = _zeta_subset(and_layer, bits)
        for h in range(space):
            XOh, QOh = self._XO[h], self._QO[h]
            XOh.append(zo[h])
            acc = 0
            for i in range(1, m):
                acc += (XOh[i] + QOh[i]) * XOh[m - i]
            QOh.append(acc)
        if self._XA is not None:
            za = _zeta_superset(or_layer, bits)
            for h in range(space):
                XAh, QAh = self._XA[h], self._QA[h]
                XAh.append(za[h])
                acc = 0
                for i in range(1, m):
                    acc += (XAh[i] + QAh[i]) * XAh[m - i]
                QAh.append(acc)


_engines: Dict[Tuple[int, bool], _Engine] = {}
_engine_lock = threading.Lock()


def _cache_path(n: int, use_duality: bool) -> Optional[str]:
    root = os.environ.get(CACHE_ENV_VAR)
    if not root:
        return None
    return os.path.join(root, f"dist_n{n}_{'dual' if use_duality else 'indep'}.pkl")


def _get_engine(n: int, use_duality: Optional[bool], max_size: int) -> _Engine:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > HARD_MAX_VARS:
        raise DistributionError(
            f"function sweeps are limited to n <= {HARD_MAX_VARS}"
        )
    if n > MAX_SWEEP_VARS:
        warnings.warn(
            f"n={n} sweeps 2^{1 << n} functions per size; this is slow",
            RuntimeWarning,
            stacklevel=3,
        )
    if use_duality is None:
        use_duality = n > MAX_SWEEP_VARS
    key = (n, use_duality)
    with _engine_lock:
        engine = _engines.get(key)
        if engine is None:
            engine = _load_cached(n, use_duality) or _Engine(n, use_duality)
            _engines[key] = engine
        if engine.max_size < max_size:
            engine.extend(max_size)
            _store_cached(engine)
    return engine


def _load_cached(n: int, use_duality: bool) -> Optional[_Engine]:
    path = _cache_path(n, use_duality)
    if not path or not os.path.exists(path):
        return None
    try:
        with open(path, "rb") as fh:
            return pickle.load(fh)
    except Exception:  # corrupted cache: recompute
        return None


def _store_cached(engine: _Engine) -> None:
    path = _cache_path(engine.n, engine.use_duality)
    if not path:
        return
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        pickle.dump(engine, fh)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def function_counts(
    m: int, n: int, use_duality: Optional[bool] = None
) -> CountTable:
    """Exact counts of size-m trees per Boolean function, split by root type."""
    if m < 1:
        raise ValueError("m must be >= 1")
    engine = _get_engine(n, use_duality, m)
    return CountTable(
        n=n,
        m=m,
        and_rooted=tuple(engine.and_layers[m]),
        or_rooted=tuple(engine.or_layers[m]),
    )


def exact_distribution(m: int, n: int) -> Distribution:
    table = function_counts(m, n)
    total = series(n, m).a_total[m]
    if total == 0:
        raise DistributionError(f"empty size class: no trees of size {m}")
    probs = {
        mask: Fraction(table.total(mask), total)
        for mask in range(1 << (1 << n))
        if table.total(mask)
    }
    return Distribution(n=n, m=m, probabilities=probs)


def prob(m: int, n: int, f: TruthTable) -> Fraction:
    """Exact probability that a uniform size-m tree computes f."""
    if f.n != n:
        raise ValueError("truth table n does not match")
    total = series(n, max(m, 1)).a_total[m]
    if total == 0:
        raise DistributionError(f"empty size class: no trees of size {m}")
    table = function_counts(m, n)
    return Fraction(table.total(f.bits), total)


def prob_ge(m: int, n: int, f0: TruthTable) -> Fraction:
    """Probability mass of functions pointwise >= f0 (f0 non-constant)."""
    if f0.is_constant():
        raise ValueError("f0 must be non-constant")
    if f0.n != n:
        raise ValueError("truth table n does not match")
    total = series(n, m).a_total[m]
    if total == 0:
        raise DistributionError(f"empty size class: no trees of size {m}")
    table = function_counts(m, n)
    full = (1 << (1 << n)) - 1
    free = full ^ f0.bits
    # enumerate all supersets of f0.bits
    count = 0
    sub = free
    while True:
        count += table.total(f0.bits | sub)
        if sub == 0:
            break
        sub = (sub - 1) & free
    return Fraction(count, total)


def tautology_count(m: int, n: int) -> int:
    """Number of size-m trees computing the constant True (any root)."""
    table = function_counts(m, n)
    return table.total((1 << (1 << n)) - 1)


def limit_estimate(
    n: int,
    f: TruthTable,
    M: int = 60,
    tol: float = 1e-4,
    window: int = 10,
) -> LimitReport:
    """Tail-averaged estimate of the limiting probability of f.

    Sizes in [M-window, M] are split by parity before averaging because
    square-root-singularity series often oscillate between parities; the
    convergence flag records whether the two parity means agree within tol.
    Non-convergence is reported, never raised.
    """
    if M < 10:
        raise ValueError("M must be >= 10")
    if f.n != n:
        raise ValueError("truth table n does not match")
    engine = _get_engine(n, None, M)
    totals = series(n, M).a_total
    odd, even = [], []
    for m in range(M - window, M + 1):
        if totals[m] == 0:
            continue
        table_and = engine.and_layers[m]
        table_or = engine.or_layers[m]
        count = table_and[f.bits] + table_or[f.bits]
        if m == 1 and table_and[f.bits]:
            count -= table_and[f.bits]
        value = count / totals[m]
        (odd if m % 2 else even).append(value)
    odd_tail = sum(odd) / len(odd) if odd else float("nan")
    even_tail = sum(even) / len(even) if even else float("nan")
    estimate = (odd_tail + even_tail) / 2
    converged = bool(
        odd and even and abs(odd_tail - even_tail) <= tol
    )
    return LimitReport(
        n=n,
        f_hex=f.to_hex(),
        M=M,
        estimate=estimate,
        converged=converged,
        odd_tail=odd_tail,
        even_tail=even_tail,
        tol=tol,
        window=window,
    )
