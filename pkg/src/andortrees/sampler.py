"""Exact-size uniform sampling of trees and Monte Carlo statistics.

Sampling uses the recursive method over exact big-integer counts: the root
connective is a fair coin (counts are symmetric under the and/or swap), the
child-size sequence is drawn from exact sequence-count tables, and children
recurse with the opposite connective.  Every size-m tree gets probability
exactly 1/(number of size-m trees).

Size splits for small totals use precomputed cumulative tables and binary
search.  Large totals walk the split weights from both ends (the split law
puts its mass near 1 and near T-1) with scaled double accumulators and a
certified margin; any draw landing inside the margin is resolved with exact
integers, so float shortcuts never change the sampled distribution.
"""

from __future__ import annotations

import bisect
import math
import random
import sys
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import mpmath as mp

from .counting import sequence_tables, series
from .formula import (
    AND,
    OR,
    AndOrTree,
    Leaf,
    Literal,
    Node,
    TruthTable,
    first_level_leaf_count,
    is_simple_tautology,
    is_tautology,
    truth_table,
)

Z95 = 1.959964  # two-sided 95% normal quantile


class SamplerError(RuntimeError):
    pass


def _frexp_big(x) -> Tuple[float, int]:
    """frexp for arbitrarily large integers: x ~= mant * 2^exp, mant in [0.5, 1)."""
    x = int(x)
    if x == 0:
        return 0.0, 0
    bits = x.bit_length()
    excess = bits - 53
    if excess > 0:
        return math.ldexp(x >> excess, -53), bits
    return math.ldexp(x, -bits), bits


def _scaled_float(x, shift: int) -> float:
    """float(x / 2^shift) without overflow for huge x."""
    mant, exp = _frexp_big(x)
    return math.ldexp(mant, exp - shift)


@dataclass(frozen=True)
class StatResult:
    estimate: Optional[float]
    stderr: Optional[float]
    ci95: Optional[Tuple[float, float]]
    extra: Dict[str, object] = field(default_factory=dict)


@dataclass(frozen=True)
class McReport:
    m: int
    n: int
    trials: int
    seed: int
    generator: str
    stats: Dict[str, StatResult]


def _frequency_stat(hits: int, trials: int, **extra) -> StatResult:
    p = hits / trials
    se = math.sqrt(p * (1 - p) / trials)
    return StatResult(
        estimate=p, stderr=se, ci95=(p - Z95 * se, p + Z95 * se), extra=dict(extra)
    )


class SamplerContext:
    """Immutable-after-build sampling tables for one (n, max_size)."""

    #: totals at or below this use exact cumulative tables + binary search
    BISECT_CUTOFF = 256
    #: certified relative margin of the float walk; accumulated float error is
    #: bounded by atoms * 2^-52 << band, so comparisons outside the band are
    #: provably correct and draws inside it fall back to exact integers
    _WALK_BAND = 2.0 ** -28

    def __init__(self, n: int, max_size: int):
        if n < 1 or max_size < 1:
            raise ValueError("need n >= 1 and max_size >= 1")
        self.n = n
        self.max_size = max_size
        self.counts = series(n, max_size)
        a, r, q = sequence_tables(n, max_size)
        self._a, self._r, self._q = a, r, q
        # (mantissa, exponent) pairs: x ~= mant * 2^exp with mant in [0.5, 1)
        self._af = [_frexp_big(x) for x in a]
        self._rf = [_frexp_big(x) for x in r]
        cutoff = min(self.BISECT_CUTOFF, max_size)
        # cumulative weights along the same interleaved atom order the float
        # walk uses, so both code paths are pointwise identical inverse maps
        self._cum_first: List[Optional[List[int]]] = [None] * (cutoff + 1)
        self._cum_rest: List[Optional[List[int]]] = [None] * (cutoff + 1)
        for total in range(1, cutoff + 1):
            acc, out = 0, []
            for s in self._interleaved(total):
                acc += a[s] * r[total - s]
                out.append(acc)
            if total >= 2:
                self._cum_first[total] = out
            # >= 1 sequences: atom 0 = stop (one tree of size `total`)
            self._cum_rest[total] = [a[total]] + [a[total] + c for c in out]
        needed = 4 * max_size + 2000
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    # -- split draws ---------------------------------------------------

    @staticmethod
    def _interleaved(total: int) -> Iterable[int]:
        """Sizes 1, total-1, 2, total-2, ... covering 1..total-1 once each."""
        lo, hi = 1, total - 1
        while lo <= hi:
            yield lo
            if hi != lo:
                yield hi
            lo += 1
            hi -= 1

    @staticmethod
    def _atom_at(index: int, total: int) -> int:
        """index-th entry of the interleaved order, in O(1)."""
        return index // 2 + 1 if index % 2 == 0 else total - 1 - index // 2

    def _walk_split(self, total: int, draw: int, include_stop: bool) -> int:
        """Exact inverse-transform along the interleaved atom order.

        Returns 0 for the stop atom (>=1 sequences only) or the first-child
        size.  Scaled doubles decide comparisons outside the certified band;
        inside it, exact integers take over.
        """
        a, r, af, rf = self._a, self._r, self._af, self._rf
        # scale everything by 2^-shift so magnitudes sit near 1.0
        shift = (self._r[total]).bit_length()
        draw_f = _scaled_float(draw, shift)
        lo_band, hi_band = 1.0 - self._WALK_BAND, 1.0 + self._WALK_BAND
        csum = 0.0
        exact_needed = False
        order: List[int] = []
        if include_stop:
            order.append(0)
            am, ae = af[total]
            csum = math.ldexp(am, ae - shift)
            if draw_f < csum * lo_band:
                return 0
            if draw_f < csum * hi_band:
                exact_needed = True
        for s in self._interleaved(total):
            order.append(s)
            am, ae = af[s]
            rm, re = rf[total - s]
            csum += math.ldexp(am * rm, ae + re - shift)
            if exact_needed:
                continue
            if draw_f < csum * lo_band:
                return s
            if draw_f < csum * hi_band:
                exact_needed = True
        # exact replay over the same order (certified-rare path)
        if exact_needed:
            acc = 0
            for s in order:
                acc += a[total] if s == 0 else a[s] * r[total - s]
                if draw < acc:
                    return s
            raise SamplerError("exact split replay failed; tables inconsistent")
        raise SamplerError("split walk exhausted its atoms; tables inconsistent")

    def _draw_first(self, total: int, rng: random.Random) -> int:
        """First-child size of a >= 2 sequence with weights a[s]*r[total-s]."""
        draw = rng.randrange(self._q[total])
        cum = self._cum_first[total] if total < len(self._cum_first) else None
        if cum is not None:
            return self._atom_at(bisect.bisect_right(cum, draw), total)
        return self._walk_split(total, draw, include_stop=False)

    def _draw_rest(self, total: int, rng: random.Random) -> int:
        """0 to finish with one tree of size `total`, else next child size."""
        draw = rng.randrange(self._r[total])
        cum = self._cum_rest[total] if total < len(self._cum_rest) else None
        if cum is not None:
            idx = bisect.bisect_right(cum, draw)
            return 0 if idx == 0 else self._atom_at(idx - 1, total)
        return self._walk_split(total, draw, include_stop=True)

    # -- tree assembly ---------------------------------------------------

    def _sample_child(self, size: int, op: str, rng: random.Random) -> AndOrTree:
        """A uniform tree of the given size that is a leaf or op-rooted."""
        if size == 1:
            idx = rng.randrange(2 * self.n)
            return Leaf(Literal(idx // 2 + 1, bool(idx & 1)))
        child_op = OR if op == AND else AND
        sizes: List[int] = []
        remaining = size - 1
        s = self._draw_first(remaining, rng)
        sizes.append(s)
        remaining -= s
        while True:
            nxt = self._draw_rest(remaining, rng)
            if nxt == 0:
                sizes.append(remaining)
                break
            sizes.append(nxt)
            remaining -= nxt
        children = tuple(self._sample_child(sz, child_op, rng) for sz in sizes)
        return Node(op, children)

    def sample(self, m: int, rng: random.Random) -> AndOrTree:
        if m == 2:
            raise SamplerError("empty size class: no trees of size 2")
        if m < 1 or m > self.max_size:
            raise ValueError(f"m must be in 1..{self.max_size} and != 2")
        if m == 1:
            idx = rng.randrange(2 * self.n)
            return Leaf(Literal(idx // 2 + 1, bool(idx & 1)))
        op = AND if rng.randrange(2) == 0 else OR
        return self._sample_child(m, op, rng)


_contexts: Dict[Tuple[int, int], SamplerContext] = {}
_context_lock = threading.Lock()


def get_context(n: int, max_size: int) -> SamplerContext:
    """Shared context registry; contexts are immutable once built."""
    key = (n, max_size)
    with _context_lock:
        ctx = _contexts.get(key)
    if ctx is None:
        ctx = SamplerContext(n, max_size)
        with _context_lock:
            ctx = _contexts.setdefault(key, ctx)
    return ctx


def sample_uniform(m: int, n: int, seed: int) -> AndOrTree:
    """One uniform size-m tree; identical trees for identical seeds."""
    ctx = get_context(n, m)
    return ctx.sample(m, random.Random(seed))


def sample_many(m: int, n: int, count: int, seed: int) -> List[AndOrTree]:
    ctx = get_context(n, m)
    rng = random.Random(seed)
    return [ctx.sample(m, rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# Monte Carlo estimation
# ---------------------------------------------------------------------------

KNOWN_STATS = (
    "simple_tautology_rate",
    "tautology_rate",
    "first_level_leaf_histogram",
)


def gamma_two_half_cdf(x: float) -> float:
    """CDF of the Gamma(shape 2, scale 1/2) law with density 4x exp(-2x)."""
    if x <= 0:
        return 0.0
    return 1.0 - math.exp(-2.0 * x) * (1.0 + 2.0 * x)


def ks_statistic(samples: List[float], cdf) -> float:
    xs = sorted(samples)
    n = len(xs)
    worst = 0.0
    for i, x in enumerate(xs):
        c = cdf(x)
        worst = max(worst, abs(c - i / n), abs(c - (i + 1) / n))
    return worst


def ks_critical(alpha: float, n_samples: int) -> float:
    """Asymptotic Kolmogorov critical value: D such that P(sqrt(N) D_N > c) = alpha."""

    def survival(c: float) -> float:
        total = 0.0
        for k in range(1, 101):
            term = 2.0 * (-1) ** (k - 1) * math.exp(-2.0 * k * k * c * c)
            total += term
            if abs(term) < 1e-16:
                break
        return total

    lo, hi = 0.2, 4.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if survival(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2 / math.sqrt(n_samples)


def chi_square_critical(alpha: float, df: int) -> float:
    """Upper critical value of the chi-square distribution (no scipy needed)."""

    def survival(x: float) -> float:
        return float(mp.gammainc(df / 2, x / 2, mp.inf, regularized=True))

    lo, hi = 0.0, 10.0 * df + 100.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if survival(mid) > alpha:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def monte_carlo(
    m: int,
    n: int,
    trials: int,
    seed: int,
    stats: Iterable[str],
    context: Optional[SamplerContext] = None,
) -> McReport:
    """Unbiased frequency estimates over `trials` uniform size-m trees.

    stats entries: 'simple_tautology_rate', 'tautology_rate',
    'first_level_leaf_histogram', or 'function_frequency:<hex>' with the hex
    truth table of the target function.
    """
    if trials <= 0:
        raise ValueError("trials must be >= 1")
    stats = list(stats)
    function_targets: Dict[str, int] = {}
    for name in stats:
        if name.startswith("function_frequency:"):
            if n > 13:
                raise ValueError("function_frequency needs n <= 13 for truth tables")
            hex_part = name.split(":", 1)[1]
            function_targets[name] = TruthTable.from_hex(hex_part, n).bits
        elif name not in KNOWN_STATS:
            raise ValueError(f"unknown statistic {name!r}")
    ctx = context or get_context(n, m)
    rng = random.Random(seed)
    probe_rng = random.Random(f"{seed}-constant-probes")

    want_table = bool(function_targets) or (
        "tautology_rate" in stats and n <= 13
    )
    hits = {name: 0 for name in stats if name != "first_level_leaf_histogram"}
    histogram: Dict[int, int] = {}
    leaf_counts: List[int] = []
    want_hist = "first_level_leaf_histogram" in stats

    for _ in range(trials):
        tree = ctx.sample(m, rng)
        table = None
        if want_table:
            table = truth_table(tree, n, max_vars=13)
        if "simple_tautology_rate" in hits and is_simple_tautology(tree):
            hits["simple_tautology_rate"] += 1
        if "tautology_rate" in hits:
            taut = (
                table.is_true()
                if table is not None
                else is_tautology(tree, n, rng=probe_rng)
            )
            if taut:
                hits["tautology_rate"] += 1
        for name, mask in function_targets.items():
            if table.bits == mask:
                hits[name] += 1
        if want_hist:
            x = first_level_leaf_count(tree)
            leaf_counts.append(x)
            histogram[x] = histogram.get(x, 0) + 1

    out: Dict[str, StatResult] = {}
    for name, count in hits.items():
        out[name] = _frequency_stat(count, trials)
    if want_hist:
        scale = 2.0 * math.sqrt(2.0 * n)
        scaled = [x / scale for x in leaf_counts]
        ks = ks_statistic(scaled, gamma_two_half_cdf)
        mean = sum(leaf_counts) / trials
        var = sum((x - mean) ** 2 for x in leaf_counts) / max(trials - 1, 1)
        se = math.sqrt(var / trials)
        out["first_level_leaf_histogram"] = StatResult(
            estimate=None,
            stderr=None,
            ci95=None,
            extra={
                "histogram": dict(sorted(histogram.items())),
                "mean": mean,
                "mean_stderr": se,
                "ks_statistic": ks,
                "ks_critical_1pct": ks_critical(0.01, trials),
                "scale": scale,
            },
        )
    return McReport(
        m=m,
        n=n,
        trials=trials,
        seed=seed,
        generator="random.Random (Mersenne Twister)",
        stats=out,
    )
