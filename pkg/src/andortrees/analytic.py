"""Singularity arithmetic and the limiting-ratio engine.

All generating functions of interest share one dominant square-root
singularity.  Its location and the rooted-series value there are exact
elements of Q(sqrt(2n)); the limiting ratio of a family given by a closed
form F(z, a, t) is

    1/2 * dF/da  +  tau' * dF/dt        evaluated at (radius, rooted_value),

because only derivative factors that blow up like the tree series survive
the coefficient ratio, the non-leaf and rooted series both contributing the
factor 1/2 and the tautology series contributing tau' (the limiting
probability of the constant True).

Everything is exact for t-free families; large-n sweeps and t-dependent
families switch to high-precision floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

import mpmath as mp

from . import families
from .counting import series
from .families import Expr, diff, evaluate, mentions
from .powerseries import Series
from .quadext import QuadExt


@dataclass(frozen=True)
class SingularPoint:
    """Exact data at the common dominant singularity for n variables."""

    n: int
    radius: QuadExt         # smallest positive root of (4n^2-8n)z^2 - 4nz + 1
    rooted_value: QuadExt   # value of the rooted-tree series at the radius
    nonleaf_value: QuadExt  # rooted_value - 2n*radius

    def discriminant_residual(self) -> QuadExt:
        n, r = self.n, self.radius
        return (4 * n * n - 8 * n) * r * r - 4 * n * r + 1


def singularity(n: int) -> SingularPoint:
    """radius = 1 / (2(n + sqrt(2n))); the rooted series there equals
    (2n*radius + 1) / (2(radius + 1)) since the radical term vanishes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = 2 * n
    root = QuadExt.sqrt_term(d)
    radius = QuadExt.rational(1, d) / (2 * (n + root))
    rooted = (2 * n * radius + 1) / (2 * (radius + 1))
    return SingularPoint(
        n=n,
        radius=radius,
        rooted_value=rooted,
        nonleaf_value=rooted - 2 * n * radius,
    )


# -- evaluation domains ------------------------------------------------------


def _lift_quad(d: int):
    return lambda c: QuadExt.rational(c, d)


def _lift_mpf(c):
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    return mp.mpf(c)


def _lift_series(order: int):
    return lambda c: Series.constant(c, order)


class PoleError(ZeroDivisionError):
    pass


def limiting_ratio(
    expr: Expr,
    n: int,
    env: Optional[Dict[str, float]] = None,
    mode: str = "auto",
    prec: int = 200,
    exact_threshold: int = 10_000,
) -> Union[QuadExt, mp.mpf]:
    """Limiting ratio of the family described by `expr`.

    t-free families evaluate exactly in Q(sqrt(2n)) (or in floats when n is
    large or mode='float').  Families mentioning t need env entries
    t_value (the tautology series at the radius) and tau_prime (the limiting
    probability of True).
    """
    point = singularity(n)
    uses_t = mentions(expr, "t")
    if uses_t:
        if not env or "t_value" not in env or "tau_prime" not in env:
            raise ValueError(
                "family depends on t: supply env={'t_value': ..., 'tau_prime': ...}"
            )
        mode = "float" if mode == "auto" else mode
        if mode == "exact":
            raise ValueError("t-dependent families have no exact evaluation")
    if mode == "auto":
        mode = "exact" if n <= exact_threshold else "float"

    da = diff(expr, "a")
    if mode == "exact":
        lift = _lift_quad(2 * n)
        environment: Dict[str, object] = {
            "z": point.radius,
            "a": point.rooted_value,
        }
        try:
            value = evaluate(da, environment, lift) * Fraction(1, 2)
        except ZeroDivisionError as exc:
            raise PoleError(f"family has a pole at the singular point: {exc}") from exc
        return value

    with mp.workprec(prec):
        environment = {
            "z": point.radius.to_mpf(prec),
            "a": point.rooted_value.to_mpf(prec),
        }
        if uses_t:
            environment["t"] = mp.mpf(env["t_value"])
        try:
            value = evaluate(da, environment, _lift_mpf) / 2
            if uses_t:
                dt = diff(expr, "t")
                value += mp.mpf(env["tau_prime"]) * evaluate(dt, environment, _lift_mpf)
        except ZeroDivisionError as exc:
            raise PoleError(f"family has a pole at the singular point: {exc}") from exc
        return value


def coefficient_ratio(expr: Expr, n: int, order: int = 400) -> float:
    """Oracle: [z^order] of the family series over [z^order] of all trees.

    Only valid for t-free families (the tautology series has no closed form).
    """
    if mentions(expr, "t"):
        raise ValueError("coefficient oracle is only available for t-free families")
    cs = series(n, order)
    z = Series.z(order)
    rooted = Series(list(cs.a_hat), order)
    family_series = evaluate(expr, {"z": z, "a": rooted}, _lift_series(order))
    numer = family_series[order]
    denom = cs.a_total[order]
    return float(Fraction(numer) / Fraction(denom))


def default_t_env(n: int, max_size: int = 40) -> Dict[str, float]:
    """Heuristic env for t-dependent families.

    For n <= 3 both entries come from the exact distribution: tau_prime from
    the tail-averaged limit of the probability of True, t_value from the
    partial sum of tautology counts against the radius (a slight lower bound;
    the tail decays like m^(-3/2)).  For larger n the probability of True is
    only bracketed, so the bracket midpoint is used and t_value falls back to
    half the non-leaf series value (an upper bound for the tautology series
    at the radius).
    """
    point = singularity(n)
    if n <= 3:
        from .distribution import limit_estimate, tautology_count
        from .formula import TruthTable

        rep = limit_estimate(n, TruthTable.constant(n, True), M=max_size)
        radius = float(point.radius)
        t_val = sum(tautology_count(m, n) * radius ** m for m in range(1, max_size + 1))
        return {"t_value": t_val, "tau_prime": rep.estimate}
    lower, upper = 0.12161, 0.5
    return {
        "t_value": float(point.nonleaf_value) / 2,
        "tau_prime": (lower + upper) / 2,
    }


# -- derived quantities ------------------------------------------------------


def expected_first_level_leaves(n: int) -> QuadExt:
    """Exact large-size limit of the mean number of leaf children of the root."""
    expr = families.first_level_leaf_weight(n)
    value = limiting_ratio(expr, n, mode="exact")
    assert isinstance(value, QuadExt)
    return value


def first_level_leaf_law(n: int, j_max: int) -> list:
    """Exact limiting distribution of the number of first-level leaves,
    as floats, for j = 0..j_max."""
    point = singularity(n)
    radius = float(point.radius)
    b = float(point.nonleaf_value)
    w = 2 * n * radius
    out = [radius * (1 / (1 - b) ** 2 - 1)]
    for j in range(1, j_max + 1):
        out.append(radius * w ** j * (j + 1) / (1 - b) ** (j + 2))
    return out


def nonleaf_partition_sum(n: int, explicit_up_to: int = 8) -> QuadExt:
    """Exact sum of the corrected per-count limiting ratios over all counts.

    Counts up to `explicit_up_to` go through the engine one by one; the rest
    is the closed form of the geometric tail.  The total must be exactly 1.
    """
    if explicit_up_to < 2:
        raise ValueError("explicit_up_to must be >= 2")
    point = singularity(n)
    total = QuadExt.rational(0, 2 * n)
    for count in range(explicit_up_to + 1):
        expr = families.nonleaf_subtrees_corrected(n, count)
        total = total + limiting_ratio(expr, n, mode="exact")
    # tail: sum_{l > explicit_up_to} radius * l * u^{l-1} / (1-2n radius)^2
    rho = point.radius
    b = point.nonleaf_value
    one = QuadExt.rational(1, 2 * n)
    denom = one - 2 * n * rho
    u = b / denom
    L = explicit_up_to + 1
    tail_core = (u ** (L - 1)) * (L - (L - 1) * u) / (one - u) ** 2
    total = total + rho / denom ** 2 * tail_core
    return total


# -- the numeric tautology-ratio bounds ---------------------------------------


def tautology_bounds(
    n: int,
    k_lo: Optional[int] = None,
    k_hi: Optional[int] = None,
    j_max: int = 5,
    prec: int = 200,
) -> Dict[str, float]:
    """Numeric lower bound on the limiting ratio of simple tautologies.

    Sums the limiting ratios of three explicit tree families over
    k in [k_lo, k_hi] (defaults floor(sqrt(n)) .. 15*floor(sqrt(n))) and
    j in 1..j_max:

      E_ratio  — or-rooted trees with k leaf children and j non-leaf subtrees,
                 position factor (k+1)^j / j!;
      E1_bound — the subfamily whose rightmost labels avoid the negations of
                 the leftmost-label set when that set is large;
      E2_bound — the same with a small leftmost-label set;
      lower    = E_ratio - E1_bound - E2_bound.

    Everything is evaluated in floats with `prec` bits; the sums are
    well-conditioned (all terms positive).
    """
    if n < 4:
        raise ValueError("the bound families need floor(sqrt(n)) >= 2")
    s = math.isqrt(n)
    k_lo = s if k_lo is None else k_lo
    k_hi = 15 * s if k_hi is None else k_hi
    point = singularity(n)
    with mp.workprec(prec):
        rho = point.radius.to_mpf(prec)
        b = point.nonleaf_value.to_mpf(prec)
        w = 2 * n * rho
        b_powers = [b ** i for i in range(j_max)]
        inv_fact = [mp.mpf(1) / mp.factorial(j - 1) for j in range(1, j_max + 1)]

        def deriv_sum(k_shift: int, k: int) -> mp.mpf:
            # sum_j (k+shift)^j * j * b^{j-1} / j!
            total = mp.mpf(0)
            base = mp.mpf(k + k_shift)
            p = base
            for j in range(1, j_max + 1):
                total += p * b_powers[j - 1] * inv_fact[j - 1]
                p *= base
            return total

        e_sum = mp.mpf(0)
        wk = w ** k_lo
        for k in range(k_lo, k_hi + 1):
            e_sum += wk * deriv_sum(1, k)
            wk *= w
        e_ratio = rho / 2 * e_sum

        base1 = (2 * n - mp.sqrt(n) / 2) * rho
        e1_sum = mp.mpf(0)
        bk = mp.mpf(1)
        for k in range(k_lo, k_hi + 1):
            e1_sum += bk * deriv_sum(5, k)
            bk *= base1
        e1 = rho / 2 * (w ** s) * e1_sum

        e2_sum = mp.mpf(0)
        wk = mp.mpf(1)
        for k in range(k_lo, k_hi + 1):
            e2_sum += wk * deriv_sum(5, k)
            wk *= w
        half_s = s // 2
        e2 = (
            rho / 2
            * mp.mpf(math.comb(n, half_s))
            * mp.sqrt(2) ** s
            * (mp.sqrt(n) / 2 * rho) ** s
            * e2_sum
        )
        lower = e_ratio - e1 - e2
        return {
            "lower": float(lower),
            "E_ratio": float(e_ratio),
            "E1_bound": float(e1),
            "E2_bound": float(e2),
        }


#: leading asymptotic terms for the catalog, used by the CLI `analyze` output
ASYMPTOTIC_REFERENCE = {
    "no_first_level_leaf": ("1/(n*sqrt(2n))", lambda n, **kw: 1.0 / (n * math.sqrt(2 * n))),
    "labels_from": ("gamma*sqrt(2/n)", lambda n, gamma: gamma * math.sqrt(2.0 / n)),
    "exact_k_labels": ("O(k/n)", lambda n, k: k / n),
    "nonleaf_subtrees": (
        "ell/2^(ell+1)",
        lambda n, ell: ell / 2.0 ** (ell + 1),
    ),
    "nonleaf_subtrees_corrected": (
        "ell/2^(ell+1)",
        lambda n, ell: ell / 2.0 ** (ell + 1),
    ),
    "R_family": ("exp(-sqrt(2))/8", lambda n, **kw: math.exp(-math.sqrt(2)) / 8),
    "simple_x": ("tau'/n^2", None),
    "check_family": (None, None),
    "first_level_leaves_exactly": (None, None),
}
