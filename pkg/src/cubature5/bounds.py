"""Lower bounds on the number of nodes of a cubature formula."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def dim_poly_space(n: int, k: int) -> int:
    """Dimension of the space of polynomials in n variables of degree <= k."""
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return math.comb(n + k, n)


def _half_degree(degree: int) -> int:
    if degree < 1 or degree % 2 == 0:
        raise ValueError(f"lower bound only available for odd degree, got {degree}")
    return (degree - 1) // 2


def moller_bound_exact(n: int, degree: int) -> Fraction:
    """Möller's bound for centrally symmetric integrals, as an exact rational."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    k = _half_degree(degree)
    total = Fraction(math.comb(n + k, n))
    for s in range(1, n):
        p = Fraction(1, 2 ** (n - s))
        if k % 2:
            total += p * math.comb(s + k, s)
        else:
            total += (1 - p) * math.comb(s + k - 1, s)
    return total


def moller_bound(n: int, degree: int) -> int:
    """Smallest node count allowed by Möller's bound (n^2+n+1 for degree 5)."""
    return math.ceil(moller_bound_exact(n, degree))


def doubled_dimension_bound(n: int, degree: int) -> int:
    """The coarser form 2 dim P_n^k - (0 if k odd else 1); shown in verbose output only."""
    k = _half_degree(degree)
    return 2 * dim_poly_space(n, k) - (0 if k % 2 else 1)


@dataclass(frozen=True)
class BoundReport:
    dimension: int
    degree: int
    dim_bound: int
    moller_bound: int
    rule_points: int | None = None

    @property
    def gap(self) -> int | None:
        if self.rule_points is None:
            return None
        return self.rule_points - self.moller_bound


def bound_report(n: int, degree: int, rule_points: int | None = None) -> BoundReport:
    k = _half_degree(degree)
    return BoundReport(n, degree, dim_poly_space(n, k), moller_bound(n, degree), rule_points)
