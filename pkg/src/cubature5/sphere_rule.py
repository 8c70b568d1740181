"""Mysovskikh's degree-5 cubature formula for the unit sphere surface U_n."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from cubature5.moments import sphere_surface_area


def _check_dimension(n: int) -> None:
    if n < 4:
        raise ValueError(f"Mysovskikh's rule needs n >= 4, got {n}")


def mysovskikh_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Simplex directions a^(r) and normalized pairwise sums b^(j).

    Returns arrays of shape (n+1, n) and (n(n+1)/2, n).  The b nodes are
    enumerated over pairs k < l in lexicographic order.
    """
    _check_dimension(n)
    a = np.zeros((n + 1, n))
    for r in range(1, n + 2):
        for i in range(1, n + 1):
            if i < r:
                a[r - 1, i - 1] = -math.sqrt((n + 1) / (n * (n - i + 2) * (n - i + 1)))
            elif i == r:
                a[r - 1, i - 1] = math.sqrt((n + 1) * (n - r + 1) / (n * (n - r + 2)))
    scale = math.sqrt(n / (2 * (n - 1)))
    b = np.array([scale * (a[k] + a[l]) for k, l in combinations(range(n + 1), 2)])
    return a, b


def mysovskikh_weights(n: int) -> tuple[float, float]:
    """Weights (A, B) of the a- and b-orbits.  A is exactly zero at n = 7."""
    _check_dimension(n)
    V = sphere_surface_area(n)
    # integer numerators keep A == 0.0 exact at n = 7
    A = n * (7 - n) * V / (2 * (n + 1) ** 2 * (n + 2))
    B = 2 * (n - 1) ** 2 * V / (n * (n + 1) ** 2 * (n + 2))
    return A, B


@dataclass(frozen=True)
class SphereRule:
    dimension: int
    nodes_a: np.ndarray
    nodes_b: np.ndarray
    weight_A: float
    weight_B: float
    V: float

    @property
    def has_negative_weights(self) -> bool:
        return self.weight_A < 0 or self.weight_B < 0

    def integrate(self, f) -> float:
        """Apply the rule to ``f``, which maps an (m, n) array of points to m values.

        Each node is paired with its antipode before summation, so odd
        integrands give exactly 0.
        """
        total_a = f(self.nodes_a) + f(-self.nodes_a)
        total_b = f(self.nodes_b) + f(-self.nodes_b)
        return self.weight_A * math.fsum(total_a) + self.weight_B * math.fsum(total_b)


def mysovskikh_rule(n: int) -> SphereRule:
    a, b = mysovskikh_nodes(n)
    A, B = mysovskikh_weights(n)
    a.flags.writeable = False
    b.flags.writeable = False
    return SphereRule(n, a, b, A, B, sphere_surface_area(n))
