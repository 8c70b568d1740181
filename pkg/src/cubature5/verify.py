"""Exactness checks for cubature rules, and an independent tensor-Gauss oracle."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from cubature5.constructor import CubatureRule
from cubature5.moments import MAX_DEGREE, MeasureKind, MeasureSpec, MomentOracle
from cubature5.polyparse import Polynomial

DEFAULT_TOLERANCE = 1e-10


def monomials(n: int, degree: int):
    """Exponent tuples of total degree exactly ``degree``, in descending lexicographic order."""
    if n == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials(n - 1, degree - first):
            yield (first,) + rest


def graded_monomials(n: int, max_degree: int):
    """All exponent tuples of total degree <= max_degree, graded lexicographic."""
    for d in range(max_degree + 1):
        yield from monomials(n, d)


def _power_table(nodes: np.ndarray, max_exp: int) -> np.ndarray:
    table = np.empty(nodes.shape + (max_exp + 1,))
    table[..., 0] = 1.0
    for e in range(1, max_exp + 1):
        table[..., e] = table[..., e - 1] * nodes
    return table


def _paired_sum(rule: CubatureRule, values: np.ndarray) -> np.ndarray:
    """Weighted sum over nodes along the last axis, adding f(x) + f(-x) before weighting."""
    p = 2 * rule.n_pairs
    w = rule.weights
    paired = values[..., 0:p:2] + values[..., 1:p:2]
    return paired @ w[0:p:2] + values[..., p:] @ w[p:]


def apply_rule(rule: CubatureRule, poly: Polynomial) -> float:
    """Sum of w_i * poly(x_i) over the rule."""
    if poly.inferred_dimension > rule.dimension:
        raise ValueError(
            f"polynomial uses x{poly.inferred_dimension} but the rule has dimension {rule.dimension}"
        )
    return float(_paired_sum(rule, poly.evaluate(rule.nodes)))


def monomial_values(rule: CubatureRule, alphas: list[tuple[int, ...]], chunk: int = 2048) -> np.ndarray:
    """Rule applied to each monomial in ``alphas``."""
    if not alphas:
        return np.zeros(0)
    n = rule.dimension
    E = np.array([a + (0,) * (n - len(a)) for a in alphas], dtype=int)
    table = _power_table(rule.nodes, int(E.max()))
    cols = np.arange(n)
    out = np.empty(len(E))
    for start in range(0, len(E), chunk):
        block = E[start:start + chunk]
        # (nodes, monomials, n) -> product over variables
        vals = table[:, cols, block].prod(axis=-1)
        out[start:start + chunk] = _paired_sum(rule, vals.T)
    return out


@dataclass(frozen=True)
class DegreeResult:
    degree: int
    max_rel_error: float
    worst_monomial: tuple[int, ...]


@dataclass(frozen=True)
class VerificationReport:
    degrees: tuple[DegreeResult, ...]
    passed: bool
    tolerance: float
    check_degree: int

    def error_at(self, degree: int) -> float:
        for d in self.degrees:
            if d.degree == degree:
                return d.max_rel_error
        raise KeyError(degree)

    @property
    def worst(self) -> DegreeResult:
        """Worst result among the degrees that decide pass/fail."""
        relevant = [d for d in self.degrees if d.degree <= self.check_degree]
        return max(relevant, key=lambda d: d.max_rel_error)

    def failing_degrees(self) -> list[int]:
        return [d.degree for d in self.degrees if not d.max_rel_error <= self.tolerance]

    def to_dict(self) -> dict:
        return {
            "degrees": [
                {"degree": d.degree, "max_rel_error": d.max_rel_error, "worst_monomial": list(d.worst_monomial)}
                for d in self.degrees
            ],
            "pass": self.passed,
            "tolerance": self.tolerance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def exactness_sweep(
    rule: CubatureRule,
    oracle: MomentOracle,
    max_degree: int,
    tolerance: float = DEFAULT_TOLERANCE,
    degree: int | None = None,
) -> VerificationReport:
    """Compare the rule with exact moments for every monomial up to ``max_degree``.

    The error is relative to the exact moment, or to the rule's mass when the
    moment is zero.  The report passes when every degree up to ``degree``
    (the rule's declared degree by default) is within ``tolerance``.
    """
    if max_degree > MAX_DEGREE:
        raise ValueError(f"max_degree must be <= {MAX_DEGREE}, got {max_degree}")
    if oracle.measure.dimension != rule.dimension:
        raise ValueError(
            f"rule dimension {rule.dimension} does not match measure dimension {oracle.measure.dimension}"
        )
    check = rule.degree if degree is None else degree
    mass = abs(oracle.mass)
    results = []
    for d in range(max_degree + 1):
        alphas = list(monomials(rule.dimension, d))
        approx = monomial_values(rule, alphas)
        exact = np.array([oracle.evaluate(a) for a in alphas])
        scale = np.where(exact != 0.0, np.abs(exact), mass)
        err = np.abs(approx - exact) / scale
        worst = int(np.argmax(err))
        results.append(DegreeResult(d, float(err[worst]), alphas[worst]))
    passed = all(r.max_rel_error <= tolerance for r in results if r.degree <= check)
    return VerificationReport(tuple(results), passed, tolerance, check)


def exact_integral(measure: MeasureSpec, poly: Polynomial) -> float:
    """Integral of ``poly`` by expanding it in closed-form moments."""
    oracle = MomentOracle(measure)
    return math.fsum(c * oracle.evaluate(a) for a, c in poly)


# -- brute force -------------------------------------------------------------


def _legendre(n: int, x: float) -> tuple[float, float]:
    p0, p1 = 1.0, x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, p0


def _hermite(n: int, x: float) -> tuple[float, float]:
    # physicists' Hermite polynomials
    h0, h1 = 1.0, 2.0 * x
    for k in range(2, n + 1):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * (k - 1) * h0
    return h1, h0


def _roots(poly_pair, n: int, lo: float, hi: float, tol: float = 1e-14) -> list[float]:
    """Roots of a degree-n orthogonal polynomial: sign-change bracketing, then bisection and Newton."""
    grid = np.linspace(lo, hi, 400 * n + 1)
    vals = [poly_pair(n, x)[0] for x in grid]
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
            continue
        if fb == 0.0 or fa * fb > 0:
            continue
        a, b = float(a), float(b)
        while b - a > 1e-6:
            m = 0.5 * (a + b)
            if poly_pair(n, a)[0] * poly_pair(n, m)[0] <= 0:
                b = m
            else:
                a = m
        x = 0.5 * (a + b)
        for _ in range(50):
            step = poly_pair(n, x)[0] / _derivative(poly_pair, n, x)
            x -= step
            if abs(step) < tol:
                break
        roots.append(x)
    if len(roots) != n:
        raise RuntimeError(f"found {len(roots)} roots, expected {n}")
    return roots


def _derivative(poly_pair, n: int, x: float) -> float:
    p, q = poly_pair(n, x)
    if poly_pair is _legendre:
        return n * (x * p - q) / (x * x - 1.0)
    return 2.0 * n * q  # H_n' = 2n H_{n-1}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight 1 on [-1, 1]."""
    x = np.array(_roots(_legendre, n, -1.0, 1.0))
    w = np.array([2.0 / ((1.0 - xi * xi) * _derivative(_legendre, n, xi) ** 2) for xi in x])
    return x, w


def gauss_hermite(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for the weight exp(-x^2) on R."""
    bound = math.sqrt(2.0 * n + 1.0) + 1.0
    x = np.array(_roots(_hermite, n, -bound, bound))
    const = 2.0 ** (n - 1) * math.factorial(n) * math.sqrt(math.pi) / n**2
    w = np.array([const / _hermite(n, xi)[1] ** 2 for xi in x])
    return x, w


BRUTE_FORCE_POINTS = 4


def brute_force_integral(measure: MeasureSpec, poly: Polynomial) -> float:
    """Integral of ``poly`` by a tensor product of 4-point Gauss rules.

    Exact when each variable appears with exponent <= 7.  Supports the
    constant-weight cube and the Gaussian weight, up to n = 8.
    """
    n = measure.dimension
    if measure.kind is MeasureKind.PRODUCT_CUBE and all(a == 0 for a in measure.alpha):
        x, w = gauss_legendre(BRUTE_FORCE_POINTS)
        w = w / 2.0
    elif measure.kind is MeasureKind.GAUSSIAN:
        x, w = gauss_hermite(BRUTE_FORCE_POINTS)
    else:
        raise ValueError(f"brute force oracle does not support {measure.region_tag}")
    if n > 8:
        raise ValueError(f"brute force oracle is limited to n <= 8, got {n}")
    if any(max(a, default=0) > 2 * BRUTE_FORCE_POINTS - 1 for a, _ in poly):
        raise ValueError("per-variable degree too high for the 4-point tensor rule")
    idx = np.array(list(product(range(BRUTE_FORCE_POINTS), repeat=n)))
    points = x[idx]
    weights = np.prod(w[idx], axis=1)
    return math.fsum(weights * poly.evaluate(points))
