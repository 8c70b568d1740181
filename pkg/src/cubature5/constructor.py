"""Assembly of the fifth-degree rules.

A rule is the sum of two parts.  The first is Mysovskikh's sphere formula,
stretched by a diagonal matrix and multiplied by a parameter ``gamma``.  The
second integrates what the first part misses: two points on every
coordinate axis plus the origin.  For spherically symmetric measures gamma
can be chosen so that the axis points disappear.

Internally every functional is normalized to total mass 1.  The weights are
multiplied by the true mass only when the rule is assembled.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from cubature5.bounds import moller_bound
from cubature5.moments import (
    MeasureKind,
    MeasureSpec,
    product_axis_moments,
    radial_moments,
    sphere_surface_area,
    surface_monomial_integral,
    total_mass,
)
from cubature5.sphere_rule import mysovskikh_rule

#: Factor applied to gamma when the strict inequality sqrt(gamma) > k is the binding one.
STRICT_INFLATION = 1.0 + 1e-9
#: Normalized center weights at or below this magnitude are dropped.
CENTER_DROP_TOL = 1e-14
#: Relative size below which a residual moment counts as zero.
RESIDUAL_ZERO_TOL = 1e-12
#: Slack allowed when testing whether nodes lie in the region.
REGION_TOL = 1e-12


class ConstructionError(ValueError):
    """The requested rule cannot be built from the given measure and parameters."""


class OutsideRegionWarning(UserWarning):
    """Some nodes of the constructed rule lie outside the integration region."""


@dataclass(frozen=True)
class CubatureRule:
    dimension: int
    region: str
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    gamma: float
    mass: float
    scale_diag: tuple[float, ...] = ()
    points_in_region: bool = True
    has_negative_weights: bool = False
    attains_moller_bound: bool = False
    # the first 2*n_pairs nodes come as (x, -x) with equal weights
    n_pairs: int = 0
    dropped: tuple[str, ...] = ()

    def __post_init__(self):
        if self.nodes.shape != (len(self.weights), self.dimension):
            raise ValueError(
                f"nodes of shape {self.nodes.shape} do not match {len(self.weights)} weights "
                f"in dimension {self.dimension}"
            )
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def n_points(self) -> int:
        return len(self.weights)

    def measure(self) -> MeasureSpec:
        return MeasureSpec.from_region_tag(self.region, self.dimension)

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "degree": self.degree,
            "region": self.region,
            "gamma": float(self.gamma),
            "mass": float(self.mass),
            "points_in_region": bool(self.points_in_region),
            "has_negative_weights": bool(self.has_negative_weights),
            "attains_moller_bound": bool(self.attains_moller_bound),
            "nodes": [[float(x) for x in row] for row in self.nodes],
            "weights": [float(w) for w in self.weights],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(self.dimension)] + ["weight"])
        for row, w in zip(self.nodes, self.weights):
            writer.writerow([repr(float(x)) for x in row] + [repr(float(w))])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, data: dict) -> CubatureRule:
        required = (
            "dimension", "degree", "region", "gamma", "mass", "points_in_region",
            "has_negative_weights", "attains_moller_bound", "nodes", "weights",
        )
        missing = [k for k in required if k not in data]
        if missing:
            raise ValueError(f"rule is missing fields: {', '.join(missing)}")
        n = int(data["dimension"])
        nodes = np.array(data["nodes"], dtype=float).reshape(-1, n)
        weights = np.array(data["weights"], dtype=float)
        return cls(
            dimension=n,
            region=str(data["region"]),
            degree=int(data["degree"]),
            nodes=nodes,
            weights=weights,
            gamma=float(data["gamma"]),
            mass=float(data["mass"]),
            points_in_region=bool(data["points_in_region"]),
            has_negative_weights=bool(data["has_negative_weights"]),
            attains_moller_bound=bool(data["attains_moller_bound"]),
            n_pairs=_count_leading_pairs(nodes, weights),
        )

    @classmethod
    def from_json(cls, text: str) -> CubatureRule:
        return cls.from_dict(json.loads(text))


def _count_leading_pairs(nodes: np.ndarray, weights: np.ndarray) -> int:
    count = 0
    for i in range(0, len(weights) - 1, 2):
        if weights[i] != weights[i + 1] or not np.array_equal(nodes[i + 1], -nodes[i]):
            break
        count += 1
    return count


@dataclass(frozen=True)
class ResidualMoments:
    """Normalized moments of L - (scaled sphere part), per axis."""

    total: float
    second: tuple[float, ...]
    fourth: tuple[float, ...]
    # magnitudes used to decide when a residual is zero
    second_scale: tuple[float, ...] = field(default=(), repr=False)
    fourth_scale: tuple[float, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class ResidualRule:
    """Points +-v_i e_i with weight w_i on each axis, plus a center weight.

    Axes whose residual moments vanish carry no points (``v_i`` is None).
    """

    nodes: tuple[float | None, ...]
    weights: tuple[float, ...]
    center: float


# -- constants of the sphere formula -------------------------------------


def _k_const(n: int) -> float:
    """sqrt(2 Gamma(n/2+2)) / ((n+2) pi^(n/4)); the sphere part reproduces x_i^2 when sqrt(gamma) = k."""
    return math.exp(0.5 * (math.log(2.0) + math.lgamma(0.5 * n + 2)) - 0.25 * n * math.log(math.pi)) / (n + 2)


def _axis_second_fourth(measure: MeasureSpec) -> list[tuple[float, float]]:
    if measure.is_product:
        return [product_axis_moments(measure, i)[1:3] for i in range(measure.dimension)]
    mass, l2, l4, _ = radial_moments(measure)
    return [(l2 / mass, l4 / mass)] * measure.dimension


def _radial_normalized(measure: MeasureSpec) -> tuple[float, float, float]:
    mass, l2, l4, l22 = radial_moments(measure)
    return l2 / mass, l4 / mass, l22 / mass


# -- gamma ---------------------------------------------------------------


def _is_zero(value: float, scale: float) -> bool:
    return abs(value) <= RESIDUAL_ZERO_TOL * abs(scale)


def _check_sign_condition(measure: MeasureSpec, gamma: float) -> None:
    res = residual_moments(measure, gamma)
    for axis, (r2, r4, s2, s4) in enumerate(zip(res.second, res.fourth, res.second_scale, res.fourth_scale)):
        if _is_zero(r2, s2) and _is_zero(r4, s4):
            continue
        if not r2 * r4 > 0:
            raise ConstructionError(
                f"gamma={gamma!r} violates L~(x_i^2) * L~(x_i^4) > 0 on axis {axis + 1} "
                f"(L~(x^2)={r2!r}, L~(x^4)={r4!r})"
            )


def select_gamma(measure: MeasureSpec, override: float | None = None) -> float:
    """Smallest gamma that keeps every node of the product rule inside [-1, 1]^n.

    With ``override`` the given value is returned after checking that the
    axis moment problem is solvable for it.
    """
    if not measure.is_product:
        raise ConstructionError(f"select_gamma needs a product measure, got {measure.kind.value}")
    n = measure.dimension
    if override is not None:
        if not override > 0:
            raise ConstructionError(f"gamma must be positive, got {override!r}")
        _check_sign_condition(measure, float(override))
        return float(override)

    k = _k_const(n)
    axes = _axis_second_fourth(measure)
    excess = [m4 - 3.0 * m2 * m2 for m2, m4 in axes]
    # a_ii <= 1
    first = max(((n + 2) * k * m2) ** 2 for m2, _ in axes)

    if all(_is_zero(d, m4) for d, (_, m4) in zip(excess, axes)):
        # nothing left for the axis points; the sphere part must reproduce x_i^2 exactly
        return k * k
    if all(d < 0 for d in excess):
        # |v_i| <= 1
        third = max((k * (m2 - d) / m2) ** 2 for d, (m2, _) in zip(excess, axes))
        gamma = max(first, third)
        if k * k >= gamma:
            gamma = k * k * STRICT_INFLATION
        return gamma
    if all(d > 0 for d in excess):
        uppers = [(k * (m2 - d) / m2) ** 2 if m2 > d else -math.inf for d, (m2, _) in zip(excess, axes)]
        if first > min(uppers):
            warnings.warn(
                "no gamma keeps every node inside the cube; using the a_ii <= 1 bound",
                OutsideRegionWarning,
                stacklevel=2,
            )
        return first
    raise ConstructionError(
        "L(x_i^4) - 3 L(x_i^2)^2 changes sign between axes; no single gamma solves every axis"
    )


def spherical_gamma(measure: MeasureSpec) -> float:
    """Gamma that makes the residual second moment vanish for a radial measure."""
    s2, _, s22 = _radial_normalized(measure)
    return (_k_const(measure.dimension) * s2) ** 2 / s22


# -- the two parts of a rule ----------------------------------------------


def _product_scale(n: int, second: list[float], gamma: float) -> tuple[float, ...]:
    l122 = surface_monomial_integral(n, (2, 2))
    denom = math.sqrt(gamma * l122)
    if any(not m2 / denom > 0 for m2 in second):
        raise ConstructionError("nonpositive radicand in the scaling matrix; inconsistent moments")
    return tuple(math.sqrt(m2 / denom) for m2 in second)


def _radial_scale(n: int, s22: float, gamma: float) -> tuple[float, ...]:
    l122 = surface_monomial_integral(n, (2, 2))
    radicand = s22 / (gamma * l122)
    if not radicand > 0:
        raise ConstructionError("nonpositive radicand in the scaling matrix; inconsistent moments")
    return (math.sqrt(math.sqrt(radicand)),) * n


def scale_diagonal(measure: MeasureSpec, gamma: float) -> tuple[float, ...]:
    if not gamma > 0:
        raise ConstructionError(f"gamma must be positive, got {gamma!r}")
    n = measure.dimension
    if measure.is_product:
        return _product_scale(n, [m2 for m2, _ in _axis_second_fourth(measure)], gamma)
    return _radial_scale(n, _radial_normalized(measure)[2], gamma)


def _sphere_part(n: int, gamma: float, diag: tuple[float, ...], mass: float):
    sphere = mysovskikh_rule(n)
    T = np.asarray(diag)
    nodes, weights, dropped = [], [], []
    orbits = ((sphere.nodes_a, sphere.weight_A, "a-orbit"), (sphere.nodes_b, sphere.weight_B, "b-orbit"))
    for base, w, name in orbits:
        if w == 0.0:
            # structural zero (n = 7), not a rounding artefact
            dropped.append(name)
            continue
        for node in base:
            scaled = T * node
            nodes += [scaled, -scaled]
            weights += [gamma * w * mass] * 2
    return nodes, weights, dropped


def scaled_sphere_part(measure: MeasureSpec, gamma: float):
    """Nodes +-T a^(r), +-T b^(j) and their weights gamma*A*mass, gamma*B*mass.

    Returns ``(nodes, weights, scale_diag)``.  The a-orbit is omitted when
    its weight is zero.
    """
    diag = scale_diagonal(measure, gamma)
    nodes, weights, _ = _sphere_part(measure.dimension, gamma, diag, total_mass(measure))
    return np.array(nodes), np.array(weights), diag


def residual_moments(measure: MeasureSpec, gamma: float) -> ResidualMoments:
    """Normalized moments of L minus the scaled sphere part.

    Mixed and odd residual moments vanish; the x1^2 x2^2 one is checked
    numerically against the sphere part and a mismatch raises.
    """
    n = measure.dimension
    k = _k_const(n)
    total = 1.0 - gamma * sphere_surface_area(n)
    if measure.is_product:
        axes = _axis_second_fourth(measure)
        factor = 1.0 - math.sqrt(gamma) / k
        second = tuple(m2 * factor for m2, _ in axes)
        fourth = tuple(m4 - 3.0 * m2 * m2 for m2, m4 in axes)
        scale2 = tuple(m2 for m2, _ in axes)
        scale4 = tuple(m4 for _, m4 in axes)
        mixed = axes[0][0] * axes[1][0]
    else:
        s2, s4, s22 = _radial_normalized(measure)
        second = (s2 - math.sqrt(gamma * s22) / k,) * n
        fourth = (s4 - 3.0 * s22,) * n
        scale2, scale4 = (s2,) * n, (s4,) * n
        mixed = s22

    diag = scale_diagonal(measure, gamma)
    nodes, weights, _ = _sphere_part(n, gamma, diag, 1.0)
    if nodes:
        pts = np.array(nodes)
        q_mixed = float(np.dot(weights, pts[:, 0] ** 2 * pts[:, 1] ** 2))
        if abs(q_mixed - mixed) > 1e-9 * abs(mixed):
            raise ConstructionError(
                f"residual of x1^2 x2^2 is {mixed - q_mixed!r}, expected 0; inconsistent moments"
            )
    return ResidualMoments(total, second, fourth, scale2, scale4)


def solve_residual(res: ResidualMoments) -> ResidualRule:
    """Solve the per-axis moment problem for two symmetric points and a center weight."""
    nodes, weights = [], []
    for axis, (r2, r4) in enumerate(zip(res.second, res.fourth)):
        s2 = res.second_scale[axis] if res.second_scale else 1.0
        s4 = res.fourth_scale[axis] if res.fourth_scale else 1.0
        if _is_zero(r2, s2) and _is_zero(r4, s4):
            nodes.append(None)
            weights.append(0.0)
            continue
        if not r2 * r4 > 0:
            raise ConstructionError(
                f"axis {axis + 1}: the moment problem needs L~(x_i^2) * L~(x_i^4) > 0, "
                f"got L~(x^2)={r2!r}, L~(x^4)={r4!r}"
            )
        nodes.append(math.sqrt(r4 / r2))
        weights.append(r2 * r2 / (2.0 * r4))
    center = res.total - math.fsum(2.0 * w for w in weights)
    return ResidualRule(tuple(nodes), tuple(weights), center)


# -- assembly --------------------------------------------------------------


def _nodes_inside(measure: MeasureSpec, nodes: np.ndarray) -> bool:
    if len(nodes) == 0:
        return True
    if measure.is_product:
        return bool(np.all(np.abs(nodes) <= 1.0 + REGION_TOL))
    if measure.kind in (MeasureKind.GAUSSIAN, MeasureKind.EXP_RADIAL, MeasureKind.CUSTOM_RADIAL):
        return True
    radii = np.linalg.norm(nodes, axis=1)
    inner = measure.shell_inner_radius if measure.kind is MeasureKind.SHELL else 0.0
    return bool(np.all((radii <= 1.0 + REGION_TOL) & (radii >= inner - REGION_TOL)))


def _assemble(measure, degree, gamma, diag, pair_nodes, pair_weights, center, dropped) -> CubatureRule:
    n = measure.dimension
    mass = total_mass(measure)
    nodes = list(pair_nodes)
    weights = list(pair_weights)
    dropped = list(dropped)
    if abs(center) > CENTER_DROP_TOL:
        nodes.append(np.zeros(n))
        weights.append(center * mass)
    else:
        dropped.append("center")
    nodes = np.array(nodes).reshape(-1, n)
    weights = np.array(weights)

    inside = _nodes_inside(measure, nodes)
    if not inside:
        if measure.kind is MeasureKind.SHELL and "center" not in dropped:
            msg = "origin outside region"
        else:
            msg = "some nodes lie outside the integration region"
        warnings.warn(msg, OutsideRegionWarning, stacklevel=3)
    return CubatureRule(
        dimension=n,
        region=measure.region_tag,
        degree=degree,
        nodes=nodes,
        weights=weights,
        gamma=gamma,
        mass=mass,
        scale_diag=diag,
        points_in_region=inside,
        has_negative_weights=bool(np.any(weights < 0)),
        attains_moller_bound=len(weights) == moller_bound(n, 5) and degree == 5,
        n_pairs=len(pair_weights) // 2,
        dropped=tuple(dropped),
    )


def build_product_rule(measure: MeasureSpec, gamma_override: float | None = None) -> CubatureRule:
    """Degree-5 rule with at most n^2+5n+3 points for a symmetric product measure on the cube."""
    if not measure.is_product:
        raise ConstructionError(f"build_product_rule needs a product measure, got {measure.kind.value}")
    n = measure.dimension
    mass = total_mass(measure)
    gamma = select_gamma(measure, gamma_override)
    diag = scale_diagonal(measure, gamma)
    nodes, weights, dropped = _sphere_part(n, gamma, diag, mass)
    axis_rule = solve_residual(residual_moments(measure, gamma))
    for axis, (v, w) in enumerate(zip(axis_rule.nodes, axis_rule.weights)):
        if v is None:
            continue
        point = np.zeros(n)
        point[axis] = v
        nodes += [point, -point]
        weights += [w * mass] * 2
    return _assemble(measure, 5, gamma, diag, nodes, weights, axis_rule.center, dropped)


def build_spherical_rule(measure: MeasureSpec) -> CubatureRule:
    """Degree-5 rule with n^2+3n+3 points (n^2+n+1 at n = 7) for a spherically symmetric measure."""
    if not measure.is_radial:
        raise ConstructionError(
            f"build_spherical_rule needs a spherically symmetric measure, got {measure.kind.value}"
        )
    n = measure.dimension
    s2, s4, s22 = _radial_normalized(measure)
    if abs(s4 - 3.0 * s22) > 1e-9 * abs(s4):
        raise ConstructionError(f"L(x1^4) - 3 L(x1^2 x2^2) = {s4 - 3.0 * s22!r} for a radial measure")
    gamma = spherical_gamma(measure)
    res = residual_moments(measure, gamma)
    if not _is_zero(res.second[0], s2):
        raise ConstructionError(f"residual second moment {res.second[0]!r} did not vanish")
    # both residuals vanish by construction; pin them so no axis points are generated
    res = ResidualMoments(res.total, (0.0,) * n, (0.0,) * n, res.second_scale, res.fourth_scale)
    center = solve_residual(res).center
    diag = scale_diagonal(measure, gamma)
    nodes, weights, dropped = _sphere_part(n, gamma, diag, total_mass(measure))
    return _assemble(measure, 5, gamma, diag, nodes, weights, center, dropped)


def build_rule(measure: MeasureSpec, gamma_override: float | None = None) -> CubatureRule:
    if measure.is_product:
        return build_product_rule(measure, gamma_override)
    if gamma_override is not None:
        raise ConstructionError("gamma is fixed for spherically symmetric measures")
    return build_spherical_rule(measure)


def build_degree3_rule(measure: MeasureSpec) -> CubatureRule:
    """Degree-3 rule: scaled sphere part plus the origin, with gamma = Gamma(n/2+1) / (pi^(n/2) (n+2))."""
    n = measure.dimension
    gamma = _k_const(n) ** 2
    second = [m2 for m2, _ in _axis_second_fourth(measure)]
    diag = _product_scale(n, second, gamma)
    nodes, weights, dropped = _sphere_part(n, gamma, diag, total_mass(measure))
    center = 1.0 - gamma * sphere_surface_area(n)
    return _assemble(measure, 3, gamma, diag, nodes, weights, center, dropped)
