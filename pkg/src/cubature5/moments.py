"""Closed-form moments of the supported integration measures.

Every value here is exact up to floating point rounding and is the ground
truth the constructed rules are checked against.  Moments are available
for monomials of total degree at most 6.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

MAX_DEGREE = 6

#: Relative tolerance for the x1^4 = 3 x1^2 x2^2 identity on custom radial input.
RADIAL_IDENTITY_TOL = 1e-9


class MeasureKind(enum.Enum):
    PRODUCT_CUBE = "cube"
    GAUSSIAN = "gaussian"
    UNIT_BALL = "ball"
    SHELL = "shell"
    EXP_RADIAL = "exp"
    CUSTOM_PRODUCT = "custom-product"
    CUSTOM_RADIAL = "custom-radial"


PRODUCT_KINDS = frozenset({MeasureKind.PRODUCT_CUBE, MeasureKind.CUSTOM_PRODUCT})
RADIAL_KINDS = frozenset(MeasureKind) - PRODUCT_KINDS


def sphere_surface_area(n: int) -> float:
    """Surface content V = 2 pi^(n/2) / Gamma(n/2) of the unit sphere in R^n."""
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n))


def surface_monomial_integral(n: int, alpha: Sequence[int]) -> float:
    """Integral of x^alpha over the unit sphere surface in R^n.

    Returns ``2 prod Gamma((a_i+1)/2) / Gamma((n + sum a_i)/2)`` when every
    exponent is even and 0 otherwise.
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    alpha = tuple(alpha)
    if len(alpha) > n:
        raise ValueError(f"multi-index of length {len(alpha)} exceeds dimension {n}")
    if any(a < 0 for a in alpha):
        raise ValueError(f"exponents must be nonnegative: {alpha}")
    if any(a % 2 for a in alpha):
        return 0.0
    full = alpha + (0,) * (n - len(alpha))
    log_val = sum(math.lgamma(0.5 * (a + 1)) for a in full) - math.lgamma(0.5 * (n + sum(full)))
    return 2.0 * math.exp(log_val)


def gegenbauer_moment(k: int, alpha: float) -> float:
    """Normalized moment of x^(2k) for the weight (1 - x^2)^alpha on [-1, 1]."""
    if alpha <= -1:
        raise ValueError(f"alpha must be > -1, got {alpha}")
    if alpha == 0:
        return 1.0 / (2 * k + 1)
    # B(k + 1/2, alpha + 1) / B(1/2, alpha + 1)
    return math.exp(
        math.lgamma(k + 0.5) - math.lgamma(k + alpha + 1.5) - math.lgamma(0.5) + math.lgamma(alpha + 1.5)
    )


@dataclass(frozen=True)
class MeasureSpec:
    """Integration region plus weight function.

    Use the named constructors (:meth:`cube`, :meth:`gaussian`, ...) rather
    than filling the fields by hand.
    """

    kind: MeasureKind
    dimension: int
    alpha: tuple[float, ...] = ()
    shell_inner_radius: float = 0.0
    custom_moments: tuple = field(default=(), compare=True)

    def __post_init__(self):
        n = self.dimension
        if not isinstance(n, int) or n < 4:
            raise ValueError(f"dimension must be an integer >= 4, got {n!r}")
        kind = self.kind
        if kind is MeasureKind.PRODUCT_CUBE:
            if len(self.alpha) != n:
                raise ValueError(f"expected {n} alpha values, got {len(self.alpha)}")
            for a in self.alpha:
                if not a > -1:
                    raise ValueError(f"alpha must be > -1, got {a}")
        elif kind is MeasureKind.SHELL:
            r = self.shell_inner_radius
            if not 0.0 <= r < 1.0:
                raise ValueError(f"shell inner radius must lie in [0, 1), got {r}")
        elif kind is MeasureKind.CUSTOM_PRODUCT:
            self._check_custom_product()
        elif kind is MeasureKind.CUSTOM_RADIAL:
            self._check_custom_radial()

    def _check_custom_product(self):
        if len(self.custom_moments) != self.dimension:
            raise ValueError(f"expected moments for {self.dimension} axes, got {len(self.custom_moments)}")
        for axis, m in enumerate(self.custom_moments):
            if len(m) == 7:
                scale = max(abs(v) for v in m)
                odd = [m[1], m[3], m[5]]
                if any(abs(v) > 1e-14 * scale for v in odd):
                    raise ValueError(f"axis {axis}: odd moments must vanish, got {odd}")
            elif len(m) != 4:
                raise ValueError(f"axis {axis}: give (m0, m2, m4, m6) or (m0, ..., m6)")
            if not m[0] > 0:
                raise ValueError(f"axis {axis}: total mass must be positive, got {m[0]}")

    def _check_custom_radial(self):
        if len(self.custom_moments) != 4:
            raise ValueError("custom radial moments are (L(1), L(x1^2), L(x1^4), L(x1^2 x2^2))")
        mass, l2, l4, l22 = self.custom_moments
        if not mass > 0:
            raise ValueError(f"total mass must be positive, got {mass}")
        if abs(l4 - 3.0 * l22) > RADIAL_IDENTITY_TOL * max(abs(l4), abs(3.0 * l22)):
            raise ValueError(
                f"not spherically symmetric: L(x1^4) - 3 L(x1^2 x2^2) = {l4 - 3.0 * l22!r}"
            )

    # -- named measures -------------------------------------------------

    @classmethod
    def cube(cls, n: int, alpha: float | Sequence[float] = 0.0) -> MeasureSpec:
        """Product weight prod (1 - x_i^2)^alpha_i on [-1, 1]^n, normalized per axis.

        ``alpha = 0`` is the constant weight 1/2 per axis.
        """
        if isinstance(alpha, (int, float)):
            alpha = (float(alpha),) * n
        return cls(MeasureKind.PRODUCT_CUBE, n, alpha=tuple(float(a) for a in alpha))

    @classmethod
    def gaussian(cls, n: int) -> MeasureSpec:
        """Weight exp(-|x|^2) over R^n."""
        return cls(MeasureKind.GAUSSIAN, n)

    @classmethod
    def ball(cls, n: int) -> MeasureSpec:
        return cls(MeasureKind.UNIT_BALL, n)

    @classmethod
    def shell(cls, n: int, r: float) -> MeasureSpec:
        """Unit weight on the shell r <= |x| <= 1."""
        return cls(MeasureKind.SHELL, n, shell_inner_radius=float(r))

    @classmethod
    def exp_radial(cls, n: int) -> MeasureSpec:
        """Weight exp(-|x|) over R^n."""
        return cls(MeasureKind.EXP_RADIAL, n)

    @classmethod
    def custom_product(cls, n: int, moments: Sequence[Sequence[float]]) -> MeasureSpec:
        if len(moments) and isinstance(moments[0], (int, float)):
            moments = [moments] * n
        return cls(
            MeasureKind.CUSTOM_PRODUCT, n, custom_moments=tuple(tuple(map(float, m)) for m in moments)
        )

    @classmethod
    def custom_radial(cls, n: int, mass: float, x2: float, x4: float, x2y2: float) -> MeasureSpec:
        return cls(MeasureKind.CUSTOM_RADIAL, n, custom_moments=(mass, x2, x4, x2y2))

    # -- properties -----------------------------------------------------

    @property
    def is_product(self) -> bool:
        return self.kind in PRODUCT_KINDS

    @property
    def is_radial(self) -> bool:
        return self.kind in RADIAL_KINDS

    @property
    def region_tag(self) -> str:
        """Short textual tag that :meth:`from_region_tag` turns back into the measure."""
        kind = self.kind
        if kind is MeasureKind.PRODUCT_CUBE:
            if all(a == 0 for a in self.alpha):
                return "cube"
            if len(set(self.alpha)) == 1:
                return f"cube:alpha={self.alpha[0]!r}"
            return "cube:alpha=" + ",".join(repr(a) for a in self.alpha)
        if kind is MeasureKind.SHELL:
            return f"shell:r={self.shell_inner_radius!r}"
        return kind.value

    @classmethod
    def from_region_tag(cls, tag: str, n: int) -> MeasureSpec:
        name, _, params = tag.partition(":")
        opts = {}
        if params:
            key, eq, value = params.partition("=")
            if not eq:
                raise ValueError(f"malformed region tag {tag!r}")
            opts[key] = value
        if name == "cube":
            alpha = [float(v) for v in opts.get("alpha", "0").split(",")]
            return cls.cube(n, alpha[0] if len(alpha) == 1 else alpha)
        if name == "shell":
            if "r" not in opts:
                raise ValueError(f"shell region tag needs r=...: {tag!r}")
            return cls.shell(n, float(opts["r"]))
        simple = {"gaussian": cls.gaussian, "ball": cls.ball, "exp": cls.exp_radial}
        if name in simple and not opts:
            return simple[name](n)
        raise ValueError(f"unknown region tag {tag!r}")


def product_axis_moments(spec: MeasureSpec, axis: int) -> tuple[float, float, float, float]:
    """Normalized even moments (m0, m2, m4, m6) of one axis of a product measure."""
    if not spec.is_product:
        raise ValueError(f"{spec.kind.value} is not a product measure")
    if not 0 <= axis < spec.dimension:
        raise IndexError(f"axis {axis} out of range for dimension {spec.dimension}")
    if spec.kind is MeasureKind.PRODUCT_CUBE:
        a = spec.alpha[axis]
        return (1.0, gegenbauer_moment(1, a), gegenbauer_moment(2, a), gegenbauer_moment(3, a))
    m = spec.custom_moments[axis]
    even = (m[0], m[1], m[2], m[3]) if len(m) == 4 else (m[0], m[2], m[4], m[6])
    m0 = even[0]
    return (1.0, even[1] / m0, even[2] / m0, even[3] / m0)


def _axis_mass(spec: MeasureSpec, axis: int) -> float:
    if spec.kind is MeasureKind.CUSTOM_PRODUCT:
        return spec.custom_moments[axis][0]
    return 1.0


def radial_factor(spec: MeasureSpec, k: int) -> float:
    """Integral of rho(r) r^(n-1+k) over the radial range of a named radial measure."""
    n = spec.dimension
    kind = spec.kind
    if kind is MeasureKind.GAUSSIAN:
        return 0.5 * math.exp(math.lgamma(0.5 * (n + k)))
    if kind is MeasureKind.UNIT_BALL:
        return 1.0 / (n + k)
    if kind is MeasureKind.SHELL:
        return (1.0 - spec.shell_inner_radius ** (n + k)) / (n + k)
    if kind is MeasureKind.EXP_RADIAL:
        return math.exp(math.lgamma(n + k))
    if kind is MeasureKind.CUSTOM_RADIAL:
        mass, l2, _, l22 = spec.custom_moments
        if k == 0:
            return mass / sphere_surface_area(n)
        if k == 2:
            return l2 / surface_monomial_integral(n, (2,))
        if k == 4:
            return l22 / surface_monomial_integral(n, (2, 2))
        raise ValueError(f"custom radial measure has no radial moment of degree {k}")
    raise ValueError(f"{kind.value} is not a radial measure")


def radial_moments(spec: MeasureSpec) -> tuple[float, float, float, float]:
    """(L(1), L(x1^2), L(x1^4), L(x1^2 x2^2)) of a spherically symmetric measure, unnormalized."""
    if not spec.is_radial:
        raise ValueError(f"{spec.kind.value} is not a spherically symmetric measure")
    if spec.kind is MeasureKind.CUSTOM_RADIAL:
        return tuple(spec.custom_moments)
    n = spec.dimension
    return (
        radial_factor(spec, 0) * sphere_surface_area(n),
        radial_factor(spec, 2) * surface_monomial_integral(n, (2,)),
        radial_factor(spec, 4) * surface_monomial_integral(n, (4,)),
        radial_factor(spec, 4) * surface_monomial_integral(n, (2, 2)),
    )


def total_mass(spec: MeasureSpec) -> float:
    if spec.is_product:
        return math.prod(_axis_mass(spec, i) for i in range(spec.dimension))
    return radial_moments(spec)[0]


class MomentOracle:
    """Exact L(x^alpha) for a measure, for multi-indices of total degree <= 6."""

    def __init__(self, measure: MeasureSpec):
        self.measure = measure
        self.mass = total_mass(measure)
        if measure.is_product:
            self._axes = [product_axis_moments(measure, i) for i in range(measure.dimension)]

    def evaluate(self, alpha: Sequence[int]) -> float:
        alpha = tuple(alpha)
        n = self.measure.dimension
        if len(alpha) > n:
            if any(alpha[n:]):
                raise ValueError(f"multi-index {alpha} exceeds dimension {n}")
            alpha = alpha[:n]
        if any(a < 0 for a in alpha):
            raise ValueError(f"exponents must be nonnegative: {alpha}")
        if any(a % 2 for a in alpha):
            return 0.0
        degree = sum(alpha)
        if degree > MAX_DEGREE:
            raise ValueError(f"moments are only available up to degree {MAX_DEGREE}, got {degree}")
        if self.measure.is_product:
            value = self.mass
            for axis, a in enumerate(alpha):
                value *= self._axes[axis][a // 2]
            return value
        return radial_factor(self.measure, degree) * surface_monomial_integral(n, alpha)

    __call__ = evaluate

    def normalized(self, alpha: Sequence[int]) -> float:
        return self.evaluate(alpha) / self.mass
