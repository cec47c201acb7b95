"""Exact arithmetic over the Gaussian and Eisenstein integers.

Everything downstream (shell enumeration, state canonicalisation, the
stabiliser-Renyi census) is built on the two rings implemented here:

* ``GaussianInt``   -- Z[i],     stored as (re, im)
* ``EisensteinInt`` -- Z[omega], stored as (a, b) meaning a + b*omega,
  where omega = exp(2*pi*i/3), so omega**2 = -1 - omega.

Rational numbers are handled by ``fractions.Fraction`` from the standard
library; no floating point enters any of these routines.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence, TypeVar, Union


class GaussianInt:
    """An element re + im*i of Z[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re: int, im: int = 0) -> None:
        self.re = re
        self.im = im

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: Union["GaussianInt", int]) -> "GaussianInt":
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __rmul__(self, other: int) -> "GaussianInt":
        return GaussianInt(self.re * other, self.im * other)

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        """Field norm |z|^2 = re^2 + im^2."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def coords(self) -> tuple[int, int]:
        return (self.re, self.im)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GaussianInt)
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"


class EisensteinInt:
    """An element a + b*omega of Z[omega], omega = exp(2*pi*i/3)."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 0) -> None:
        self.a = a
        self.b = b

    def __add__(self, other: "EisensteinInt") -> "EisensteinInt":
        return EisensteinInt(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "EisensteinInt") -> "EisensteinInt":
        return EisensteinInt(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other: Union["EisensteinInt", int]) -> "EisensteinInt":
        if isinstance(other, int):
            return EisensteinInt(self.a * other, self.b * other)
        # (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2,  w^2 = -1 - w
        a, b, c, d = self.a, self.b, other.a, other.b
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    def __rmul__(self, other: int) -> "EisensteinInt":
        return EisensteinInt(self.a * other, self.b * other)

    def conjugate(self) -> "EisensteinInt":
        # conj(w) = w^2 = -1 - w, so conj(a + b w) = (a - b) - b w
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        """Field norm |z|^2 = a^2 - a*b + b^2."""
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def coords(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, EisensteinInt)
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self) -> int:
        return hash((self.a, self.b, "w"))

    def __repr__(self) -> str:
        return f"EisensteinInt({self.a}, {self.b})"

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}w"


RingElement = TypeVar("RingElement", GaussianInt, EisensteinInt)

OMEGA = EisensteinInt(0, 1)
# theta = omega - omega^2 = 1 + 2 omega = i*sqrt(3); theta has norm 3 and
# theta generates the ramified prime above 3.
THETA = EisensteinInt(1, 2)

GAUSSIAN_UNITS: tuple[GaussianInt, ...] = (
    GaussianInt(1, 0),
    GaussianInt(0, 1),
    GaussianInt(-1, 0),
    GaussianInt(0, -1),
)

EISENSTEIN_UNITS: tuple[EisensteinInt, ...] = (
    EisensteinInt(1, 0),
    EisensteinInt(0, 1),
    EisensteinInt(-1, -1),  # omega^2
    EisensteinInt(-1, 0),
    EisensteinInt(0, -1),
    EisensteinInt(1, 1),  # -omega^2
)


def units_for(element: RingElement) -> tuple[RingElement, ...]:
    if isinstance(element, GaussianInt):
        return GAUSSIAN_UNITS  # type: ignore[return-value]
    return EISENSTEIN_UNITS  # type: ignore[return-value]


def _in_canonical_sector(z: Union[GaussianInt, EisensteinInt]) -> bool:
    # The unit group acts by rotation; each ring has a half-open fundamental
    # sector, and the canonical representative of a ray is the rotation
    # landing inside it.  Gaussian: quarter plane re > 0, im >= 0.
    # Eisenstein: the sextant of angle [0, 60) degrees, which in (a, b)
    # coordinates (embedding a - b/2 + i*b*sqrt(3)/2) is b >= 0 and a > b.
    if isinstance(z, GaussianInt):
        return z.re > 0 and z.im >= 0
    return z.b >= 0 and z.a > z.b


def unit_canonicalize(
    components: Sequence[RingElement],
) -> tuple[tuple[RingElement, ...], RingElement]:
    """Rotate a vector by the unit that puts its first nonzero component
    into the canonical sector.

    Returns ``(rotated_components, unit)`` with ``rotated = unit * input``.
    Raises ``ValueError`` on the zero vector.
    """
    first = next((c for c in components if not c.is_zero()), None)
    if first is None:
        raise ValueError("cannot canonicalize the zero vector")
    for u in units_for(first):
        if _in_canonical_sector(u * first):
            return tuple(u * c for c in components), u
    raise AssertionError("no unit lands in the canonical sector")  # pragma: no cover


def primitive_part(
    components: Sequence[RingElement],
) -> tuple[tuple[RingElement, ...], int]:
    """Divide out the rational integer content of a vector.

    The content is the gcd of all (re, im) respectively (a, b) integer
    coordinates.  Returns ``(primitive_components, content)``; raises
    ``ValueError`` on the zero vector.
    """
    g = 0
    for c in components:
        x, y = c.coords()
        g = gcd(g, gcd(abs(x), abs(y)))
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    if g == 1:
        return tuple(components), 1
    cls = type(components[0])
    reduced = tuple(cls(c.coords()[0] // g, c.coords()[1] // g) for c in components)
    return reduced, g


def canonical_vector(
    components: Sequence[RingElement],
) -> tuple[tuple[RingElement, ...], int, RingElement]:
    """primitive_part followed by unit_canonicalize."""
    prim, content = primitive_part(components)
    rotated, unit = unit_canonicalize(prim)
    return rotated, content, unit


def _divmod_nearest(x: RingElement, y: RingElement) -> tuple[RingElement, RingElement]:
    # Nearest-integer division in basis coordinates.  Both rings are
    # norm-Euclidean under this rounding (remainder norm <= 3/4 * norm(y)
    # for Eisenstein, <= 1/2 * norm(y) for Gaussian).
    n = y.norm()
    prod = x * y.conjugate()
    p, q = prod.coords()
    cls = type(x)
    qa = (2 * p + n) // (2 * n)
    qb = (2 * q + n) // (2 * n)
    quot = cls(qa, qb)
    rem = x - quot * y
    return quot, rem


def ring_gcd(x: RingElement, y: RingElement) -> RingElement:
    """A greatest common divisor in Z[i] or Z[omega] (unique up to units)."""
    while not y.is_zero():
        _, r = _divmod_nearest(x, y)
        x, y = y, r
    return x


def exact_div(x: RingElement, y: RingElement) -> RingElement:
    """x / y when y exactly divides x; raises ``ValueError`` otherwise."""
    q, r = _divmod_nearest(x, y)
    if not r.is_zero():
        raise ValueError(f"{x} is not divisible by {y}")
    return q


def ray_reduce(components: Sequence[RingElement]) -> tuple[RingElement, ...]:
    """Canonical representative of the ray spanned by a vector.

    Divides out the full ring gcd of the components (not merely the
    rational content) and canonicalizes the leading unit, so any two ring
    multiples of the same vector reduce to an identical tuple.
    """
    g: RingElement | None = None
    for c in components:
        if c.is_zero():
            continue
        g = c if g is None else ring_gcd(g, c)
    if g is None:
        raise ValueError("cannot reduce the zero vector")
    reduced = tuple(exact_div(c, g) if not c.is_zero() else c for c in components)
    rotated, _ = unit_canonicalize(reduced)
    return rotated


def vector_norm(components: Iterable[RingElement]) -> int:
    return sum(c.norm() for c in components)
