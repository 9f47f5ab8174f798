"""Exact arithmetic in the q-adic field at finite precision.

A ``PadicScalar`` carries an exact rational value together with a window
bound ``known_to``: digits at exponents >= ``known_to`` are unknown (the
scalar stands for the coset ``value + q^known_to * O``).  Scalars built
from rationals are fully known (``known_to is None``); scalars built from
a raw digit window are known only up to the window end.  Every operation
is exact on the known part; queries that would need unknown digits raise
``PrecisionExhausted`` instead of silently truncating.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence


class PrecisionExhausted(Exception):
    """A result digit or valuation is not determined by the inputs' windows."""


def is_odd_prime(q: int) -> bool:
    if q < 3 or q % 2 == 0:
        return False
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def validate_base(q: int) -> int:
    if not is_odd_prime(q):
        raise ValueError(f"base must be an odd prime, got {q}")
    return q


def _valuation_int(n: int, q: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def rational_valuation(x: Fraction, q: int) -> int:
    """q-adic valuation of a nonzero rational."""
    return _valuation_int(x.numerator, q) - _valuation_int(x.denominator, q)


def _min_known(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class PadicScalar:
    """An element of Q_q known exactly up to (optionally) a digit window end."""

    q: int
    value: Fraction
    known_to: Optional[int] = None  # None: all digits known

    def __post_init__(self):
        validate_base(self.q)
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, q: int) -> "PadicScalar":
        return cls(q, Fraction(0))

    @classmethod
    def from_integer(cls, q: int, n: int) -> "PadicScalar":
        return cls(q, Fraction(n))

    @classmethod
    def from_digits(cls, q: int, lo: int, digits: Sequence[int]) -> "PadicScalar":
        """Scalar with the given digits on exponents [lo, lo+len(digits));
        digits above the window are unknown."""
        validate_base(q)
        for d in digits:
            if not 0 <= d < q:
                raise ValueError(f"digit {d} out of range [0, {q})")
        value = sum(Fraction(d) * Fraction(q) ** (lo + j) for j, d in enumerate(digits))
        return cls(q, Fraction(value), lo + len(digits))

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """Exactly zero (all digits known to vanish)."""
        return self.value == 0 and self.known_to is None

    @property
    def lo(self) -> int:
        """Valuation: exponent of the lowest nonzero digit."""
        if self.value == 0:
            if self.known_to is None:
                raise ValueError("zero has no valuation")
            raise PrecisionExhausted(
                f"all digits below exponent {self.known_to} vanish; "
                "valuation not determined by the window"
            )
        v = rational_valuation(self.value, self.q)
        if self.known_to is not None and v >= self.known_to:
            raise PrecisionExhausted(
                f"valuation >= window end {self.known_to}; not determined"
            )
        return v

    def norm(self) -> Fraction:
        """|x| = q^(-valuation), 0 for exact zero."""
        if self.value == 0 and self.known_to is None:
            return Fraction(0)
        v = self.lo
        return Fraction(1, self.q**v) if v >= 0 else Fraction(self.q ** (-v))

    def digits(self, lo: int, hi: int) -> tuple[int, ...]:
        """Digits at exponents [lo, hi). Raises if the window exceeds what is known."""
        if hi < lo:
            raise ValueError("empty window must have hi >= lo")
        if self.known_to is not None and hi > self.known_to:
            raise PrecisionExhausted(
                f"digits up to exponent {hi} requested, known only below {self.known_to}"
            )
        if self.value == 0:
            return (0,) * (hi - lo)
        v = rational_valuation(self.value, self.q)
        if lo >= hi:
            return ()
        if hi <= v:
            return (0,) * (hi - lo)
        # unit part u = value / q^v has denominator coprime to q
        u = self.value / Fraction(self.q) ** v
        k = hi - v
        m = (u.numerator * pow(u.denominator, -1, self.q**k)) % self.q**k
        out = []
        for j in range(lo, hi):
            if j < v:
                out.append(0)
            else:
                out.append((m // self.q ** (j - v)) % self.q)
        return tuple(out)

    def digit_window(self) -> tuple[int, tuple[int, ...]]:
        """Canonical (lo, digits) pair over the known window (windowed scalars only)."""
        if self.known_to is None:
            raise ValueError("fully known scalar has no finite window")
        if self.value == 0:
            return self.known_to, ()
        v = self.lo
        return v, self.digits(v, self.known_to)

    # -- ring operations ---------------------------------------------------

    def _check_same_base(self, other: "PadicScalar") -> None:
        if self.q != other.q:
            raise ValueError(f"mixed bases {self.q} and {other.q}")

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_same_base(other)
        return PadicScalar(self.q, self.value + other.value,
                           _min_known(self.known_to, other.known_to))

    def __neg__(self) -> "PadicScalar":
        return PadicScalar(self.q, -self.value, self.known_to)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return self + (-other)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_same_base(other)
        # (a + q^ka O)(b + q^kb O) is known mod q^min(v(a)+kb, v(b)+ka, ka+kb)
        known = None
        for x, k in ((self, other.known_to), (other, self.known_to)):
            if k is None:
                continue
            if x.value == 0:
                if x.known_to is not None:
                    known = _min_known(known, x.known_to + k)
                # exact zero: that factor contributes nothing unknown
            else:
                known = _min_known(known, rational_valuation(x.value, x.q) + k)
        if self.known_to is not None and other.known_to is not None:
            known = _min_known(known, self.known_to + other.known_to)
        if (self.is_zero or other.is_zero):
            return PadicScalar.zero(self.q)
        return PadicScalar(self.q, self.value * other.value, known)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return (self.q, self.value, self.known_to) == (other.q, other.value, other.known_to)

    def __hash__(self) -> int:
        return hash((self.q, self.value, self.known_to))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"PadicScalar(q={self.q}, 0)"
        if self.known_to is None:
            return f"PadicScalar(q={self.q}, {self.value})"
        if self.value == 0:
            return f"PadicScalar(q={self.q}, O(q^{self.known_to}))"
        lo, ds = self.digit_window()
        return f"PadicScalar(q={self.q}, digits{ds}@q^{lo})"


def norm(x: PadicScalar) -> Fraction:
    return x.norm()


def embed_rational(q: int, b: int, c: int = 1,
                   window: Optional[int] = None) -> PadicScalar:
    """Embed b/c into Q_q.  The expansion is fully known; ``window`` caps
    the known digits instead (for building deliberately truncated scalars)."""
    validate_base(q)
    if c == 0:
        raise ValueError("denominator must be nonzero")
    x = PadicScalar(q, Fraction(b, c))
    if window is None:
        return x
    if x.value != 0 and rational_valuation(x.value, q) >= window:
        raise ValueError("window ends at or below the valuation; nothing is known")
    v = rational_valuation(x.value, q) if x.value != 0 else window
    return PadicScalar.from_digits(q, v, x.digits(v, window))


def character_exponent(x: PadicScalar) -> Fraction:
    """The rational e with chi(x) = exp(2*pi*i*e), reduced mod 1.

    Only the negative-exponent digits contribute; requires them known.
    """
    if x.value == 0:
        if x.known_to is not None and x.known_to < 0:
            raise PrecisionExhausted("digits at negative exponents unknown")
        return Fraction(0)
    v = rational_valuation(x.value, x.q)
    if v >= 0:
        return Fraction(0)
    if x.known_to is not None and x.known_to < 0:
        raise PrecisionExhausted("digits at negative exponents unknown")
    ds = x.digits(v, 0)
    e = sum(Fraction(d, x.q ** (-(v + j))) for j, d in enumerate(ds))
    return e % 1


def character_eval(x: PadicScalar) -> complex:
    """The additive character: trivial on O, nontrivial on q^(-1) O."""
    e = character_exponent(x)
    if e == 0:
        return 1.0 + 0.0j
    return cmath.exp(2j * cmath.pi * float(e))


@dataclass(frozen=True)
class PadicPoint:
    """A point of Q_q^2 with the max norm."""

    x: PadicScalar
    y: PadicScalar

    def __post_init__(self):
        if self.x.q != self.y.q:
            raise ValueError("components must share the base")

    def norm(self) -> Fraction:
        return max(self.x.norm(), self.y.norm())

    def __add__(self, other: "PadicPoint") -> "PadicPoint":
        return PadicPoint(self.x + other.x, self.y + other.y)

    def __neg__(self) -> "PadicPoint":
        return PadicPoint(-self.x, -self.y)
