"""Exact rational coordinates on the normalized domain [0, 1].

Query points and active-interval endpoints are kept as
:class:`fractions.Fraction` values so that point identity is exact and the
per-point ledger can be keyed by coordinate.  The user's domain only enters
through :func:`coord_denormalize` / :func:`coord_to_domain`.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ArithmeticCapacityError, ContractViolationError


class Coord(Fraction):
    """A Fraction that caches its hash; coordinates key the point ledger."""

    __slots__ = ("_hash",)

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            self._hash = Fraction.__hash__(self)
            return self._hash

    def __repr__(self):
        return f"Coord({self.numerator}, {self.denominator})"


ZERO = Coord(0)
ONE = Coord(1)

# Python ints never wrap; this only bounds runaway memory/time.
MAX_DENOMINATOR_BITS = 16384


def coord(num: int, den: int = 1) -> Coord:
    return Coord(num, den)


def _check_capacity(value: Coord) -> Coord:
    if value.denominator.bit_length() > MAX_DENOMINATOR_BITS:
        raise ArithmeticCapacityError(
            f"coordinate denominator exceeds {MAX_DENOMINATOR_BITS} bits"
        )
    return value


def coord_convex(a: Coord, b: Coord, w_num: int, w_den: int) -> Coord:
    """Return ``w*a + (1-w)*b`` exactly, with ``w = w_num / w_den``."""
    if w_den <= 0 or not 0 <= w_num <= w_den:
        raise ContractViolationError(f"weight {w_num}/{w_den} not in [0, 1]")
    if a > b:
        raise ContractViolationError(f"endpoints out of order: {a} > {b}")
    w = Fraction(w_num, w_den)
    return _check_capacity(Coord(w * a + (1 - w) * b))


def coord_is_dyadic(a: Coord) -> bool:
    d = a.denominator
    return d & (d - 1) == 0


def coord_to_domain(a: Coord, domain_lo: float, domain_hi: float) -> Fraction:
    """Exact user-domain value of a normalized coordinate."""
    lo = Fraction(domain_lo)
    return lo + a * (Fraction(domain_hi) - lo)


def coord_denormalize(a: Coord, domain_lo: float, domain_hi: float) -> float:
    if not domain_lo < domain_hi:
        raise ContractViolationError("domain_lo must be < domain_hi")
    return float(coord_to_domain(a, domain_lo, domain_hi))


def domain_to_coord(x: float, domain_lo: float, domain_hi: float) -> Fraction:
    """Exact normalized position of a user-domain float (used for x*)."""
    lo = Fraction(domain_lo)
    return (Fraction(x) - lo) / (Fraction(domain_hi) - lo)
