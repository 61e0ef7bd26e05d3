"""Exact integer substrate: binomial coefficients, base-p digits, carry-count
p-adic valuations, and a combined prime / largest-prime-power sieve.

All operations are pure; a sieve is immutable once built and safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError, ResourceLimitError

# Exact rational arithmetic. Fraction already stores lowest terms with a
# positive denominator and never rounds, which is the whole contract.
Rational = Fraction


def binomial(n: int, m: int) -> int:
    """C(n, m) for n >= 0, with the convention C(n, m) = 0 when m < 0 or m > n.

    The out-of-range zero lets degree formulas sum vanishing terms without
    guarding every index.
    """
    if n < 0:
        raise ParameterError(f"binomial needs n >= 0, got n={n}")
    if m < 0 or m > n:
        return 0
    return math.comb(n, m)


def is_prime(n: int) -> bool:
    """Trial-division primality test for machine-scale n."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    if n % 3 == 0:
        return n == 3
    f = 5
    r = math.isqrt(n)
    while f <= r:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


@dataclass(frozen=True)
class DigitExpansion:
    """Base-p expansion of a nonnegative integer, least significant digit first.

    Zero is the empty tuple; otherwise the leading (last) digit is nonzero.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.base):
            raise ParameterError(f"digit base must be prime, got {self.base}")
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ParameterError("digits must lie in [0, base)")
        if self.digits and self.digits[-1] == 0:
            raise ParameterError("leading digit of a nonzero integer must be nonzero")

    @classmethod
    def from_int(cls, n: int, base: int) -> "DigitExpansion":
        if n < 0:
            raise ParameterError(f"cannot expand a negative integer, got {n}")
        if not is_prime(base):
            raise ParameterError(f"digit base must be prime, got {base}")
        digits = []
        while n:
            n, d = divmod(n, base)
            digits.append(d)
        return cls(base, tuple(digits))

    def value(self) -> int:
        total = 0
        for d in reversed(self.digits):
            total = total * self.base + d
        return total


def kummer_valuation(n: int, m: int, p: int) -> int:
    """v_p(C(n, m)) as the number of carries when adding m and n-m in base p.

    O(log_p n); never touches the binomial itself.
    """
    if not is_prime(p):
        raise ParameterError(f"p must be prime, got {p}")
    if m < 0 or m > n:
        raise ParameterError(f"need 0 <= m <= n, got n={n}, m={m}")
    a, b = m, n - m
    carries = 0
    carry = 0
    while a or b or carry:
        carry = 1 if a % p + b % p + carry >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def divides_binomial(n: int, m: int, p: int) -> bool:
    """Whether p divides C(n, m): some base-p digit of m exceeds the matching digit of n."""
    if not is_prime(p):
        raise ParameterError(f"p must be prime, got {p}")
    if m < 0 or m > n:
        raise ParameterError(f"need 0 <= m <= n, got n={n}, m={m}")
    a, b = m, n
    while a:
        if a % p > b % p:
            return True
        a //= p
        b //= p
    return False


class PrimePowerSieve:
    """Primality table plus, for each n, the largest prime power <= n.

    Prime powers are p^k with k >= 1 (so primes themselves count).  The table
    entry for n = 1 is 0: no prime power is <= 1.  Instances are immutable.
    """

    __slots__ = ("limit", "_is_prime", "_lpp")

    def __init__(self, limit: int, is_prime_table: bytearray, lpp: list[int]):
        self.limit = limit
        self._is_prime = is_prime_table
        self._lpp = lpp

    def _check(self, n: int) -> None:
        if n < 1 or n > self.limit:
            raise ParameterError(f"n={n} outside sieve range [1, {self.limit}]")

    def is_prime(self, n: int) -> bool:
        self._check(n)
        return bool(self._is_prime[n])

    def largest_prime_power(self, n: int) -> int:
        """Largest p^k <= n, or 0 for n = 1."""
        self._check(n)
        return self._lpp[n]

    def gap(self, n: int) -> int:
        """n minus the largest prime power <= n; defined for n >= 2."""
        if n < 2:
            raise ParameterError(f"gap needs n >= 2, got {n}")
        self._check(n)
        return n - self._lpp[n]

    def primes(self) -> list[int]:
        t = self._is_prime
        return [i for i in range(2, self.limit + 1) if t[i]]


def build_sieve(limit: int) -> PrimePowerSieve:
    """Build a PrimePowerSieve covering [1, limit]; limit >= 2."""
    if limit < 2:
        raise ParameterError(f"sieve limit must be >= 2, got {limit}")
    try:
        table = bytearray([1]) * (limit + 1)
        table[0] = table[1] = 0
        for p in range(2, math.isqrt(limit) + 1):
            if table[p]:
                start = p * p
                table[start :: p] = bytearray(len(range(start, limit + 1, p)))
        # largest prime power <= n: mark every prime power, then prefix-max
        lpp = [0] * (limit + 1)
        for p in range(2, limit + 1):
            if table[p]:
                q = p
                while q <= limit:
                    lpp[q] = q
                    q *= p
        best = 0
        for n in range(2, limit + 1):
            if lpp[n] > best:
                best = lpp[n]
            else:
                lpp[n] = best
    except MemoryError as exc:
        raise ResourceLimitError(f"sieve limit {limit} exhausted memory") from exc
    return PrimePowerSieve(limit, table, lpp)
