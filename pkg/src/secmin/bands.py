"""Common divisors along the middle of a row of Pascal's triangle.

For a row n, the band function min_band(n) is the smallest b such that all
C(n, m) with b < m < n - b share a nontrivial divisor.  It coincides with the
prime-power gap: n minus the largest prime power <= n.  The identity, the
quarter bound gap(n) <= n/4 (n >= 30), and the per-prime band identity are
verified over ranges here; partial-sum growth is reported, never asserted.

Range verifications are deterministic and embarrassingly parallel over n; the
implementations are serial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import DigitExpansion, PrimePowerSieve, build_sieve, is_prime
from .errors import ParameterError, VerificationError


@dataclass(frozen=True)
class BandGcd:
    """Exact GCD of {C(n, m) : band_lo < m < band_hi}; gcd = 0 for an empty band."""

    n: int
    band_lo: int
    band_hi: int
    gcd: int

    @property
    def empty(self) -> bool:
        return self.band_lo + 1 >= self.band_hi


@dataclass(frozen=True)
class BandGapRecord:
    """b(n) and c(n) side by side; band is None when only the gap was computed."""

    n: int
    band: int | None
    gap: int
    witness_prime_power: int


@dataclass(frozen=True)
class GapSumReport:
    """Observed growth of the gap function up to n, scaled by n^exponent.

    ratio = (sum of gaps for 2 <= j <= n) / n^exponent; max_ratio is the
    largest pointwise gap(j)/j^exponent with argmax the first j attaining it.
    Report-only data: the comparison constants are not pinned by theory.
    """

    n: int
    partial_sum: int
    exponent: float
    ratio: float
    max_ratio: float
    argmax: int


@dataclass(frozen=True)
class ExcessBound:
    """Cap on the excess dimension of a linear subspace inside a secant variety.

    row is the Pascal row m+g-1-d whose band controls the bound, band its
    min_band value.  When the hypothesis band <= m+2g-1-2d fails nothing is
    concluded (max_excess None); when it holds, max_excess = band - 1, with
    None again for band = 0 since then no positive excess is allowed.
    """

    row: int
    band: int
    hypothesis_holds: bool
    max_excess: int | None


def band_gcd(n: int, b: int) -> BandGcd:
    """Exact GCD of the binomials C(n, m) over the open band b < m < n - b.

    Scans only up to the middle (the band is symmetric) and stops early once
    the running GCD reaches 1.  An empty band yields gcd 0.
    """
    if n < 2:
        raise ParameterError(f"band_gcd needs n >= 2, got {n}")
    if b < 0:
        raise ParameterError(f"band start must be >= 0, got {b}")
    lo, hi = b + 1, n - b - 1
    if lo > hi:
        return BandGcd(n, b, n - b, 0)
    g = 0
    c = math.comb(n, lo)
    gcd = math.gcd
    for m in range(lo, n // 2 + 1):
        g = gcd(g, c)
        if g == 1:
            break
        c = c * (n - m) // (m + 1)
    return BandGcd(n, b, n - b, g)


def min_band(n: int) -> int:
    """Smallest b >= 0 whose band of binomials has a common divisor, by ascending scan.

    An empty band satisfies the condition vacuously, so the scan is total; for
    every n checked the answer appears strictly before the band empties.
    """
    b = 0
    while True:
        if band_gcd(n, b).gcd != 1:
            return b
        b += 1


def prime_power_gap(n: int, sieve: PrimePowerSieve) -> BandGapRecord:
    """n minus the largest prime power <= n, with the witness prime power."""
    if n < 2:
        raise ParameterError(f"prime_power_gap needs n >= 2, got {n}")
    witness = sieve.largest_prime_power(n)
    return BandGapRecord(n, None, n - witness, witness)


def prime_band(n: int, p: int) -> int:
    """Largest b <= n/2 such that p does not divide C(n, b).

    Digit-only computation: C(n, b) is prime to p exactly when every base-p
    digit of b is at most the matching digit of n, so this maximizes a
    digit-dominated integer under the cap n//2.
    """
    if n < 2:
        raise ParameterError(f"prime_band needs n >= 2, got {n}")
    if not is_prime(p):
        raise ParameterError(f"p must be prime, got {p}")
    if p > n:
        raise ParameterError(f"prime_band needs p <= n, got p={p}, n={n}")
    nd = DigitExpansion.from_int(n, p).digits
    cap = n // 2
    cd = list(DigitExpansion.from_int(cap, p).digits)
    cd += [0] * (len(nd) - len(cd))
    best = -1
    for t in range(len(nd) - 1, -1, -1):
        # branch below the cap at digit t, cap's digits above, n's digits below
        x = min(cd[t] - 1, nd[t])
        if x >= 0:
            val = x * p**t
            for j in range(t + 1, len(nd)):
                val += cd[j] * p**j
            for j in range(t):
                val += nd[j] * p**j
            if val > best:
                best = val
        if cd[t] > nd[t]:
            break  # the tight prefix cannot extend past this digit
    else:
        best = max(best, cap)  # the cap itself is digit-dominated
    return best


def verify_band_gap_identity(range_hi: int, sieve: PrimePowerSieve | None = None) -> list[BandGapRecord]:
    """Check min_band(n) == gap(n) for every 2 <= n <= range_hi and return the records.

    Raises VerificationError on any mismatch, which would mean a bug here, not
    new mathematics.
    """
    if range_hi < 2:
        raise ParameterError(f"range_hi must be >= 2, got {range_hi}")
    if sieve is None or sieve.limit < range_hi:
        sieve = build_sieve(range_hi)
    records = []
    for n in range(2, range_hi + 1):
        b = min_band(n)
        witness = sieve.largest_prime_power(n)
        c = n - witness
        if b != c:
            raise VerificationError(f"band/gap identity fails at n={n}: band={b}, gap={c}")
        records.append(BandGapRecord(n, b, c, witness))
    return records


def verify_quarter_bound(range_hi: int, sieve: PrimePowerSieve) -> bool:
    """True iff gap(n) <= n/4 for all 30 <= n <= range_hi."""
    if range_hi < 30:
        raise ParameterError(f"quarter bound check needs range_hi >= 30, got {range_hi}")
    if sieve.limit < range_hi:
        raise ParameterError(f"sieve limit {sieve.limit} below range_hi {range_hi}")
    lpp = sieve._lpp  # bulk scan; method-call overhead matters at 10^6
    for n in range(30, range_hi + 1):
        if 4 * (n - lpp[n]) > n:
            return False
    return True


def asymptotic_report(range_hi: int, exponent: float, sieve: PrimePowerSieve | None = None) -> GapSumReport:
    """Partial sums and pointwise maxima of the gap function, scaled by n^exponent."""
    if range_hi < 2:
        raise ParameterError(f"range_hi must be >= 2, got {range_hi}")
    if sieve is None or sieve.limit < range_hi:
        sieve = build_sieve(range_hi)
    total = 0
    max_ratio = -1.0
    argmax = 2
    lpp = sieve._lpp
    for n in range(2, range_hi + 1):
        c = n - lpp[n]
        total += c
        r = c / n**exponent
        if r > max_ratio:
            max_ratio = r
            argmax = n
    return GapSumReport(
        n=range_hi,
        partial_sum=total,
        exponent=exponent,
        ratio=total / range_hi**exponent,
        max_ratio=max_ratio,
        argmax=argmax,
    )


def coprimality_band(a: int, lo: int, hi: int) -> int:
    """GCD of {C(a, b) : lo <= b <= hi}, early-exiting at 1."""
    if not 0 <= lo <= hi <= a:
        raise ParameterError(f"need 0 <= lo <= hi <= a, got a={a}, lo={lo}, hi={hi}")
    g = 0
    c = math.comb(a, lo)
    gcd = math.gcd
    for b in range(lo, hi + 1):
        g = gcd(g, c)
        if g == 1:
            break
        c = c * (a - b) // (b + 1)
    return g


def excess_dimension_bound(genus: int, bundle_degree: int, index: int) -> ExcessBound:
    """Largest admissible excess dimension for linear subspaces of a secant variety.

    Requires bundle_degree > 2*index.  The controlling quantity is the band of
    the Pascal row m+g-1-d: when it is at most m+2g-1-2d, any linear subspace
    of the d-th secant variety has dimension < d - 1 + band.
    """
    g, m, d = genus, bundle_degree, index
    if g < 0 or m < 1 or d < 1:
        raise ParameterError(f"need genus >= 0, degree >= 1, index >= 1, got {g}, {m}, {d}")
    if m <= 2 * d:
        raise ParameterError(f"excess bound needs degree > 2*index, got m={m}, d={d}")
    row = m + g - 1 - d
    band = min_band(row)
    holds = band <= m + 2 * g - 1 - 2 * d
    max_excess = band - 1 if holds and band >= 1 else None
    return ExcessBound(row=row, band=band, hypothesis_holds=holds, max_excess=max_excess)
