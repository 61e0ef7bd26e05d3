"""Pinned desk-scale verification suite.

Each check re-derives its expected values through a route independent of the
implementation it exercises (factorial-valuation tables, reduced closed forms,
random matrices from fixed seeds) and returns a CheckResult; the CLI command
verify-all runs them all and prints one line per check.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from . import arith, bands, bounds, lattice, secant
from .errors import VerificationError

SEED_GRAM = 987001
SEED_FORMS = 987002

FULL = {
    "identity_hi": 3000,
    "prime_power_hi": 3000,
    "quarter_hi": 10**6,
    "kummer_hi": 500,
    "prime_band_hi": 2000,
    "secant_g": 6,
    "secant_d": 6,
    "secant_m": 40,
    "curve_g": 10,
    "curve_m": 50,
    "transference_count": 500,
    "avoidance_count": 200,
    "asymptotic_hi": 10**6,
}

QUICK = {
    "identity_hi": 300,
    "prime_power_hi": 300,
    "quarter_hi": 10**5,
    "kummer_hi": 120,
    "prime_band_hi": 300,
    "secant_g": 3,
    "secant_d": 4,
    "secant_m": 16,
    "curve_g": 5,
    "curve_m": 20,
    "transference_count": 40,
    "avoidance_count": 40,
    "asymptotic_hi": 10**5,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str
    elapsed_ms: int


def _timed(name, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except (VerificationError, AssertionError) as exc:
        detail = str(exc)
        ok = False
    dt = int(1000 * (time.perf_counter() - t0))
    return CheckResult(name=name, ok=ok, detail=detail, elapsed_ms=dt)


def check_band_gap_identity(hi: int) -> str:
    records = bands.verify_band_gap_identity(hi)
    worst = max(records, key=lambda r: r.gap)
    return f"n=2..{hi} all band==gap; largest gap {worst.gap} at n={worst.n}"


def check_prime_power_vanishing(hi: int) -> str:
    sieve = arith.build_sieve(hi)
    count = 0
    for q in range(2, hi + 1):
        if sieve.largest_prime_power(q) == q:
            count += 1
            b = bands.min_band(q)
            if b != 0:
                raise VerificationError(f"band at prime power {q} is {b}, expected 0")
    return f"{count} prime powers <= {hi}, all with band 0"


def check_quarter_bound(hi: int, sieve: arith.PrimePowerSieve | None = None) -> str:
    if sieve is None or sieve.limit < hi:
        sieve = arith.build_sieve(hi)
    if not bands.verify_quarter_bound(hi, sieve):
        raise VerificationError(f"gap(n) > n/4 somewhere in [30, {hi}]")
    return f"gap(n) <= n/4 for 30 <= n <= {hi}"


def check_kummer_legendre(hi: int) -> str:
    """Carry-count valuations against factorial-valuation (Legendre) tables."""
    sieve = arith.build_sieve(hi)
    checked = 0
    for p in sieve.primes():
        fact_val = [0] * (hi + 1)  # fact_val[n] = v_p(n!)
        for n in range(1, hi + 1):
            q, v = n, 0
            while q % p == 0:
                q //= p
                v += 1
            fact_val[n] = fact_val[n - 1] + v
        for n in range(p, hi + 1):
            for m in range(0, n + 1):
                expected = fact_val[n] - fact_val[m] - fact_val[n - m]
                if arith.kummer_valuation(n, m, p) != expected:
                    raise VerificationError(f"valuation mismatch at n={n}, m={m}, p={p}")
                checked += 1
    return f"{checked} valuations agree for n <= {hi}"


def check_prime_band_identity(hi: int) -> str:
    """prime_band(n, p) == n - p^k whenever p^k <= n < 2 p^k (leading digit 1)."""
    sieve = arith.build_sieve(hi)
    primes = sieve.primes()
    checked = 0
    for n in range(2, hi + 1):
        for p in primes:
            if p > n:
                break
            q = p
            while q * p <= n:
                q *= p
            if n < 2 * q:  # leading base-p digit is 1
                if bands.prime_band(n, p) != n - q:
                    raise VerificationError(f"prime band at n={n}, p={p} is not n - p^k")
                checked += 1
    return f"{checked} leading-digit-1 cases match n - p^k for n <= {hi}"


def check_secant_two_oracle(g_hi: int, d_hi: int, m_hi: int) -> str:
    cases = 0
    for g in range(0, g_hi + 1):
        for d in range(1, d_hi + 1):
            for m in range(3, m_hi + 1):
                if 2 * d > m + g - 1:
                    continue
                p = secant.SecantParams(g, m, d)
                closed = secant.degree_closed_form(p)
                oracle = secant.degree_oracle(p)
                if closed != oracle:
                    raise VerificationError(f"degree mismatch at (g={g}, m={m}, d={d})")
                if closed < 1:
                    raise VerificationError(f"degree {closed} < 1 at (g={g}, m={m}, d={d})")
                cases += 1
    return f"{cases} parameter triples, closed form == series oracle"


def check_curve_degree(g_hi: int, m_hi: int) -> str:
    cases = 0
    for g in range(0, g_hi + 1):
        for m in range(3, m_hi + 1):
            expected = m + 2 * g - 2
            if secant.degree_formula(g, m, 1) != expected:
                raise VerificationError(f"curve degree mismatch at (g={g}, m={m})")
            cases += 1
    return f"{cases} curve degrees equal m + 2g - 2"


def random_gram(rng: random.Random, rank: int, spread: int = 2) -> lattice.GramLattice:
    """Random positive-definite integer Gram with entries bounded by rank*spread^2."""
    while True:
        a = [[rng.randint(-spread, spread) for _ in range(rank)] for _ in range(rank)]
        g = [[sum(a[r][i] * a[r][j] for r in range(rank)) for j in range(rank)] for i in range(rank)]
        try:
            return lattice.GramLattice.from_rows(g)
        except Exception:
            continue  # singular draw, redo


NAMED_GRAMS = {
    "identity2": [[1, 0], [0, 1]],
    "hexagonal": [[2, 1], [1, 2]],
    "diag14": [[1, 0], [0, 4]],
}


def check_transference(count: int) -> str:
    printed_holds = 0
    for rows in NAMED_GRAMS.values():
        report = lattice.verify_transference(lattice.GramLattice.from_rows(rows))
        if not report.printed_ok:
            raise VerificationError(f"named example {rows} misses the det-free upper bound")
        printed_holds += 1
    rng = random.Random(SEED_GRAM)
    for i in range(count):
        rank = 2 + (i % 2)  # alternate ranks 2 and 3
        printed_holds += lattice.verify_transference(random_gram(rng, rank)).printed_ok
    return (
        f"{count} random Gram matrices plus named examples satisfy both inequalities"
        f" (det-free upper form additionally holds for {printed_holds} of {count + 3})"
    )


def random_form(rng: random.Random, num_vars: int, degree: int) -> lattice.HomogeneousForm:
    exps = []

    def gen(remaining, slots):
        if slots == 1:
            return [(remaining,)]
        return [(i,) + rest for i in range(remaining + 1) for rest in gen(remaining - i, slots - 1)]

    monomials = gen(degree, num_vars)
    while True:
        terms = {e: rng.randint(-5, 5) for e in monomials if rng.random() < 0.5}
        terms = {e: c for e, c in terms.items() if c}
        if terms:
            return lattice.HomogeneousForm.from_terms(num_vars, terms)


def check_avoidance(count: int) -> str:
    rng = random.Random(SEED_FORMS)
    for i in range(count):
        rank = 2 + (i % 2)
        degree = 1 + (i % 3)
        form = random_form(rng, rank, degree)
        gram = random_gram(rng, rank)
        minima = lattice.successive_minima(gram)
        result = lattice.avoid_hypersurface(form, minima)
        if result.value == 0 or not result.within_bound:
            raise VerificationError(f"avoidance failed for form {form.terms} on {gram.gram}")
    return f"{count} random forms avoided within the norm bound"


def check_bound_consistency() -> str:
    """Extremal-height reduction of the lambda bound, and the discriminant
    coefficient of the dual-height bound for dualizing-sheaf powers."""
    surfaces = [
        bounds.SurfaceData(2, 12, 7.3, 2.1, 1.9, bounds.RATIONAL_FIELD),
        bounds.SurfaceData(3, 20, 11.0, 3.0, 0.5, bounds.NumberFieldData(2, 0, 1, math.log(3))),
        bounds.SurfaceData(4, 18, 5.5, 0.0, 0.0, bounds.NumberFieldData(2, 2, 0, math.log(5))),
    ]
    for s in surfaces:
        m, g, deg = s.degree, s.genus, s.field.degree
        extremal = s.l2 / (2 * m)
        for k in range(2, (m - 1) // 2 + 1):
            got = bounds.lambda_floor(s, k, e_val=extremal)
            dterm = max(secant.degree_formula(g, m, k - 1), 1)
            reduced = s.l2 / (2 * m * deg) - math.log(dterm * (m + g)) / (m * m) - 1
            if not math.isclose(got, reduced, rel_tol=1e-9, abs_tol=1e-12):
                raise VerificationError(f"extremal lambda mismatch at k={k}: {got} vs {reduced}")
    for g, n, k in [(2, 3, 2), (3, 2, 1), (4, 2, 3)]:
        m = 2 * (g - 1) * n
        if (m + g - 1) != (2 * n + 1) * (g - 1):
            raise VerificationError("index identity m+g-1 == (2n+1)(g-1) fails")
        d1, d2 = math.log(3), math.log(11)
        f1 = bounds.NumberFieldData(2, 0, 1, d1)
        f2 = bounds.NumberFieldData(2, 0, 1, d2)
        diff = bounds.omega_mu_floor(g, n, k, 1.25, f1) - bounds.omega_mu_floor(g, n, k, 1.25, f2)
        expected = -(2 * n + 1) * (g - 1) / 2 * (d1 - d2)
        if not math.isclose(diff, expected, rel_tol=1e-9, abs_tol=1e-12):
            raise VerificationError(f"disc coefficient mismatch: {diff} vs {expected}")
    return "extremal-height reduction and disc coefficient identities hold to 1e-9"


def asymptotic_lines(hi: int, sieve: arith.PrimePowerSieve | None = None) -> list[str]:
    """The committed reference format: one line per exponent, repr-formatted floats."""
    if sieve is None or sieve.limit < hi:
        sieve = arith.build_sieve(hi)
    lines = []
    for exponent in (0.535, 23 / 18):
        r = bands.asymptotic_report(hi, exponent, sieve)
        lines.append(
            f"max={r.n} exponent={r.exponent!r} partial_sum={r.partial_sum}"
            f" ratio={r.ratio!r} max_ratio={r.max_ratio!r} argmax={r.argmax}"
        )
    return lines


def report_asymptotics(hi: int) -> str:
    return "; ".join(asymptotic_lines(hi))


def run_all(quick: bool = False) -> list[CheckResult]:
    p = QUICK if quick else FULL
    return [
        _timed("band-gap-identity", lambda: check_band_gap_identity(p["identity_hi"])),
        _timed("prime-power-vanishing", lambda: check_prime_power_vanishing(p["prime_power_hi"])),
        _timed("quarter-bound", lambda: check_quarter_bound(p["quarter_hi"])),
        _timed("valuation-two-oracle", lambda: check_kummer_legendre(p["kummer_hi"])),
        _timed("prime-band-identity", lambda: check_prime_band_identity(p["prime_band_hi"])),
        _timed("secant-two-oracle", lambda: check_secant_two_oracle(p["secant_g"], p["secant_d"], p["secant_m"])),
        _timed("curve-degree", lambda: check_curve_degree(p["curve_g"], p["curve_m"])),
        _timed("transference", lambda: check_transference(p["transference_count"])),
        _timed("avoidance", lambda: check_avoidance(p["avoidance_count"])),
        _timed("bound-consistency", check_bound_consistency),
        _timed("asymptotic-report", lambda: report_asymptotics(p["asymptotic_hi"])),
    ]
