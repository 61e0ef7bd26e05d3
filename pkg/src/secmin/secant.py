"""Degrees of secant varieties of an embedded smooth projective curve.

Two independent routes to the same integer: a closed binomial sum, and the
coefficient extraction of an inverse total Chern series (the Segre series)
computed with exact rationals in a truncated Chow ring of the d-th symmetric
product.  The ring is generated by the point-divisor class x and the
theta-restriction class theta, with x^i theta^j = 0 once i + j exceeds the
symmetric-product dimension or j exceeds the genus, and with the evaluation
x^(d-a) theta^a |-> a! C(g, a) in top degree.

Everything here is pure and immutable; parameter sweeps parallelize trivially.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .arith import binomial
from .errors import ParameterError, VerificationError


@dataclass(frozen=True)
class SecantParams:
    """Genus g, line-bundle degree m, and secant index d.

    The embedding uses the m + 2g - 2 sections of the twist by the canonical
    bundle, so the ambient projective space has dimension m + g - 2.  The
    closed degree formula applies when 2d <= m + g - 1 (the secant variety
    then has dimension 2d - 1) and m > 2.
    """

    genus: int
    bundle_degree: int
    index: int

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ParameterError(f"genus must be >= 0, got {self.genus}")
        if self.bundle_degree < 1:
            raise ParameterError(f"bundle degree must be >= 1, got {self.bundle_degree}")
        if self.index < 1:
            raise ParameterError(f"secant index must be >= 1, got {self.index}")

    @property
    def sections(self) -> int:
        """Rank m + g - 1 of the space of sections cutting out the embedding."""
        return self.bundle_degree + self.genus - 1

    @property
    def series_exponent(self) -> int:
        """The exponent A = m + g - 1 - d appearing in the Chern series (1+xt)^-A."""
        return self.sections - self.index

    @property
    def formula_applies(self) -> bool:
        return 2 * self.index <= self.sections and self.bundle_degree > 2

    def require_valid(self) -> None:
        if self.bundle_degree <= 2:
            raise ParameterError(f"bundle degree must exceed 2, got {self.bundle_degree}")
        if 2 * self.index > self.sections:
            raise ParameterError(
                f"need 2d <= m+g-1: d={self.index}, m+g-1={self.sections}"
            )


@dataclass(frozen=True)
class Truncation:
    """Monomials x^i theta^j survive only when i + j <= total_degree and j <= theta_cap."""

    total_degree: int
    theta_cap: int

    def keeps(self, i: int, j: int) -> bool:
        return i + j <= self.total_degree and j <= self.theta_cap


_ZERO = Fraction(0)
_ONE = Fraction(1)


class ChowElement:
    """Exact-rational polynomial in x and theta modulo the truncation relations."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, trunc: Truncation, coeffs: dict[tuple[int, int], Fraction] | None = None):
        self.trunc = trunc
        kept = {}
        if coeffs:
            for (i, j), c in coeffs.items():
                if c and trunc.keeps(i, j):
                    kept[(i, j)] = Fraction(c)
        self.coeffs = kept

    @classmethod
    def zero(cls, trunc: Truncation) -> "ChowElement":
        return cls(trunc)

    @classmethod
    def unit(cls, trunc: Truncation) -> "ChowElement":
        return cls(trunc, {(0, 0): _ONE})

    @classmethod
    def monomial(cls, trunc: Truncation, i: int, j: int, c: Fraction | int = 1) -> "ChowElement":
        return cls(trunc, {(i, j): Fraction(c)})

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), _ZERO)

    @property
    def is_unit(self) -> bool:
        return self.coeffs == {(0, 0): _ONE}

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "ChowElement") -> "ChowElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k, _ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ChowElement(self.trunc, out)

    def __neg__(self) -> "ChowElement":
        return ChowElement(self.trunc, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "ChowElement") -> "ChowElement":
        return self + (-other)

    def __mul__(self, other: "ChowElement") -> "ChowElement":
        keeps = self.trunc.keeps
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if keeps(i, j):
                    key = (i, j)
                    s = out.get(key, _ZERO) + c1 * c2
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        return ChowElement(self.trunc, out)

    def scale(self, c: Fraction | int) -> "ChowElement":
        c = Fraction(c)
        if not c:
            return ChowElement(self.trunc)
        return ChowElement(self.trunc, {k: v * c for k, v in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChowElement) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (i, j), c in sorted(self.coeffs.items()):
            mono = "".join(filter(None, [f"x^{i}" if i else "", f"th^{j}" if j else ""])) or "1"
            parts.append(f"{c}*{mono}")
        return " + ".join(parts)


class ChowSeries:
    """Power series in t with ChowElement coefficients, truncated after t^total_degree."""

    __slots__ = ("trunc", "terms")

    def __init__(self, trunc: Truncation, terms: list[ChowElement]):
        top = trunc.total_degree
        padded = list(terms[: top + 1])
        while len(padded) <= top:
            padded.append(ChowElement.zero(trunc))
        self.trunc = trunc
        self.terms = tuple(padded)

    @classmethod
    def unit(cls, trunc: Truncation) -> "ChowSeries":
        return cls(trunc, [ChowElement.unit(trunc)])

    def coefficient(self, k: int) -> ChowElement:
        return self.terms[k]

    def __mul__(self, other: "ChowSeries") -> "ChowSeries":
        top = self.trunc.total_degree
        out = [ChowElement.zero(self.trunc) for _ in range(top + 1)]
        for a, ca in enumerate(self.terms):
            if ca.is_zero:
                continue
            for b in range(top + 1 - a):
                cb = other.terms[b]
                if not cb.is_zero:
                    out[a + b] = out[a + b] + ca * cb
        return ChowSeries(self.trunc, out)

    def inverse(self) -> "ChowSeries":
        """Truncated multiplicative inverse; the constant term must be the ring unit."""
        if not self.terms[0].is_unit:
            raise ParameterError("series inverse needs unit constant term")
        top = self.trunc.total_degree
        inv = [ChowElement.unit(self.trunc)]
        for k in range(1, top + 1):
            acc = ChowElement.zero(self.trunc)
            for j in range(1, k + 1):
                cj = self.terms[j]
                if not cj.is_zero:
                    acc = acc + cj * inv[k - j]
            inv.append(-acc)
        return ChowSeries(self.trunc, inv)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChowSeries) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        return " , ".join(f"t^{k}: {e!r}" for k, e in enumerate(self.terms))


def degree_formula(genus: int, bundle_degree: int, index: int) -> int:
    """The raw closed sum for the secant degree, with no dimension-range check.

    Vanishing binomials make the sum evaluate to 0 beyond the range where the
    secant variety has the expected dimension; index 0 gives 1.
    """
    g, m, d = genus, bundle_degree, index
    if g < 0 or d < 0:
        raise ParameterError(f"need genus >= 0 and index >= 0, got {g}, {d}")
    return sum(binomial(m + g - 1 - d - a, d - a) * binomial(g, a) for a in range(min(d, g) + 1))


def degree_closed_form(p: SecantParams) -> int:
    """Secant-variety degree by the closed binomial sum, preconditions enforced."""
    p.require_valid()
    return degree_formula(p.genus, p.bundle_degree, p.index)


def chern_series(p: SecantParams, trunc: Truncation | None = None) -> ChowSeries:
    """Total Chern series (1+xt)^(-A) exp(-t theta / (1+xt)) of the dual secant bundle.

    The binomial factor expands with generalized binomial coefficients; the
    exponential is a finite sum because every term of its argument carries
    t * theta, which is nilpotent under the truncation.
    """
    p.require_valid()
    if trunc is None:
        trunc = Truncation(p.index, p.genus)
    top = trunc.total_degree
    a = p.series_exponent

    # (1+xt)^(-A) = sum_i (-1)^i C(A+i-1, i) x^i t^i
    binom_part = ChowSeries(
        trunc,
        [ChowElement.monomial(trunc, i, 0, (-1) ** i * binomial(a + i - 1, i)) for i in range(top + 1)],
    )

    # u = -t theta/(1+xt) = sum_i (-1)^(i+1) x^i theta t^(i+1)
    u_terms = [ChowElement.zero(trunc)]
    for i in range(top):
        u_terms.append(ChowElement.monomial(trunc, i, 1, (-1) ** (i + 1)))
    u = ChowSeries(trunc, u_terms)

    exp_u = ChowSeries.unit(trunc)
    power = ChowSeries.unit(trunc)
    for k in range(1, min(top, trunc.theta_cap) + 1):
        power = power * u
        scaled = ChowSeries(trunc, [e.scale(Fraction(1, factorial(k))) for e in power.terms])
        exp_u = ChowSeries(trunc, [x + y for x, y in zip(exp_u.terms, scaled.terms)])

    return binom_part * exp_u


def segre_series(c: ChowSeries) -> ChowSeries:
    """Inverse of a total Chern series; the contract segre * chern = 1 is exact."""
    return c.inverse()


def pushforward_degree(e: ChowElement, p: SecantParams) -> Fraction:
    """Evaluate a Chow element on the d-th symmetric product.

    Monomials x^i theta^j with i + j = d contribute coeff * j! * C(g, j);
    all others push forward to zero.
    """
    total = _ZERO
    d, g = p.index, p.genus
    for (i, j), c in e.coeffs.items():
        if i + j == d:
            total += c * factorial(j) * comb(g, j)
    return total


def degree_oracle(p: SecantParams, pad: int = 0) -> int:
    """Secant-variety degree via the Segre series, independent of the closed sum.

    Inverts the Chern series, extracts the t^d coefficient, and pushes it
    forward; pad widens the truncation to exercise soundness.  A non-integral
    or negative push-forward means the series arithmetic is broken.
    """
    p.require_valid()
    if pad < 0:
        raise ParameterError(f"pad must be >= 0, got {pad}")
    trunc = Truncation(p.index + pad, p.genus)
    s = segre_series(chern_series(p, trunc))
    value = pushforward_degree(s.coefficient(p.index), p)
    if value.denominator != 1 or value < 0:
        raise VerificationError(
            f"push-forward of the top Segre class is not a nonnegative integer: {value}"
        )
    return int(value)


def restricted_segre(a: int, i: int) -> int:
    """Coefficient C(a, i) of x^i in (1+xt)^a, the Segre series on a fixed fiber."""
    if a < 1:
        raise ParameterError(f"fiber exponent must be >= 1, got {a}")
    if i < 0:
        raise ParameterError(f"index must be >= 0, got {i}")
    return binomial(a, i)
