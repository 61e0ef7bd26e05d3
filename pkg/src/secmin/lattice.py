"""Desk-scale laboratory for small integer lattices given by Gram matrices.

Exact successive minima by bounded enumeration, exact rational dual Gram
matrices, minimal covolumes of primitive sublattices with a Minkowski-certified
search radius, a two-sided transference check of minima against dual
sublattice heights, and grid avoidance of hypersurfaces.

Everything is exact except the final logarithms: squared minima are integers,
squared covolumes are rationals, and comparisons in tests can therefore be
made on the exact squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product

from .bounds import RATIONAL_FIELD, NumberFieldData, ball_volume_log, transference_constant
from .errors import ParameterError, ResourceLimitError, VerificationError

MAX_RANK = 6
HEIGHT_MAX_RANK = 4
DEFAULT_BUDGET = 2_000_000
LOG_TOLERANCE = 1e-9


def _int_det(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class GramLattice:
    """Full-rank integer lattice described by its positive-definite Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.gram)
        if n < 1 or n > MAX_RANK:
            raise ParameterError(f"rank must be in [1, {MAX_RANK}], got {n}")
        for row in self.gram:
            if len(row) != n or any(not isinstance(x, int) for x in row):
                raise ParameterError("Gram matrix must be square with integer entries")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ParameterError("Gram matrix must be symmetric")
        for k in range(1, n + 1):
            minor = _int_det([[self.gram[i][j] for j in range(k)] for i in range(k)])
            if minor <= 0:
                raise ParameterError(f"leading principal minor {k} is {minor}, not positive")

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> "GramLattice":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return _int_det([list(r) for r in self.gram])

    def norm2(self, v: tuple[int, ...]) -> int:
        g = self.gram
        return sum(v[i] * g[i][j] * v[j] for i in range(self.rank) for j in range(self.rank))

    def pair(self, v: tuple[int, ...], w: tuple[int, ...]) -> int:
        g = self.gram
        return sum(v[i] * g[i][j] * w[j] for i in range(self.rank) for j in range(self.rank))


@dataclass(frozen=True)
class RationalGram:
    """Exact rational Gram matrix, used for dual lattices."""

    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MinimaProfile:
    """Successive minima with independent witnesses, norms in ascending order.

    sq_minima are the exact squared norms; log_minima their half-logs.  The
    witnesses realize the minima and are linearly independent, with ties
    broken by lexicographic coordinate order.
    """

    lattice: GramLattice
    sq_minima: tuple[int, ...]
    log_minima: tuple[float, ...]
    witnesses: tuple[tuple[int, ...], ...]

    @property
    def log_max(self) -> float:
        return self.log_minima[-1]


@dataclass(frozen=True)
class SublatticeHeightTable:
    """Minimal squared covolumes of primitive rank-p sublattices, p = 1..rank."""

    lattice: GramLattice
    covol2: tuple[Fraction, ...]
    log_heights: tuple[float, ...]

    def height(self, p: int) -> float:
        if not 1 <= p <= self.lattice.rank:
            raise ParameterError(f"p must be in [1, {self.lattice.rank}], got {p}")
        return self.log_heights[p - 1]


@dataclass(frozen=True)
class TransferenceRow:
    """One rank p of the two-sided minima/dual-height comparison.

    upper = constant + lower + log det is the provable bound; printed_upper
    omits the log det shift and is reported because it is the form the
    two-sided statement is usually quoted in (it is exact for det = 1 and
    falsifiable otherwise, e.g. on diag(3, 3)).
    """

    p: int
    lower: float
    minima_sum: float
    upper: float
    printed_upper: float

    @property
    def ok(self) -> bool:
        return (
            self.lower <= self.minima_sum + LOG_TOLERANCE
            and self.minima_sum <= self.upper + LOG_TOLERANCE
        )

    @property
    def printed_ok(self) -> bool:
        return self.minima_sum <= self.printed_upper + LOG_TOLERANCE


@dataclass(frozen=True)
class TransferenceReport:
    lattice: GramLattice
    constant: float
    rows: tuple[TransferenceRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def printed_ok(self) -> bool:
        return all(r.printed_ok for r in self.rows)


def _ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """G = L D L^T with unit lower-triangular L; pivots positive iff G is positive definite."""
    n = len(gram)
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        acc = Fraction(gram[i][i])
        for k in range(i):
            acc -= d[k] * mu[k][i] * mu[k][i]
        if acc <= 0:
            raise ParameterError("matrix is not positive definite")
        d[i] = acc
        for j in range(i + 1, n):
            s = Fraction(gram[i][j])
            for k in range(i):
                s -= d[k] * mu[k][i] * mu[k][j]
            mu[i][j] = s / acc
    return d, mu


def short_vectors(gram, bound2, budget: int = DEFAULT_BUDGET) -> list[tuple[Fraction, tuple[int, ...]]]:
    """All nonzero v with v.G.v <= bound2, one of each +-pair, sorted by (norm^2, coords).

    Recursive descent on the LDL decomposition; float square roots only bracket
    the integer windows, membership is decided exactly.  Raises when the step
    budget is exceeded.
    """
    n = len(gram)
    d, mu = _ldl(gram)
    bound = Fraction(bound2)
    if bound < 0:
        return []
    out: list[tuple[Fraction, tuple[int, ...]]] = []
    coords = [0] * n
    steps = 0

    def descend(level: int, rem: Fraction) -> None:
        nonlocal steps
        if level < 0:
            v = tuple(coords)
            for c in v:
                if c > 0:
                    out.append((bound - rem, v))
                    return
                if c < 0:
                    return
            return
        c = Fraction(0)
        row = mu[level]
        for j in range(level + 1, n):
            if coords[j]:
                c += row[j] * coords[j]
        r = math.sqrt(rem / d[level]) if rem > 0 else 0.0
        lo = math.floor(-c - r) - 1
        hi = math.ceil(-c + r) + 1
        for x in range(lo, hi + 1):
            steps += 1
            if steps > budget:
                raise ResourceLimitError(
                    f"enumeration budget {budget} exceeded at radius^2 = {bound2}"
                )
            t = d[level] * (x + c) ** 2
            if t <= rem:
                coords[level] = x
                descend(level - 1, rem - t)
        coords[level] = 0

    descend(n - 1, bound)
    out.sort()
    return out


def _extends_rank(rows: list[list[Fraction]], v: tuple[int, ...]) -> bool:
    """Echelon-update independence test; appends the reduced row when independent."""
    work = [Fraction(x) for x in v]
    for row in rows:
        pivot = next(i for i, x in enumerate(row) if x)
        if work[pivot]:
            f = work[pivot] / row[pivot]
            for i in range(pivot, len(work)):
                work[i] -= f * row[i]
    if any(work):
        rows.append(work)
        return True
    return False


def successive_minima(lat: GramLattice, budget: int = DEFAULT_BUDGET) -> MinimaProfile:
    """Exact successive minima by exhaustive enumeration plus greedy witness selection.

    The radius is the smaller of the largest Gram diagonal entry (the basis
    itself gives rank-many independent vectors) and the Minkowski second
    theorem bound (2^n/B_n)^2 det, valid because squared norms of an integer
    Gram lattice are at least 1.  Greedy selection of independent vectors in
    (norm, lex) order realizes every minimum exactly.
    """
    n = lat.rank
    max_diag = max(lat.gram[i][i] for i in range(n))
    mink = (4.0**n) * math.exp(-2 * ball_volume_log(n)) * lat.det
    bound2 = min(max_diag, math.ceil(mink * (1 + 1e-9)))
    try:
        return successive_minima_at_radius(lat, bound2, budget)
    except VerificationError:
        # float slop in the Minkowski radius; the diagonal bound is exact
        return successive_minima_at_radius(lat, max_diag, budget)


def successive_minima_at_radius(lat: GramLattice, bound2: int, budget: int = DEFAULT_BUDGET) -> MinimaProfile:
    vecs = short_vectors(lat.gram, bound2, budget)
    chosen: list[tuple[Fraction, tuple[int, ...]]] = []
    rows: list[list[Fraction]] = []
    for q2, v in vecs:
        if _extends_rank(rows, v):
            chosen.append((q2, v))
            if len(chosen) == lat.rank:
                break
    if len(chosen) < lat.rank:
        raise VerificationError(f"radius^2 {bound2} missed independent vectors, rank {lat.rank}")
    sq = tuple(int(q2) for q2, _ in chosen)
    return MinimaProfile(
        lattice=lat,
        sq_minima=sq,
        log_minima=tuple(0.5 * math.log(q) for q in sq),
        witnesses=tuple(v for _, v in chosen),
    )


def _fraction_inverse(entries: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(entries)
    aug = [[Fraction(entries[i][j]) for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise ParameterError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def dual_lattice(lat: GramLattice | RationalGram) -> RationalGram:
    """Gram matrix of the metric dual in the dual basis: the exact inverse Gram."""
    if isinstance(lat, GramLattice):
        entries = [[Fraction(x) for x in row] for row in lat.gram]
    else:
        entries = [[Fraction(x) for x in row] for row in lat.entries]
    inv = _fraction_inverse(entries)
    return RationalGram(tuple(tuple(row) for row in inv))


def _adjugate_lattice(lat: GramLattice) -> GramLattice:
    """The dual rescaled by det: an integer Gram lattice with the dual's geometry."""
    det = lat.det
    inv = _fraction_inverse([[Fraction(x) for x in row] for row in lat.gram])
    rows = []
    for row in inv:
        scaled = [x * det for x in row]
        assert all(s.denominator == 1 for s in scaled)
        rows.append([int(s) for s in scaled])
    return GramLattice.from_rows(rows)


def _saturated_covol2(lat: GramLattice, subset: list[tuple[int, ...]]) -> Fraction | None:
    """Squared covolume of the saturation of the span of the given vectors.

    det(M G M^T) over the squared index of the span inside its saturation,
    the index being the gcd of the maximal minors of the coordinate matrix.
    None when the vectors are dependent.
    """
    p = len(subset)
    n = lat.rank
    g = lat.gram
    gv = [[sum(g[i][j] * v[j] for j in range(n)) for i in range(n)] for v in subset]
    mgm = [[sum(subset[a][i] * gv[b][i] for i in range(n)) for b in range(p)] for a in range(p)]
    d = _int_det(mgm)
    if d == 0:
        return None
    idx = 0
    for cols in combinations(range(n), p):
        minor = _int_det([[v[c] for c in cols] for v in subset])
        idx = math.gcd(idx, minor)
    return Fraction(d, idx * idx)


def _min_primitive_covol2(lat: GramLattice, p: int, minima: MinimaProfile, budget: int) -> Fraction:
    """Minimal squared covolume over primitive rank-p sublattices, certified.

    Start from the saturation of the first p minima witnesses (squared
    covolume U).  Any sublattice at least as good has p independent vectors
    of squared-norm product at most (2^p/B_p)^2 U (Minkowski's second theorem
    on the sublattice, with all minima >= the lattice's first minimum), hence
    its last one inside radius^2 (2^p/B_p)^2 U / lambda_1^(2(p-1)); saturating
    independent p-subsets of that ball therefore reaches every candidate.
    """
    u = _saturated_covol2(lat, list(minima.witnesses[:p]))
    assert u is not None
    factor2 = (4.0**p) * math.exp(-2 * ball_volume_log(p))
    lam1 = minima.sq_minima[0]
    r2 = math.ceil(factor2 * u / lam1 ** (p - 1) * (1 + 1e-6))
    vecs = short_vectors(lat.gram, r2, budget)
    qs = [q2 for q2, _ in vecs]
    vs = [v for _, v in vecs]
    best = u
    prod_cap = factor2 * float(best) * (1 + 1e-6)

    idx: list[int] = []
    examined = 0

    def choose(start: int, prod: float) -> None:
        nonlocal best, prod_cap, examined
        if len(idx) == p:
            examined += 1
            if examined > budget:
                raise ResourceLimitError(f"sublattice search budget {budget} exceeded")
            cv = _saturated_covol2(lat, [vs[i] for i in idx])
            if cv is not None and cv < best:
                best = cv
                prod_cap = factor2 * float(best) * (1 + 1e-6)
            return
        for i in range(start, len(vs)):
            np = prod * float(qs[i])
            if np > prod_cap:
                return  # qs ascend, so later choices only grow
            idx.append(i)
            choose(i + 1, np)
            idx.pop()

    choose(0, 1.0)
    return best


def sublattice_heights(lat: GramLattice, budget: int = DEFAULT_BUDGET) -> SublatticeHeightTable:
    """Minimal log-covolumes of primitive sublattices of every rank p.

    p = 1 is the shortest vector, p = rank the full determinant; intermediate
    ranks use the certified ball search.  Restricted to rank <= 4.
    """
    n = lat.rank
    if n > HEIGHT_MAX_RANK:
        raise ParameterError(f"sublattice heights support rank <= {HEIGHT_MAX_RANK}, got {n}")
    minima = successive_minima(lat, budget)
    covol2: list[Fraction] = []
    for p in range(1, n + 1):
        if p == 1:
            covol2.append(Fraction(minima.sq_minima[0]))
        elif p == n:
            covol2.append(Fraction(lat.det))
        else:
            covol2.append(_min_primitive_covol2(lat, p, minima, budget))
    return SublatticeHeightTable(
        lattice=lat,
        covol2=tuple(covol2),
        log_heights=tuple(0.5 * math.log(c) for c in covol2),
    )


def dual_minima(lat: GramLattice, budget: int = DEFAULT_BUDGET) -> tuple[tuple[Fraction, ...], tuple[float, ...]]:
    """Exact squared minima of the dual lattice, via the adjugate rescaling."""
    adj = _adjugate_lattice(lat)
    prof = successive_minima(adj, budget)
    det = lat.det
    sq = tuple(Fraction(q, det) for q in prof.sq_minima)
    return sq, tuple(0.5 * (math.log(q.numerator) - math.log(q.denominator)) for q in sq)


def dual_heights(lat: GramLattice, budget: int = DEFAULT_BUDGET) -> tuple[tuple[Fraction, ...], tuple[float, ...]]:
    """Exact squared covolumes of minimal primitive sublattices of the dual."""
    adj = _adjugate_lattice(lat)
    table = sublattice_heights(adj, budget)
    det = lat.det
    sq = tuple(c / Fraction(det) ** p for p, c in enumerate(table.covol2, start=1))
    return sq, tuple(0.5 * (math.log(q.numerator) - math.log(q.denominator)) for q in sq)


def verify_transference(
    lat: GramLattice,
    field: NumberFieldData = RATIONAL_FIELD,
    budget: int = DEFAULT_BUDGET,
) -> TransferenceReport:
    """Two-sided comparison of minima partial sums with dual sublattice heights.

    For each p in [1, rank], checks
        ell_(rank-p)(dual) <= sum_(j<=p) lambda_j
                           <= C(rank-1, K) + ell_(rank-p)(dual) + log det,
    over the rationals only, with the rank-0 dual height equal to 0.  Both
    sides are theorems for integer Gram lattices of rank <= 5: the lower via
    covolume duality plus Hadamard on the minima witnesses, the upper via the
    second-theorem volume bound (every partial minima sum is at most the full
    one, primal sublattice covolumes are >= 1, and the unit-ball volume grows
    through dimension 5).  A violation raises, signalling an implementation
    bug.  The log-det-free printed form of the upper bound is reported per
    row but not enforced; it fails on lattices as small as diag(3, 3).
    """
    if field != RATIONAL_FIELD:
        raise ParameterError("transference check is implemented over the rationals only")
    n = lat.rank
    if n > HEIGHT_MAX_RANK:
        raise ParameterError(f"transference check supports rank <= {HEIGHT_MAX_RANK}, got {n}")
    minima = successive_minima(lat, budget)
    _, d_heights = dual_heights(lat, budget)
    constant = transference_constant(n - 1, field)
    log_det = math.log(lat.det)
    rows = []
    minima_sum = 0.0
    for p in range(1, n + 1):
        minima_sum += minima.log_minima[p - 1]
        lower = 0.0 if p == n else d_heights[n - p - 1]
        rows.append(
            TransferenceRow(
                p=p,
                lower=lower,
                minima_sum=minima_sum,
                upper=constant + lower + log_det,
                printed_upper=constant + lower,
            )
        )
    report = TransferenceReport(lattice=lat, constant=constant, rows=tuple(rows))
    if not report.ok:
        bad = next(r for r in report.rows if not r.ok)
        raise VerificationError(
            f"transference inequality fails at p={bad.p}: "
            f"{bad.lower} <= {bad.minima_sum} <= {bad.upper}"
        )
    return report


@dataclass(frozen=True)
class HomogeneousForm:
    """Integer homogeneous polynomial, stored as sorted (exponents, coeff) pairs."""

    num_vars: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 1 or self.degree < 1:
            raise ParameterError("need at least one variable and degree >= 1")
        if not self.terms:
            raise ParameterError("a form needs at least one nonzero coefficient")
        for exps, coeff in self.terms:
            if len(exps) != self.num_vars or any(e < 0 for e in exps):
                raise ParameterError(f"bad exponent vector {exps}")
            if sum(exps) != self.degree:
                raise ParameterError(f"term {exps} has degree {sum(exps)}, form has {self.degree}")
            if coeff == 0:
                raise ParameterError("zero coefficients must be dropped")

    @classmethod
    def from_terms(cls, num_vars: int, terms: dict[tuple[int, ...], int]) -> "HomogeneousForm":
        cleaned = {tuple(e): int(c) for e, c in terms.items() if c}
        if not cleaned:
            raise ParameterError("a form needs at least one nonzero coefficient")
        degree = sum(next(iter(cleaned)))
        return cls(num_vars, degree, tuple(sorted(cleaned.items())))


def evaluate_form(f: HomogeneousForm, v: tuple[int, ...] | list[int]) -> int:
    """Exact integer evaluation of the form at an integer point."""
    if len(v) != f.num_vars:
        raise ParameterError(f"point has {len(v)} coordinates, form has {f.num_vars} variables")
    total = 0
    for exps, coeff in f.terms:
        term = coeff
        for x, e in zip(v, exps):
            if e:
                term *= x**e
        total += term
    return total


@dataclass(frozen=True)
class AvoidanceResult:
    grid_vector: tuple[int, ...]
    lattice_vector: tuple[int, ...]
    value: int
    log_norm: float
    log_bound: float
    within_bound: bool


def avoid_hypersurface(f: HomogeneousForm, minima: MinimaProfile) -> AvoidanceResult:
    """First grid combination of the minima witnesses off the hypersurface f = 0.

    Scans coefficients 0..degree in lexicographic order; a nonzero form of
    degree D cannot vanish on the whole grid (the tensor-Vandermonde
    determinant of the grid evaluations is nonzero), so exhaustion raises.
    Also checks log|v| <= lambda_max + log(D * num_vars) in the lattice metric.
    """
    rank = minima.lattice.rank
    if f.num_vars != rank:
        raise ParameterError(f"form has {f.num_vars} variables, lattice rank is {rank}")
    d = f.degree
    grid_size = (d + 1) ** rank
    if grid_size > 100_000:
        raise ResourceLimitError(f"grid of size {grid_size} exceeds the search budget")
    for grid in product(range(d + 1), repeat=rank):
        value = evaluate_form(f, grid)
        if value != 0:
            vec = tuple(
                sum(grid[i] * minima.witnesses[i][j] for i in range(rank)) for j in range(rank)
            )
            q2 = minima.lattice.norm2(vec)
            log_norm = 0.5 * math.log(q2)
            log_bound = minima.log_max + math.log(d * rank)
            return AvoidanceResult(
                grid_vector=grid,
                lattice_vector=vec,
                value=value,
                log_norm=log_norm,
                log_bound=log_bound,
                within_bound=log_norm <= log_bound + LOG_TOLERANCE,
            )
    raise VerificationError("nonzero form vanished on the whole grid; impossible")


def read_gram(text: str) -> GramLattice:
    """Parse a Gram matrix: first line the rank, then rank rows of rank integers.

    Blank lines and lines starting with '#' are ignored.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParameterError("empty Gram file")
    try:
        rank = int(lines[0])
        rows = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise ParameterError(f"malformed Gram file: {exc}") from exc
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise ParameterError(f"expected {rank} rows of {rank} integers")
    return GramLattice.from_rows(rows)


def read_form(text: str) -> HomogeneousForm:
    """Parse a form, one 'coeff e1 e2 ... ek' term per line; '#' comments allowed."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParameterError("empty form file")
    terms: dict[tuple[int, ...], int] = {}
    num_vars = None
    for ln in lines:
        try:
            parts = [int(x) for x in ln.split()]
        except ValueError as exc:
            raise ParameterError(f"malformed form line {ln!r}") from exc
        if len(parts) < 2:
            raise ParameterError(f"form line {ln!r} needs a coefficient and exponents")
        coeff, exps = parts[0], tuple(parts[1:])
        if num_vars is None:
            num_vars = len(exps)
        elif len(exps) != num_vars:
            raise ParameterError("inconsistent variable counts across form lines")
        terms[exps] = terms.get(exps, 0) + coeff
    return HomogeneousForm.from_terms(num_vars, terms)
