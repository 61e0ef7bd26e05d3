"""Lattice-lab tests with independent box-enumeration oracles."""

import math
import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from secmin.bounds import NumberFieldData, ball_volume_log
from secmin.errors import ParameterError, ResourceLimitError
from secmin.lattice import (
    GramLattice,
    HomogeneousForm,
    avoid_hypersurface,
    dual_heights,
    dual_lattice,
    dual_minima,
    evaluate_form,
    read_form,
    read_gram,
    sublattice_heights,
    successive_minima,
    verify_transference,
)

IDENTITY2 = GramLattice.from_rows([[1, 0], [0, 1]])
HEXAGONAL = GramLattice.from_rows([[2, 1], [1, 2]])
DIAG14 = GramLattice.from_rows([[1, 0], [0, 4]])


def frac_matrix(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def box_vectors(lat: GramLattice, bound2: int):
    """Test oracle: brute box scan, no recursive pruning, one of each +- pair."""
    n = lat.rank
    inv = dual_lattice(lat).entries
    half = []
    for i in range(n):
        r = math.isqrt(int(bound2 * inv[i][i])) + 1
        half.append(r)
    out = []
    for v in product(*[range(-h, h + 1) for h in half]):
        if not any(v):
            continue
        first = next(c for c in v if c)
        if first < 0:
            continue
        q2 = lat.norm2(v)
        if q2 <= bound2:
            out.append((q2, v))
    out.sort()
    return out


def brute_minima(lat: GramLattice):
    """Test oracle: greedy independent selection from a box enumeration."""
    bound2 = max(lat.gram[i][i] for i in range(lat.rank))
    vecs = box_vectors(lat, bound2)
    chosen = []
    basis = []
    for q2, v in vecs:
        cand = basis + [list(map(Fraction, v))]
        if matrix_rank(cand) == len(cand):
            basis = cand
            chosen.append(q2)
            if len(chosen) == lat.rank:
                break
    return tuple(chosen)


def matrix_rank(rows):
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def brute_min_covol2(lat: GramLattice, p: int):
    """Test oracle: minimal saturated covolume^2 over p-subsets of a box ball.

    The radius is sound on its own terms: the minimizer's covolume^2 is at
    most the best principal 2x2 minor u2, and by Minkowski's second theorem
    both of its minima realizers have squared norm at most (4/B_2)^2 u2.
    """
    assert p == 2
    n = lat.rank
    u2 = min(
        lat.gram[i][i] * lat.gram[j][j] - lat.gram[i][j] ** 2
        for i in range(n)
        for j in range(i + 1, n)
    )
    bound2 = math.ceil((16 / math.pi**2) * u2) + 1
    vecs = box_vectors(lat, bound2)
    best = None
    for subset in combinations([v for _, v in vecs], p):
        gram = [[lat.pair(a, b) for b in subset] for a in subset]
        d = int_det(gram)
        if d == 0:
            continue
        idx = 0
        for cols in combinations(range(lat.rank), p):
            idx = math.gcd(idx, int_det([[v[c] for c in cols] for v in subset]))
        c2 = Fraction(d, idx * idx)
        if best is None or c2 < best:
            best = c2
    return best


def int_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * int_det(minor)
    return total


def random_pd_gram(rng, rank, spread=2):
    while True:
        a = [[rng.randint(-spread, spread) for _ in range(rank)] for _ in range(rank)]
        g = [[sum(a[r][i] * a[r][j] for r in range(rank)) for j in range(rank)] for i in range(rank)]
        try:
            return GramLattice.from_rows(g)
        except ParameterError:
            continue


class TestGramLattice:
    def test_validation(self):
        with pytest.raises(ParameterError):
            GramLattice.from_rows([[1, 2], [3, 1]])  # not symmetric
        with pytest.raises(ParameterError):
            GramLattice.from_rows([[1, 2], [2, 1]])  # det -3
        with pytest.raises(ParameterError):
            GramLattice.from_rows([[0, 0], [0, 1]])
        with pytest.raises(ParameterError):
            GramLattice.from_rows([[1 if i == j else 0 for j in range(7)] for i in range(7)])

    def test_det(self):
        assert HEXAGONAL.det == 3
        assert DIAG14.det == 4
        assert GramLattice.from_rows([[2, 0, 1], [0, 3, 0], [1, 0, 2]]).det == 9


class TestSuccessiveMinima:
    def test_named_examples(self):
        assert successive_minima(IDENTITY2).log_minima == (0.0, 0.0)
        prof = successive_minima(HEXAGONAL)
        assert prof.sq_minima == (2, 2)
        assert prof.log_minima == (0.5 * math.log(2), 0.5 * math.log(2))
        assert successive_minima(DIAG14).sq_minima == (1, 4)

    def test_witness_invariants(self):
        for lat in (IDENTITY2, HEXAGONAL, DIAG14):
            prof = successive_minima(lat)
            assert matrix_rank([list(map(Fraction, w)) for w in prof.witnesses]) == lat.rank
            for q2, w in zip(prof.sq_minima, prof.witnesses):
                assert lat.norm2(w) == q2
            assert all(a <= b for a, b in zip(prof.sq_minima, prof.sq_minima[1:]))

    def test_against_box_oracle(self):
        rng = random.Random(411)
        for _ in range(40):
            lat = random_pd_gram(rng, rng.choice([2, 3]))
            assert successive_minima(lat).sq_minima == brute_minima(lat)

    def test_rank4_and_fixed(self):
        lat = GramLattice.from_rows(
            [[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 3, 1], [0, 0, 1, 2]]
        )
        assert successive_minima(lat).sq_minima == brute_minima(lat)

    def test_minkowski_product_bound(self):
        rng = random.Random(412)
        for _ in range(25):
            lat = random_pd_gram(rng, rng.choice([2, 3]))
            prof = successive_minima(lat)
            mink = (4.0**lat.rank) * math.exp(-2 * ball_volume_log(lat.rank)) * lat.det
            assert math.prod(prof.sq_minima) <= mink * (1 + 1e-9)

    def test_budget_exhaustion(self):
        rows = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
        rows[5][5] = 10**8
        lat = GramLattice.from_rows(rows)
        with pytest.raises(ResourceLimitError):
            successive_minima(lat, budget=10_000)


class TestDualLattice:
    def test_named_examples(self):
        assert dual_lattice(IDENTITY2).entries == frac_matrix([[1, 0], [0, 1]])
        assert dual_lattice(HEXAGONAL).entries == frac_matrix(
            [[Fraction(2, 3), Fraction(-1, 3)], [Fraction(-1, 3), Fraction(2, 3)]]
        )
        assert dual_lattice(DIAG14).entries == frac_matrix([[1, 0], [0, Fraction(1, 4)]])

    def test_double_dual_is_identity_map(self):
        rng = random.Random(413)
        for _ in range(25):
            lat = random_pd_gram(rng, rng.choice([2, 3, 4]))
            assert dual_lattice(dual_lattice(lat)).entries == frac_matrix(lat.gram)

    def test_dual_minima_hexagonal(self):
        sq, logs = dual_minima(HEXAGONAL)
        assert sq[0] == Fraction(2, 3)
        assert math.isclose(logs[0], 0.5 * math.log(2 / 3), rel_tol=1e-12)


class TestSublatticeHeights:
    def test_named_examples(self):
        assert sublattice_heights(IDENTITY2).covol2 == (Fraction(1), Fraction(1))
        hexa = sublattice_heights(HEXAGONAL)
        assert hexa.covol2 == (Fraction(2), Fraction(3))
        assert math.isclose(hexa.height(1), 0.5 * math.log(2), rel_tol=1e-12)
        assert math.isclose(hexa.height(2), 0.5 * math.log(3), rel_tol=1e-12)
        assert sublattice_heights(DIAG14).covol2 == (Fraction(1), Fraction(4))

    def test_first_height_is_first_minimum(self):
        rng = random.Random(414)
        for _ in range(20):
            lat = random_pd_gram(rng, rng.choice([2, 3]))
            table = sublattice_heights(lat)
            assert table.covol2[0] == successive_minima(lat).sq_minima[0]
            assert table.covol2[-1] == lat.det

    def test_middle_height_against_box_oracle(self):
        rng = random.Random(415)
        for _ in range(12):
            lat = random_pd_gram(rng, 3)
            assert sublattice_heights(lat).covol2[1] == brute_min_covol2(lat, 2)

    def test_rank4_middle_heights(self):
        z4 = GramLattice.from_rows([[1 if i == j else 0 for j in range(4)] for i in range(4)])
        assert sublattice_heights(z4).covol2 == (Fraction(1),) * 4
        diag = GramLattice.from_rows(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 4, 0], [0, 0, 0, 9]]
        )
        assert sublattice_heights(diag).covol2 == (Fraction(1), Fraction(1), Fraction(4), Fraction(36))

    def test_duality_identity(self):
        # covol2_p(V) == covol2_(n-p)(dual) * det(V) for all p, exactly
        rng = random.Random(416)
        for _ in range(12):
            lat = random_pd_gram(rng, 3)
            primal = sublattice_heights(lat).covol2
            dual2, _ = dual_heights(lat)
            n = lat.rank
            for p in range(1, n):
                assert primal[p - 1] == dual2[n - p - 1] * lat.det

    def test_rank_cap(self):
        lat = GramLattice.from_rows([[1 if i == j else 0 for j in range(5)] for i in range(5)])
        with pytest.raises(ParameterError):
            sublattice_heights(lat)


class TestTransference:
    def test_identity_example(self):
        # det = 1: the enforced and det-free bounds coincide
        report = verify_transference(IDENTITY2)
        row = report.rows[0]
        assert row.lower == 0.0 and row.minima_sum == 0.0
        assert math.isclose(row.upper, math.log(2), rel_tol=1e-12)
        assert row.upper == row.printed_upper

    def test_hexagonal_numbers(self):
        report = verify_transference(HEXAGONAL)
        r1 = report.rows[0]
        assert math.isclose(r1.lower, 0.5 * math.log(2 / 3), rel_tol=1e-9)
        assert math.isclose(r1.minima_sum, 0.5 * math.log(2), rel_tol=1e-9)
        assert math.isclose(r1.printed_upper, math.log(2) + 0.5 * math.log(2 / 3), rel_tol=1e-9)
        assert math.isclose(r1.upper, r1.printed_upper + math.log(3), rel_tol=1e-9)
        assert report.printed_ok  # hexagonal satisfies even the det-free form

    def test_diag_example(self):
        report = verify_transference(DIAG14)
        assert report.ok and report.printed_ok

    def test_printed_upper_fails_on_scaled_lattice(self):
        # diag(3,3): lambda_1 = (1/2)log 9 exceeds log 2 + ell_1(dual); only
        # the det-shifted bound is a theorem
        report = verify_transference(GramLattice.from_rows([[3, 0], [0, 3]]))
        assert report.ok
        assert not report.rows[0].printed_ok

    def test_random_theorem_check(self):
        rng = random.Random(417)
        for _ in range(60):
            assert verify_transference(random_pd_gram(rng, rng.choice([2, 3]))).ok

    def test_rank_one_boundary(self):
        report = verify_transference(GramLattice.from_rows([[5]]))
        row = report.rows[0]
        assert row.lower == 0.0
        assert math.isclose(row.minima_sum, 0.5 * math.log(5), rel_tol=1e-12)
        assert math.isclose(row.upper, math.log(2) + math.log(5), rel_tol=1e-12)

    def test_hadamard_lower_for_full_sum(self):
        # det <= product of squared minima, the sharp p = rank lower fact
        rng = random.Random(420)
        for _ in range(30):
            lat = random_pd_gram(rng, rng.choice([2, 3]))
            assert lat.det <= math.prod(successive_minima(lat).sq_minima)

    def test_non_rational_field_rejected(self):
        with pytest.raises(ParameterError):
            verify_transference(IDENTITY2, NumberFieldData(2, 0, 1, 1.0))


class TestForms:
    def test_evaluation_examples(self):
        f = HomogeneousForm.from_terms(2, {(1, 1): 1})
        assert evaluate_form(f, (1, 1)) == 1
        g = HomogeneousForm.from_terms(2, {(2, 0): 1, (0, 2): -1})
        assert evaluate_form(g, (2, 2)) == 0

    def test_random_cubic_against_reordered_sum(self):
        rng = random.Random(418)
        for _ in range(30):
            terms = {}
            for i in range(4):
                for j in range(4 - i):
                    k = 3 - i - j
                    c = rng.randint(-6, 6)
                    if c:
                        terms[(i, j, k)] = c
            if not terms:
                continue
            f = HomogeneousForm.from_terms(3, terms)
            v = tuple(rng.randint(-5, 5) for _ in range(3))
            direct = sum(
                c * v[0] ** e[0] * v[1] ** e[1] * v[2] ** e[2]
                for e, c in sorted(terms.items(), reverse=True)
            )
            assert evaluate_form(f, v) == direct

    def test_validation(self):
        with pytest.raises(ParameterError):
            HomogeneousForm.from_terms(2, {(1, 1): 0})
        with pytest.raises(ParameterError):
            HomogeneousForm.from_terms(2, {(1, 1): 1, (2, 0): 1, (3, 0): 1})
        with pytest.raises(ParameterError):
            evaluate_form(HomogeneousForm.from_terms(2, {(1, 1): 1}), (1, 2, 3))


class TestAvoidHypersurface:
    def test_product_form_on_identity(self):
        f = HomogeneousForm.from_terms(2, {(1, 1): 1})
        res = avoid_hypersurface(f, successive_minima(IDENTITY2))
        assert res.grid_vector == (1, 1)
        assert math.isclose(res.log_norm, 0.5 * math.log(2), rel_tol=1e-12)
        assert math.isclose(res.log_bound, math.log(4), rel_tol=1e-12)
        assert res.within_bound

    def test_square_difference_form(self):
        f = HomogeneousForm.from_terms(2, {(2, 0): 1, (1, 1): -2, (0, 2): 1})  # (x1-x2)^2
        res = avoid_hypersurface(f, successive_minima(IDENTITY2))
        assert res.grid_vector == (0, 1)
        assert res.value == 1

    def test_random_forms_stay_in_bound(self):
        rng = random.Random(419)
        for _ in range(50):
            rank = rng.choice([2, 3])
            degree = rng.choice([1, 2, 3])
            monos = [e for e in product(range(degree + 1), repeat=rank) if sum(e) == degree]
            terms = {e: rng.randint(-4, 4) for e in monos if rng.random() < 0.6}
            terms = {e: c for e, c in terms.items() if c}
            if not terms:
                continue
            f = HomogeneousForm.from_terms(rank, terms)
            lat = random_pd_gram(rng, rank)
            res = avoid_hypersurface(f, successive_minima(lat))
            assert res.value != 0 and res.within_bound

    def test_rank_mismatch(self):
        f = HomogeneousForm.from_terms(3, {(1, 1, 1): 1})
        with pytest.raises(ParameterError):
            avoid_hypersurface(f, successive_minima(IDENTITY2))


class TestFileFormats:
    def test_gram_round_trip(self):
        text = "# hexagonal\n2\n2 1\n1 2\n"
        assert read_gram(text).gram == ((2, 1), (1, 2))

    def test_form_round_trip(self):
        text = "# product of the two coordinates\n1 1 1\n"
        f = read_form(text)
        assert f.num_vars == 2 and f.degree == 2 and f.terms == (((1, 1), 1),)

    def test_form_merges_duplicate_lines(self):
        f = read_form("2 1 1\n3 1 1\n")
        assert f.terms == (((1, 1), 5),)

    def test_malformed_rejected(self):
        with pytest.raises(ParameterError):
            read_gram("2\n1 0\n")
        with pytest.raises(ParameterError):
            read_gram("x\n")
        with pytest.raises(ParameterError):
            read_form("1\n")
        with pytest.raises(ParameterError):
            read_form("")


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=6), st.integers(min_value=-3, max_value=3))
def test_dual_of_two_by_two(a, d, b):
    # random 2x2 positive-definite integer Gram: dual is the exact inverse
    if a * d - b * b <= 0:
        return
    lat = GramLattice.from_rows([[a, b], [b, d]])
    det = a * d - b * b
    expected = frac_matrix(
        [[Fraction(d, det), Fraction(-b, det)], [Fraction(-b, det), Fraction(a, det)]]
    )
    assert dual_lattice(lat).entries == expected
