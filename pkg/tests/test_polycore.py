"""Tests for the exact polynomial algebra and basis enumeration."""

import random
from fractions import Fraction

import pytest

from shapes.counting import BOSON, FERMION, level_dimension
from shapes.errors import InternalConsistencyError
from shapes.polycore import (
    ExactPolynomial,
    SlaterState,
    canonical_order,
    divide_exact,
    elementary_symmetric,
    enumerate_basis,
    enumerate_euler_monomials,
    euler_power,
    expand_state,
    vandermonde,
)


def poly_from_terms(n, d, entries):
    """entries: list of (flat exponent tuple, coeff)."""
    return ExactPolynomial(n, d, dict(entries))


class TestCanonicalOrder:
    def test_lex_tie_break_at_equal_degree(self):
        assert canonical_order((1, 0), (0, 1)) == 1

    def test_degree_dominates(self):
        assert canonical_order((0, 2), (1, 0)) == 1

    def test_equal(self):
        assert canonical_order((0, 0), (0, 0)) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            canonical_order((1,), (1, 0))


class TestExpandState:
    def test_ground_state_3_2_golden(self):
        # Cofactor expansion of the 3x3 determinant with rows t, u, 1.
        g0 = SlaterState.from_orbitals([(1, 0), (0, 1), (0, 0)], FERMION)
        expected = poly_from_terms(
            3,
            2,
            [
                ((1, 0, 0, 1, 0, 0), 1),   # t1 u2
                ((1, 0, 0, 0, 0, 1), -1),  # t1 u3
                ((0, 1, 1, 0, 0, 0), -1),  # u1 t2
                ((0, 0, 1, 0, 0, 1), 1),   # t2 u3
                ((0, 1, 0, 0, 1, 0), 1),   # u1 t3
                ((0, 0, 0, 1, 1, 0), -1),  # u2 t3
            ],
        )
        assert expand_state(g0) == expected

    def test_two_particle_1d(self):
        fermion = SlaterState.from_orbitals([(1,), (0,)], FERMION)
        boson = SlaterState.from_orbitals([(1,), (0,)], BOSON)
        t1 = ExactPolynomial.variable(2, 1, 0, 0)
        t2 = ExactPolynomial.variable(2, 1, 1, 0)
        assert expand_state(fermion) == t1 - t2
        assert expand_state(boson) == t1 + t2

    def test_boson_repeated_orbital_multiplicity(self):
        state = SlaterState.from_orbitals([(1,), (1,)], BOSON)
        expanded = expand_state(state)
        assert expanded == 2 * ExactPolynomial(2, 1, {(1, 1): 1})
        assert state.leading_coefficient() == 2

    @pytest.mark.parametrize("stat", [FERMION, BOSON])
    def test_exchange_symmetry(self, stat):
        rng = random.Random(7)
        for _ in range(10):
            orbs = set()
            while len(orbs) < 3:
                orbs.add((rng.randrange(3), rng.randrange(3)))
            state = SlaterState.from_orbitals(sorted(orbs), stat)
            poly = expand_state(state)
            for i, j in [(0, 1), (0, 2), (1, 2)]:
                swapped = poly.swap_particles(i, j)
                if stat is FERMION:
                    assert swapped == -1 * poly
                else:
                    assert swapped == poly

    def test_support_disjointness_within_level(self):
        states = enumerate_basis(3, 2, 4, FERMION)
        seen = {}
        for idx, state in enumerate(states):
            for mono in expand_state(state).terms:
                assert mono not in seen, "supports overlap"
                seen[mono] = idx

    def test_pauli_rejection(self):
        with pytest.raises(ValueError):
            SlaterState.from_orbitals([(1, 0), (1, 0), (0, 0)], FERMION)


class TestSymmetricFunctions:
    def test_e1(self):
        e1 = elementary_symmetric(1, 0, 3, 2)
        expected = sum(
            (ExactPolynomial.variable(3, 2, i, 0) for i in range(3)),
            ExactPolynomial.zero(3, 2),
        )
        assert e1 == expected

    def test_e3_top(self):
        e3 = elementary_symmetric(3, 0, 3, 1)
        assert e3 == ExactPolynomial(3, 1, {(1, 1, 1): 1})

    def test_e2_other_axis(self):
        e2 = elementary_symmetric(2, 1, 3, 2)
        assert e2 == ExactPolynomial(
            3, 2, {(0, 1, 0, 1, 0, 0): 1, (0, 1, 0, 0, 0, 1): 1, (0, 0, 0, 1, 0, 1): 1}
        )

    def test_k_beyond_n_is_zero(self):
        assert elementary_symmetric(4, 0, 3, 1).is_zero

    def test_euler_power_squares_monomialwise(self):
        squared = euler_power(1, 2, 0, 3, 1)
        assert squared == ExactPolynomial(
            3, 1, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1}
        )

    def test_euler_power_k1_is_elementary(self):
        assert euler_power(2, 1, 0, 3, 2) == elementary_symmetric(2, 0, 3, 2)

    def test_euler_power_single_subset(self):
        assert euler_power(2, 2, 0, 2, 1) == ExactPolynomial(2, 1, {(2, 2): 1})

    def test_euler_power_disjoint_supports_at_equal_grade(self):
        # distinct (m, k) with m*k equal never share a monomial on one axis
        n = 4
        cases = {}
        for m in range(1, n + 1):
            for k in range(1, 5):
                cases.setdefault(m * k, []).append(euler_power(m, k, 0, n, 1))
        for polys in cases.values():
            seen = set()
            for poly in polys:
                assert not (set(poly.terms) & seen)
                seen |= set(poly.terms)


class TestEulerMonomials:
    def test_degree_two_one_axis(self):
        labels = sorted(str(e) for e in enumerate_euler_monomials(3, 1, 2))
        assert labels == ["e1(t)^2", "e2(t)"]

    def test_degree_one_two_axes(self):
        labels = sorted(str(e) for e in enumerate_euler_monomials(3, 2, 1))
        assert labels == ["e1(t)", "e1(u)"]

    def test_degree_two_two_axes(self):
        labels = sorted(str(e) for e in enumerate_euler_monomials(3, 2, 2))
        assert labels == [
            "e1(t)*e1(u)", "e1(t)^2", "e1(u)^2", "e2(t)", "e2(u)",
        ]

    def test_degree_zero_is_the_constant(self):
        monos = enumerate_euler_monomials(3, 2, 0)
        assert len(monos) == 1
        assert monos[0].is_empty
        assert monos[0].materialize() == ExactPolynomial.constant(3, 2)

    def test_materialized_grade(self):
        for em in enumerate_euler_monomials(3, 2, 4):
            poly = em.materialize()
            assert poly.grade() == 4 == em.degree


class TestEnumerateBasis:
    def test_single_ground_state(self):
        states = enumerate_basis(3, 2, 2, FERMION)
        assert len(states) == 1
        assert states[0].orbitals == ((1, 0), (0, 1), (0, 0))

    def test_first_level_six_states(self):
        states = enumerate_basis(3, 2, 3, FERMION)
        assert len(states) == 6

    def test_large_level_count(self):
        assert len(enumerate_basis(3, 3, 9, FERMION)) == 3838

    @pytest.mark.parametrize("stat", [FERMION, BOSON])
    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_counts_match_dimension_series(self, n, d, stat):
        for grade in range(11):
            assert len(enumerate_basis(n, d, grade, stat)) == level_dimension(
                n, d, grade, stat
            )

    def test_descending_enumeration_order(self):
        states = enumerate_basis(3, 2, 4, FERMION)
        keys = [s.leading_monomial() for s in states]
        from shapes.polycore import monomial_sort_key

        sorted_keys = sorted(keys, key=lambda m: monomial_sort_key(m, 2), reverse=True)
        assert keys == sorted_keys


class TestArithmetic:
    def test_difference_of_squares(self):
        t1 = ExactPolynomial.variable(2, 1, 0, 0)
        t2 = ExactPolynomial.variable(2, 1, 1, 0)
        assert (t1 - t2) * (t1 + t2) == t1 * t1 - t2 * t2

    def test_multiply_by_one(self):
        poly = vandermonde(3)
        assert poly * ExactPolynomial.constant(3, 1) == poly

    def test_grade_additivity(self):
        rng = random.Random(11)
        for _ in range(5):
            states = enumerate_basis(3, 2, rng.randrange(2, 5), FERMION)
            a = expand_state(states[rng.randrange(len(states))])
            e = elementary_symmetric(rng.randrange(1, 3), rng.randrange(2), 3, 2)
            assert (a * e).grade() == a.grade() + e.grade()

    def test_incompatible_shapes_raise(self):
        with pytest.raises(ValueError):
            ExactPolynomial.constant(2, 1) * ExactPolynomial.constant(2, 2)

    def test_first_level_trivial_product_identity(self):
        # e_1(t) g_0 = -g_12 + g_14
        g0 = expand_state(SlaterState.from_orbitals([(1, 0), (0, 1), (0, 0)], FERMION))
        g12 = expand_state(SlaterState.from_orbitals([(1, 1), (1, 0), (0, 0)], FERMION))
        g14 = expand_state(SlaterState.from_orbitals([(2, 0), (0, 1), (0, 0)], FERMION))
        product = elementary_symmetric(1, 0, 3, 2) * g0
        assert product == g14 - g12
        assert len(product.terms) == 12


class TestVandermonde:
    def test_two_particles(self):
        t1 = ExactPolynomial.variable(2, 1, 0, 0)
        t2 = ExactPolynomial.variable(2, 1, 1, 0)
        assert vandermonde(2) == t1 - t2

    def test_three_particles_six_unit_terms(self):
        poly = vandermonde(3)
        assert len(poly.terms) == 6
        assert all(abs(c) == 1 for c in poly.terms.values())

    def test_single_particle_is_one(self):
        assert vandermonde(1) == ExactPolynomial.constant(1, 1)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_equals_ground_state_determinant(self, n):
        ground = SlaterState.from_orbitals([(k,) for k in range(n)], FERMION)
        assert vandermonde(n) == expand_state(ground)


class TestDivideExact:
    def test_round_trip(self):
        a = vandermonde(3)
        b = elementary_symmetric(2, 0, 3, 1)
        assert divide_exact(a * b, b) == a

    def test_not_divisible_raises(self):
        t1 = ExactPolynomial.variable(2, 1, 0, 0)
        t2 = ExactPolynomial.variable(2, 1, 1, 0)
        with pytest.raises(InternalConsistencyError):
            divide_exact(t1 + t2, t1 - t2)


class TestSerialization:
    def test_json_round_trip(self):
        poly = expand_state(
            SlaterState.from_orbitals([(2, 0), (0, 1), (0, 0)], FERMION)
        ) * Fraction(3, 7)
        again = ExactPolynomial.from_json_obj(poly.to_json_obj())
        assert again == poly

    def test_json_sorted_by_canonical_order(self):
        poly = vandermonde(3)
        obj = poly.to_json_obj()
        from shapes.polycore import monomial_sort_key

        flats = [tuple(e for row in t["matrix"] for e in row) for t in obj["terms"]]
        assert flats == sorted(
            flats, key=lambda m: monomial_sort_key(m, 1), reverse=True
        )
