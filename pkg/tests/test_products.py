"""
Tests for exact product-set dynamics.

The guiding identities, each checked against independent enumeration:
    - for the standard symmetric set in Z^d, |U^n| is the l1 ball volume
      (2n^2 + 2n + 1 in rank two)
    - with the identity adjoined, N_n equals the union of the bare j-fold
      products for j <= n
    - for symmetric U, the regularity constant |N_n^-1 N_n| / |N_n| equals
      |U^2n| / |U^n|
    - the central Heisenberg element first appears in U^4
    - shells N_(n+k) minus N_n are trapped between products of the middle
      set with small powers of U
"""

import itertools
from fractions import Fraction

import pytest

from folnerlab.errors import BudgetExceededError, NotGeneratingError
from folnerlab.groups import heisenberg_model, zd_model
from folnerlab.products import (
    folner_ratios,
    generating_containment,
    product_powers,
    product_with_powers,
    regularity_constant,
    shell_inclusion_check,
    varying_products,
)


def _bare_products(model, factor, n):
    """U * ... * U (j factors) for j = 0..n, without adjoining the identity."""
    out = [frozenset([model.identity])]
    for _ in range(n):
        out.append(
            frozenset(model.multiply(g, s) for g in out[-1] for s in factor)
        )
    return out


class TestProductPowers:
    def test_z2_sizes_match_closed_form(self):
        seq = product_powers(zd_model(2), "standard", 12)
        assert seq.sizes == tuple(2 * n * n + 2 * n + 1 for n in range(13))

    def test_z3_sizes_match_enumeration(self):
        seq = product_powers(zd_model(3), "standard", 6)
        for n in range(7):
            count = sum(
                1
                for p in itertools.product(range(-n, n + 1), repeat=3)
                if sum(map(abs, p)) <= n
            )
            assert seq.sizes[n] == count

    def test_birth_encodes_every_level(self):
        seq = product_powers(zd_model(1), "standard", 5)
        assert seq.element_set(3) == frozenset((x,) for x in range(-3, 4))
        assert seq.frontier(3) == frozenset([(-3,), (3,)])
        assert seq.frontier(0) == frozenset([(0,)])

    def test_level_range_errors(self):
        seq = product_powers(zd_model(1), "standard", 3)
        with pytest.raises(ValueError, match="0..3"):
            seq.element_set(4)
        with pytest.raises(ValueError, match="0..3"):
            seq.frontier(-1)

    def test_identity_adjunction_gives_union_of_bare_products(self):
        # A factor without the identity; the computed N_n must equal the
        # union of the bare j-fold products.
        model = zd_model(2)
        factor = [(1, 0), (0, 1), (-1, -1)]
        seq = product_powers(model, factor, 6)
        assert seq.identity_adjoined
        bare = _bare_products(model, factor, 6)
        for n in range(7):
            union = frozenset().union(*bare[: n + 1])
            assert seq.element_set(n) == union

    def test_symmetric_factor_not_flagged(self):
        assert not product_powers(zd_model(2), "standard", 3).identity_adjoined

    def test_rejects_non_generating_set(self):
        with pytest.raises(NotGeneratingError):
            product_powers(zd_model(2), [(2, 0), (-2, 0), (0, 2), (0, -2)], 4)

    def test_budget_error(self):
        with pytest.raises(BudgetExceededError, match="product expansion"):
            product_powers(zd_model(2), "standard", 50, element_budget=100)


class TestFolnerRatios:
    def test_z1_exact_values(self):
        seq = product_powers(zd_model(1), "standard", 4)
        assert folner_ratios(seq) == (
            Fraction(2),
            Fraction(2, 3),
            Fraction(2, 5),
            Fraction(2, 7),
        )

    def test_ratios_vanish_in_z2(self):
        seq = product_powers(zd_model(2), "standard", 48)
        ratios = folner_ratios(seq)
        assert ratios[-1] < Fraction(1, 10)
        assert all(a >= b for a, b in zip(ratios, ratios[1:]))


class TestRegularity:
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_symmetric_cross_check(self, n):
        # |N_n^-1 N_n| = |U^2n| for symmetric U.
        seq = product_powers(zd_model(2), "standard", 2 * n)
        got = regularity_constant(seq, n)
        assert got == Fraction(seq.sizes[2 * n], seq.sizes[n])

    def test_heisenberg_value_is_modest(self):
        seq = product_powers(heisenberg_model(), "standard", 8)
        assert regularity_constant(seq, 4) <= 16

    def test_budget_error(self):
        seq = product_powers(zd_model(2), "standard", 12)
        with pytest.raises(BudgetExceededError, match="regularity product"):
            regularity_constant(seq, 12, element_budget=1000)


class TestContainment:
    def test_central_element_needs_four_steps(self):
        model = heisenberg_model()
        m = generating_containment(model, model.generating_set("standard"), [(0, 0, 1)])
        assert m == 4

    def test_already_contained(self):
        model = zd_model(2)
        gen = model.generating_set("standard")
        assert generating_containment(model, gen, [(0, 0)]) == 0
        assert generating_containment(model, gen, [(1, 0)]) == 1

    def test_unreachable_raises(self):
        model = zd_model(2)
        with pytest.raises(ValueError, match="not contained"):
            generating_containment(model, model.generating_set("standard"), [(40, 0)], m_max=8)


class TestVaryingProducts:
    def _sets(self, model):
        inner = list(model.generating_set("standard"))
        outer = inner + [(1, 1), (-1, -1), (1, -1), (-1, 1), (0, 0)]
        return inner, outer

    def test_sandwich_bounds_sizes(self):
        model = zd_model(2)
        inner, outer = self._sets(model)
        factors = [inner if n % 2 else outer for n in range(10)]
        seq = varying_products(model, factors, inner, outer)
        lo = product_powers(model, inner, 10)
        hi = product_powers(model, outer, 10)
        for n in range(11):
            assert lo.sizes[n] <= seq.sizes[n] <= hi.sizes[n]

    def test_missing_certified_element_names_factor(self):
        model = zd_model(2)
        inner, outer = self._sets(model)
        bad = [e for e in inner if e != (1, 0)]
        with pytest.raises(ValueError, match="factor 2 is missing"):
            varying_products(model, [inner, inner, bad], inner, outer)

    def test_excess_element_names_factor(self):
        model = zd_model(2)
        inner, outer = self._sets(model)
        with pytest.raises(ValueError, match="factor 1 exceeds"):
            varying_products(model, [inner, inner + [(3, 3)]], inner, outer)

    def test_inner_must_lie_in_outer(self):
        model = zd_model(2)
        inner, _ = self._sets(model)
        with pytest.raises(ValueError, match="inside the outer"):
            varying_products(model, [inner], inner, [(1, 0), (-1, 0)])


class TestProductWithPowers:
    def test_matches_power_growth_from_identity(self):
        model = zd_model(2)
        gen = model.generating_set("standard")
        got = product_with_powers(model, [model.identity], gen, 5)
        seq = product_powers(model, "standard", 5)
        assert got == seq.element_set(5)

    def test_translate_of_ball(self):
        model = zd_model(2)
        gen = model.generating_set("standard")
        got = product_with_powers(model, [(10, 0)], gen, 2)
        assert got == frozenset(
            (10 + dx, dy) for dx in range(-2, 3) for dy in range(-2, 3)
            if abs(dx) + abs(dy) <= 2
        )


class TestShellInclusions:
    @pytest.mark.parametrize("n,k", [(8, 4), (12, 4), (12, 8)])
    def test_lattice_shells(self, n, k):
        model = zd_model(2)
        forward, backward = shell_inclusion_check(
            model, model.generating_set("standard"), n, k, element_budget=2_000_000
        )
        assert forward and backward

    def test_heisenberg_shells(self):
        model = heisenberg_model()
        forward, backward = shell_inclusion_check(
            model, model.generating_set("standard"), 10, 4, element_budget=2_000_000
        )
        assert forward and backward

    def test_width_validation(self):
        model = zd_model(2)
        gen = model.generating_set("standard")
        for n, k in [(8, 3), (8, 6), (8, 12), (2, 4)]:
            with pytest.raises(ValueError):
                shell_inclusion_check(model, gen, n, k, element_budget=10**6)
