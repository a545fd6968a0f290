import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from propratio import (
    Population,
    PopulationSummary,
    PopulationUnit,
    SampleSummary,
    fpc,
    sample_deviation,
    summarize_population,
    summarize_sample,
)
from propratio.errors import (
    DegeneratePopulation,
    EmptyPopulation,
    EmptySample,
    InvalidDesign,
    UndefinedDeviation,
    ValidationError,
)


class TestUnitsAndPopulation:
    def test_phi_must_be_binary(self):
        with pytest.raises(ValidationError):
            PopulationUnit(2, 1.0)

    def test_x_must_be_finite(self):
        with pytest.raises(ValidationError):
            PopulationUnit(1, math.inf)

    def test_population_needs_two_units(self):
        with pytest.raises(EmptyPopulation):
            Population((PopulationUnit(1, 1.0),))

    def test_mismatched_lengths(self):
        with pytest.raises(ValidationError):
            Population.from_values([1, 0], [1.0])


class TestSummarizePopulation:
    def test_hand_evaluated_four_units(self, pop4):
        # by hand: P = 2/4, X_bar = 6/4, each deviation is +-1/2, so
        # S_p^2 = S_x^2 = (4 * 1/4) / 3 = 1/3 and
        # S_px = (sum phi*x - N*P*X_bar)/3 = (4 - 3)/3 = 1/3, hence rho = 1.
        s = summarize_population(pop4)
        assert s.p == 0.5
        assert s.x_bar_pop == 1.5
        assert math.isclose(s.s_p_sq, 1 / 3, rel_tol=1e-15)
        assert math.isclose(s.s_x_sq, 1 / 3, rel_tol=1e-15)
        assert math.isclose(s.s_phix, 1 / 3, rel_tol=1e-15)
        assert math.isclose(s.rho_pb, 1.0, rel_tol=1e-15)
        assert math.isclose(s.c_p**2, 4 / 3, rel_tol=1e-14)
        assert math.isclose(s.c_x**2, 4 / 27, rel_tol=1e-14)

    def test_two_point_case(self):
        s = summarize_population(Population.from_values([1, 0], [3.0, 1.0]))
        assert s.p == 0.5
        assert math.isclose(s.rho_pb, 1.0, rel_tol=1e-14)

    def test_constant_attribute_rejected(self):
        pop = Population.from_values([1, 1, 1, 1], [1.0, 2.0, 3.0, 4.0])
        with pytest.raises(DegeneratePopulation):
            summarize_population(pop)

    def test_constant_auxiliary_rejected(self):
        pop = Population.from_values([1, 0, 1, 0], [2.0, 2.0, 2.0, 2.0])
        with pytest.raises(DegeneratePopulation):
            summarize_population(pop)

    def test_nonpositive_auxiliary_mean_rejected(self):
        pop = Population.from_values([1, 0, 1, 0], [-5.0, 1.0, -3.0, 2.0])
        with pytest.raises(DegeneratePopulation):
            summarize_population(pop)


def nondegenerate_populations():
    def build(values):
        phi = [v[0] for v in values]
        x = [v[1] for v in values]
        return Population.from_values(phi, x)

    return (
        st.lists(
            st.tuples(
                st.integers(0, 1),
                st.floats(0.1, 1000.0, allow_nan=False, allow_infinity=False),
            ),
            min_size=4,
            max_size=40,
        )
        .filter(lambda vs: 0 < sum(v[0] for v in vs) < len(vs))
        .filter(lambda vs: min(v[1] for v in vs) < max(v[1] for v in vs))
        .map(build)
    )


class TestSummaryProperties:
    @given(nondegenerate_populations())
    @settings(max_examples=60)
    def test_binary_variance_identity(self, pop):
        # for 0/1 data the N-1 variance is exactly N*P*(1-P)/(N-1)
        s = summarize_population(pop)
        n_pop = pop.size
        expected = n_pop * s.p * (1.0 - s.p) / (n_pop - 1)
        assert abs(s.s_p_sq - expected) <= 1e-12 * expected

    @given(nondegenerate_populations())
    @settings(max_examples=60)
    def test_correlation_bounded(self, pop):
        s = summarize_population(pop)
        assert abs(s.rho_pb) <= 1.0 + 1e-12

    @given(
        st.lists(st.integers(0, 1), min_size=4, max_size=30).filter(
            lambda phi: 0 < sum(phi) < len(phi)
        ),
        st.floats(0.5, 50.0),
        st.sampled_from([-1.0, 1.0]),
    )
    @settings(max_examples=60)
    def test_linear_auxiliary_gives_unit_correlation(self, phi, scale, sign):
        c = sign * scale
        # keep x positive: shift well above |c|
        x = [c * v + 2.0 * scale + 1.0 for v in phi]
        s = summarize_population(Population.from_values(phi, x))
        assert abs(s.rho_pb - sign) <= 1e-12

    @given(st.data())
    @settings(max_examples=60)
    def test_permutation_invariance_bit_for_bit(self, data):
        pop = data.draw(nondegenerate_populations())
        order = data.draw(st.permutations(range(pop.size)))
        shuffled = Population(tuple(pop.units[i] for i in order))
        a = summarize_population(pop)
        b = summarize_population(shuffled)
        assert a == b  # fsum accumulation makes every field exactly equal


class TestSummarizeSample:
    def test_direct_arithmetic(self):
        units = [PopulationUnit(1, 2.0), PopulationUnit(0, 4.0), PopulationUnit(1, 6.0)]
        s = summarize_sample(units)
        assert s.n == 3
        assert math.isclose(s.p, 2 / 3, rel_tol=1e-15)
        assert s.x_bar == 4.0

    def test_single_unit(self):
        s = summarize_sample([PopulationUnit(0, 5.0)])
        assert (s.p, s.x_bar, s.n) == (0.0, 5.0, 1)

    def test_constant_sample(self):
        s = summarize_sample([PopulationUnit(1, 1.0), PopulationUnit(1, 1.0)])
        assert (s.p, s.x_bar) == (1.0, 1.0)

    def test_empty_sample(self):
        with pytest.raises(EmptySample):
            summarize_sample([])


class TestFpc:
    def test_reference_design(self):
        assert fpc(11, 40) == 29 / 440

    def test_census(self):
        assert fpc(40, 40) == 0.0

    def test_oversized_sample(self):
        with pytest.raises(InvalidDesign):
            fpc(41, 40)

    def test_zero_sample(self):
        with pytest.raises(InvalidDesign):
            fpc(0, 40)


class TestSampleDeviation:
    @staticmethod
    def _summary(p, x_bar):
        return PopulationSummary.from_stats(
            p=p, x_bar_pop=x_bar, rho_pb=0.5, c_p=1.0, c_x=0.3
        )

    def test_zero_deviation(self):
        ps = self._summary(0.5, 14.4)
        d = sample_deviation(SampleSummary(0.5, 14.4, 10), ps)
        assert (d.e_phi, d.e_x) == (0.0, 0.0)

    def test_direct_arithmetic(self):
        ps = self._summary(0.5, 14.4)
        d = sample_deviation(SampleSummary(0.6, 12.0, 10), ps)
        assert math.isclose(d.e_phi, 0.2, rel_tol=1e-14)
        assert math.isclose(d.e_x, -1 / 6, rel_tol=1e-14)

    def test_zero_proportion_rejected(self):
        ps = PopulationSummary(
            p=0.0, x_bar_pop=14.4, s_p_sq=0.0, s_x_sq=1.0, s_phix=0.0,
            rho_pb=0.0, c_p=1.0, c_x=0.1,
        )
        with pytest.raises(UndefinedDeviation):
            sample_deviation(SampleSummary(0.5, 12.0, 10), ps)
