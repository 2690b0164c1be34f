import numpy as np
import pytest
from fractions import Fraction

from ksbound.model import (
    ModelParams,
    RegionTag,
    classify_pe,
    classify_pp,
    eval_production,
    eval_sensitivity,
)


@pytest.fixture
def base_params():
    return ModelParams(n=2, alpha=1.0, l=0.5)


class TestNonlinearities:
    def test_sensitivity_zero_at_zero(self, base_params):
        assert eval_sensitivity(0.0, base_params) == 0.0

    def test_sensitivity_identity(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5, K=1.0)
        assert eval_sensitivity(2.0, params) == 2.0

    def test_sensitivity_sqrt(self):
        params = ModelParams(n=2, alpha=0.5, l=0.5, K=2.0)
        assert eval_sensitivity(4.0, params) == pytest.approx(4.0)

    def test_production_zero(self, base_params):
        assert eval_production(0.0, base_params) == 0.0

    def test_production_unit_base(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5, K0=3.0)
        assert eval_production(1.0, params) == pytest.approx(3.0)

    def test_production_quarter_root(self):
        params = ModelParams(n=2, alpha=1.0, l=0.25, K0=1.0)
        assert eval_production(16.0, params) == pytest.approx(2.0)

    def test_negative_argument_rejected(self, base_params):
        with pytest.raises(ValueError):
            eval_sensitivity(-1.0, base_params)
        with pytest.raises(ValueError):
            eval_production(-0.5, base_params)

    def test_array_arguments(self, base_params):
        s = np.array([0.0, 1.0, 4.0])
        out = eval_sensitivity(s, base_params)
        assert out.shape == s.shape
        assert out[0] == 0.0

    def test_monotone_in_s(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            params = ModelParams(
                n=int(rng.integers(2, 6)),
                alpha=float(rng.uniform(0.1, 3.0)),
                l=float(rng.uniform(0.1, 2.0)),
                K=float(rng.uniform(0.1, 5.0)),
                K0=float(rng.uniform(0.1, 5.0)),
            )
            s = np.sort(rng.uniform(0, 100, size=50))
            assert np.all(np.diff(eval_sensitivity(s, params)) >= 0)
            assert np.all(np.diff(eval_production(s, params)) >= 0)


class TestCustomNonlinearities:
    def test_valid_custom_sensitivity_used(self):
        params = ModelParams(n=2, alpha=1.0, l=0.5, sensitivity=lambda s: 0.5 * s)
        assert eval_sensitivity(2.0, params) == 1.0

    def test_custom_sensitivity_above_bound_rejected(self):
        with pytest.raises(ValueError, match="power bound"):
            ModelParams(n=2, alpha=1.0, l=0.5, sensitivity=lambda s: 2.0 * s)

    def test_custom_sensitivity_nonzero_at_origin_rejected(self):
        # offset large enough to break the power bound at s=0
        with pytest.raises(ValueError):
            ModelParams(n=2, alpha=1.0, l=0.5, sensitivity=lambda s: 0.5 * s + 1e-3)
        # offset tiny enough to clear the bound check but not f(0)=0
        with pytest.raises(ValueError, match="vanish"):
            ModelParams(
                n=2, alpha=1.0, l=0.5,
                sensitivity=lambda s: np.where(s == 0, -1e-13, 0.5 * s),
            )

    def test_custom_production_negative_rejected(self):
        with pytest.raises(ValueError, match="power bound"):
            ModelParams(n=2, alpha=1.0, l=0.5, production=lambda s: s**0.5 - 0.1)


class TestParamValidation:
    def test_dimension_too_low(self):
        with pytest.raises(ValueError, match="dimension"):
            ModelParams(n=1, alpha=1.0, l=0.5)

    @pytest.mark.parametrize("kwargs", [
        dict(alpha=0.0, l=0.5),
        dict(alpha=1.0, l=0.0),
        dict(alpha=1.0, l=0.5, K=0.0),
        dict(alpha=1.0, l=0.5, K0=-1.0),
    ])
    def test_nonpositive_parameters(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(n=2, **kwargs)


class TestClassifyPP:
    @pytest.mark.parametrize("n,alpha,l,tag", [
        (2, "1", "0.5", RegionTag.THEOREM),
        (2, "1.3", "0.5", RegionTag.OUTSIDE),
        (3, "0.5", "0.7", RegionTag.OUTSIDE),
        (3, "0.5", "0.3", RegionTag.PRIOR_RESULT),
    ])
    def test_examples(self, n, alpha, l, tag):
        assert classify_pp(n, alpha, l).tag is tag

    def test_upper_boundary_is_excluded(self):
        # strict inequality: alpha exactly on the line falls outside
        for n in (2, 3, 4, 5):
            l = Fraction(1, n)
            bound = 1 + Fraction(1, n) - l / 2
            assert classify_pp(n, bound, l).tag is RegionTag.OUTSIDE
            assert classify_pp(n, bound - Fraction(1, 10**9), l).tag is RegionTag.THEOREM

    def test_lower_boundary_is_included(self):
        for n in (2, 3, 4, 5):
            assert classify_pp(n, Fraction(2, n), Fraction(1, n)).tag is RegionTag.THEOREM

    def test_l_boundary_excluded(self):
        assert classify_pp(3, "0.7", Fraction(2, 3)).tag is RegionTag.OUTSIDE

    def test_unsupported_dimension(self):
        with pytest.raises(ValueError, match="dimension"):
            classify_pp(1, "1", "0.5")


class TestClassifyPE:
    @pytest.mark.parametrize("n,alpha,l,tag", [
        (2, "1.4", "0.5", RegionTag.THEOREM),
        (5, "0.95", "0.5", RegionTag.OUTSIDE),
        (2, "2.0", "0.5", RegionTag.OUTSIDE),
    ])
    def test_examples(self, n, alpha, l, tag):
        assert classify_pe(n, alpha, l).tag is tag

    def test_wider_l_range_than_pp(self):
        # l in (2/n, 1) is admissible only for the elliptic simplification
        assert classify_pe(3, "0.7", "0.9").tag is RegionTag.THEOREM
        assert classify_pp(3, "0.7", "0.9").tag is RegionTag.OUTSIDE


class TestRegionStructure:
    def _grid(self, n):
        for i in range(1, 40):
            for j in range(1, 40):
                yield Fraction(i, 20), Fraction(j, 40)  # alpha up to 1.95, l up to 0.975

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_pp_region_contained_in_pe_region(self, n):
        for alpha, l in self._grid(n):
            if classify_pp(n, alpha, l).tag is RegionTag.THEOREM:
                assert classify_pe(n, alpha, l).tag is RegionTag.THEOREM

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_verdict_partition(self, n):
        # independently recompute the defining predicates and demand
        # exactly one region claims each sampled point
        for alpha, l in self._grid(n):
            two_n = Fraction(2, n)
            in_theorem = l < two_n and two_n <= alpha < 1 + Fraction(1, n) - l / 2
            in_prior = l < two_n and alpha < two_n
            tags = [RegionTag.THEOREM] * in_theorem + [RegionTag.PRIOR_RESULT] * in_prior
            if not tags:
                tags = [RegionTag.OUTSIDE]
            assert len(tags) == 1
            assert classify_pp(n, alpha, l).tag is tags[0]
