# Log-location-scale lifetime models, SAFT scaling, proportional hazards,
# and the time-transformation axiom checker.

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from altkit import (
    LifeDistribution,
    SaftModel,
    TimeTransformation,
    Temperature,
    VaryingSigmaModel,
    arrhenius_af,
    cdf,
    check_time_transformation,
    ph_transform,
    quantile,
    saft_distribution_at,
    saft_quantile,
    std_cdf,
    std_dlogpdf,
    std_dlogsf,
    std_logpdf,
    std_logsf,
    std_quantile,
    varying_sigma_quantile_ratio,
)
from altkit.errors import DomainError


class TestStandardFunctions:
    def test_lognormal_matches_scipy(self):
        from scipy.stats import norm

        z = np.linspace(-6.0, 6.0, 25)
        assert_allclose(std_cdf(z, "lognormal"), norm.cdf(z), rtol=1e-12)
        assert_allclose(std_logpdf(z, "lognormal"), norm.logpdf(z), rtol=1e-12)
        assert_allclose(std_logsf(z, "lognormal"), norm.logsf(z), rtol=1e-10)

    def test_weibull_smallest_extreme_value(self):
        # F(z) = 1 - exp(-exp(z)); at z = 0 this is 1 - 1/e.
        assert_allclose(std_cdf(0.0, "weibull"), 1.0 - math.exp(-1.0), rtol=1e-15)
        z = np.linspace(-6.0, 2.0, 17)
        assert_allclose(std_cdf(std_quantile(std_cdf(z, "weibull"), "weibull"),
                                "weibull"),
                        std_cdf(z, "weibull"), rtol=1e-12)

    def test_quantile_inverts_cdf(self):
        p = np.array([0.01, 0.1, 0.5, 0.9, 0.99])
        for family in ("lognormal", "weibull"):
            assert_allclose(std_cdf(std_quantile(p, family), family), p,
                            rtol=1e-12)

    def test_deep_tail_log_survival(self):
        # log S must stay finite and accurate where 1 - F underflows.
        assert std_logsf(40.0, "lognormal") < -700.0
        assert math.isfinite(std_logsf(40.0, "lognormal"))

    def test_score_functions_match_finite_differences(self):
        z = np.linspace(-3.0, 3.0, 13)
        h = 1e-6
        for family in ("lognormal", "weibull"):
            d_pdf = (std_logpdf(z + h, family) - std_logpdf(z - h, family)) / (2 * h)
            d_sf = (std_logsf(z + h, family) - std_logsf(z - h, family)) / (2 * h)
            assert_allclose(std_dlogpdf(z, family), d_pdf, rtol=1e-7, atol=1e-9)
            assert_allclose(std_dlogsf(z, family), d_sf, rtol=1e-7, atol=1e-9)

    def test_unknown_family(self):
        with pytest.raises(DomainError):
            std_cdf(0.0, "gamma")


class TestLifeDistribution:
    def test_lognormal_median(self):
        d = LifeDistribution("lognormal", mu=2.0, sigma=0.5)
        assert_allclose(quantile(d, 0.5), math.exp(2.0), rtol=1e-12)

    def test_quantile_cdf_roundtrip(self):
        d = LifeDistribution("weibull", mu=1.5, sigma=0.8)
        for p in (0.01, 0.1, 0.5, 0.632, 0.99):
            assert_allclose(cdf(d, quantile(d, p)), p, rtol=1e-10)

    def test_weibull_shape_scale(self):
        d = LifeDistribution("weibull", mu=2.0, sigma=0.25)
        assert_allclose(d.weibull_shape, 4.0, rtol=1e-15)
        assert_allclose(d.weibull_scale, math.exp(2.0), rtol=1e-15)
        # The scale parameter is the 63.2% point: F(eta) = 1 - 1/e.
        assert_allclose(cdf(d, d.weibull_scale), 1.0 - math.exp(-1.0),
                        rtol=1e-12)

    def test_validation(self):
        with pytest.raises(DomainError):
            LifeDistribution("lognormal", 0.0, 0.0)
        with pytest.raises(DomainError):
            LifeDistribution("normal", 0.0, 1.0)
        d = LifeDistribution("lognormal", 0.0, 1.0)
        with pytest.raises(DomainError):
            d.weibull_shape
        with pytest.raises(DomainError):
            cdf(d, 0.0)
        with pytest.raises(DomainError):
            quantile(d, 1.0)


class TestSaftScaling:
    def test_quantile_division(self):
        assert saft_quantile(1200.0, 24.0) == 50.0
        with pytest.raises(DomainError):
            saft_quantile(1200.0, 0.0)

    def test_distribution_shift(self):
        # Dividing lifetimes by AF shifts the log-location by -log AF and
        # leaves sigma untouched, for either family.
        base = LifeDistribution("weibull", mu=8.0, sigma=0.7)
        model = SaftModel(base, lambda x: arrhenius_af(
            Temperature.celsius(x), Temperature.celsius(50.0), 0.5))
        at_test = saft_distribution_at(model, 120.0)
        af = arrhenius_af(Temperature.celsius(120.0),
                          Temperature.celsius(50.0), 0.5)
        assert at_test.family == "weibull"
        assert at_test.sigma == base.sigma
        assert_allclose(at_test.mu, base.mu - math.log(af), rtol=1e-12)

    def test_every_quantile_scales_by_the_same_factor(self):
        base = LifeDistribution("lognormal", mu=8.0, sigma=0.7)
        model = SaftModel(base, lambda x: x)  # x is the factor itself
        at_test = saft_distribution_at(model, 37.5)
        for p in (0.01, 0.1, 0.5, 0.9):
            assert_allclose(quantile(base, p) / quantile(at_test, p), 37.5,
                            rtol=1e-12)

    def test_cdf_time_scaling(self):
        # F(t; x) = F_use(AF * t) pointwise in t.
        base = LifeDistribution("lognormal", mu=4.0, sigma=0.5)
        model = SaftModel(base, lambda x: x)
        at_test = saft_distribution_at(model, 6.0)
        for t in (1.0, 10.0, 55.0, 300.0):
            assert_allclose(cdf(at_test, t), cdf(base, 6.0 * t), rtol=1e-12)

    def test_nonpositive_af_rejected(self):
        base = LifeDistribution("lognormal", mu=4.0, sigma=0.5)
        model = SaftModel(base, lambda x: 0.0)
        with pytest.raises(DomainError):
            saft_distribution_at(model, 1.0)


class TestProportionalHazards:
    def test_weibull_ph_is_a_scale_change(self):
        # With a Weibull baseline, multiplying the hazard by psi divides
        # every lifetime by psi^sigma: PH and scale acceleration coincide.
        f_use = LifeDistribution("weibull", mu=5.0, sigma=0.5)
        psi = 4.0
        for t in (10.0, 50.0, 148.4, 500.0):
            assert_allclose(ph_transform(f_use, psi, t), t / psi**0.5,
                            rtol=1e-9)

    def test_lognormal_ph_is_not_a_scale_change(self):
        # The implied time ratio must drift with t; a single AF cannot
        # reproduce a lognormal hazard multiplication.
        f_use = LifeDistribution("lognormal", mu=5.0, sigma=0.5)
        psi = 4.0
        ts = [20.0, 148.4, 1000.0]
        ratios = [t / ph_transform(f_use, psi, t) for t in ts]
        assert max(ratios) / min(ratios) > 1.05
        # ...and the transformed times are still ordered and accelerated.
        assert all(r > 1.0 for r in ratios)

    def test_domain(self):
        f_use = LifeDistribution("lognormal", mu=5.0, sigma=0.5)
        with pytest.raises(DomainError):
            ph_transform(f_use, 0.0, 10.0)
        with pytest.raises(DomainError):
            ph_transform(f_use, 4.0, 0.0)


class TestVaryingSigma:
    def test_constant_sigma_reduces_to_af(self):
        m = VaryingSigmaModel(mu=lambda x: 10.0 - 2.0 * math.log(x),
                              log_sigma=lambda x: math.log(0.6))
        r01 = varying_sigma_quantile_ratio(m, 5.0, 1.0, 0.1)
        r09 = varying_sigma_quantile_ratio(m, 5.0, 1.0, 0.9)
        assert_allclose(r01, r09, rtol=1e-12)
        assert_allclose(r01, 5.0**2.0, rtol=1e-12)

    def test_varying_sigma_breaks_scale_acceleration(self):
        # When sigma depends on the condition the p = 0.1 and p = 0.9
        # "acceleration factors" disagree, so no single AF exists.
        m = VaryingSigmaModel(mu=lambda x: 10.0 - 2.0 * math.log(x),
                              log_sigma=lambda x: -0.5 + 0.3 * math.log(x))
        r01 = varying_sigma_quantile_ratio(m, 5.0, 1.0, 0.1)
        r09 = varying_sigma_quantile_ratio(m, 5.0, 1.0, 0.9)
        assert abs(r01 / r09 - 1.0) > 0.1


class TestTimeTransformationAxioms:
    def test_classification_accelerating(self):
        # Transformed times below the diagonal at every non-use condition.
        tt = TimeTransformation(func=lambda t, x: t / x, x_use=1.0)
        report = check_time_transformation(
            tt, np.linspace(0.0, 100.0, 21), [1.0, 4.0, 10.0])
        assert report.all_axioms_pass
        assert report.classification == "accelerating"
        assert report.crossing_time is None

    def test_classification_decelerating(self):
        tt = TimeTransformation(func=lambda t, x: t * x, x_use=1.0)
        report = check_time_transformation(
            tt, np.linspace(0.0, 100.0, 21), [1.0, 3.0])
        assert report.classification == "decelerating"

    def test_classification_identity(self):
        tt = TimeTransformation(func=lambda t, x: t, x_use=1.0)
        report = check_time_transformation(
            tt, np.linspace(0.0, 100.0, 21), [1.0, 2.0])
        assert report.classification == "identity"

    def test_crossing_located_by_bisection(self):
        # t^2/4 sits below the diagonal for t < 4 and above for t > 4.
        tt = TimeTransformation(func=lambda t, x: t * t / 4.0 if x != 1.0 else t,
                                x_use=1.0)
        report = check_time_transformation(
            tt, np.linspace(0.0, 10.0, 41), [1.0, 2.0])
        assert report.classification == "crossing"
        assert_allclose(report.crossing_time, 4.0, atol=1e-6)

    def test_axiom_failures_reported(self):
        tt = TimeTransformation(func=lambda t, x: t - x, x_use=0.0)
        report = check_time_transformation(
            tt, np.linspace(0.0, 10.0, 11), [0.0, 1.0])
        assert not report.all_axioms_pass
        assert not report.nonnegative
        assert report.failures

    def test_validity_interval_enforced(self):
        tt = TimeTransformation(func=lambda t, x: t / x, x_use=1.0,
                                validity=(1.0, 50.0))
        with pytest.raises(DomainError):
            tt(0.5, 2.0)
        report = check_time_transformation(
            tt, np.linspace(1.0, 50.0, 15), [1.0, 2.0])
        # t = 0 is outside the validity window, so that axiom is untestable.
        assert report.zero_at_origin is None
        assert report.all_axioms_pass
