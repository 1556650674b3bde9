#include "doctest.h"

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "tcopula/analytics.hpp"
#include "tcopula/copulas.hpp"
#include "tcopula/error.hpp"
#include "tcopula/estimators.hpp"

using namespace tcopula;
using namespace tcopula::analytics;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("inverse_chi_moment closed-form values") {
    CHECK(inverse_chi_moment(3, 1) == Approx(2.0 * std::sqrt(2.0) / std::sqrt(kPi)).epsilon(1e-14));
    CHECK(inverse_chi_moment(3, 1) == Approx(1.595769).epsilon(1e-6));
    CHECK(inverse_chi_moment(3, 2) == Approx(4.0).epsilon(1e-14));
    CHECK(inverse_chi_moment(5, 2) == Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("inverse_chi_moment matches quadrature of the transformed density") {
    for (int nu = 3; nu <= 30; ++nu) {
        for (int k = 1; k <= 2; ++k) {
            const double q = oracle::inverse_chi_moment_quadrature(nu, k);
            CAPTURE(nu);
            CAPTURE(k);
            CHECK(std::fabs(inverse_chi_moment(nu, k) / q - 1.0) < 1e-8);
        }
    }
    // nu = 5, k = 2 frozen from the oracle: 4/3.
    CHECK(oracle::inverse_chi_moment_quadrature(5, 2) == Approx(4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("inverse_chi_moment rejects divergent orders") {
    CHECK_THROWS_AS(inverse_chi_moment(2, 2), DomainError);
    CHECK_THROWS_AS(inverse_chi_moment(1.5, 2), DomainError);
    CHECK_THROWS_AS(inverse_chi_moment(1, 1), DomainError);
    CHECK_THROWS_AS(inverse_chi_moment(3, 0), DomainError);
    CHECK_NOTHROW(inverse_chi_moment(2.0001, 2));
}

TEST_CASE("correlation_reduction_factor reproduces the reduction table") {
    const std::pair<double, double> table[] = {{3, 0.6366},  {4, 0.7854},  {5, 0.8488},  {6, 0.8836},
                                               {7, 0.9054},  {8, 0.9204},  {9, 0.9313},  {10, 0.9396},
                                               {20, 0.9726}, {50, 0.9896}, {100, 0.9949}};
    for (auto [nu, expected] : table) {
        CAPTURE(nu);
        CHECK(std::fabs(correlation_reduction_factor(nu) - expected) <= 5e-5);
    }
    CHECK(correlation_reduction_factor(3) == Approx(2.0 / kPi).epsilon(1e-13));
    CHECK(correlation_reduction_factor(4) == Approx(kPi / 4.0).epsilon(1e-13));
}

TEST_CASE("correlation_reduction_factor domain") {
    CHECK_THROWS_AS(correlation_reduction_factor(2.0), DomainError);
    CHECK_THROWS_AS(correlation_reduction_factor(1.0), DomainError);
    CHECK_THROWS_AS(correlation_reduction_factor(-3.0), DomainError);
    CHECK_THROWS_AS(correlation_reduction_asymptotic(2.0), DomainError);
    // Gamma(nu/2) alone overflows near nu = 340; the log-gamma route does not.
    CHECK(std::isfinite(correlation_reduction_factor(1000)));
    CHECK(std::isfinite(correlation_reduction_factor(1e6)));
}

TEST_CASE("reduction factor lies strictly inside (0, 1) on a log grid") {
    for (double e = 0.0; e <= 6.0; e += 0.05) {
        const double nu = 2.0 + std::pow(10.0, e) - 0.999;  // starts just above 2
        const double f = correlation_reduction_factor(nu);
        CAPTURE(nu);
        CHECK(f > 0.0);
        CHECK(f < 1.0);
    }
}

TEST_CASE("reduction factor increases toward one and approaches the asymptotic form") {
    double prev = 0.0;
    for (double nu = 2.5; nu <= 2000; nu *= 1.1) {
        const double f = correlation_reduction_factor(nu);
        CHECK(f > prev);
        prev = f;
        // exact - asymptotic = 1/(2 nu) + O(nu^-2)
        if (nu >= 100) CHECK((f - correlation_reduction_asymptotic(nu)) * nu == Approx(0.5).epsilon(0.05));
    }
    CHECK(correlation_reduction_asymptotic(3) == 0.5);
    CHECK(correlation_reduction_asymptotic(100) == Approx(98.0 / 99.0).epsilon(1e-15));
    // The gap is about 1/(2 nu): 0.005012 at nu = 100 and 0.0005001 at
    // nu = 1000, where the two round to 0.9995 and 0.9990.
    auto gap = [](long double nu) {
        const long double r = std::exp(std::lgamma((nu - 1) / 2) - std::lgamma(nu / 2));
        return r * r * (nu - 2) / 2 - (nu - 2) / (nu - 1);
    };
    CHECK(correlation_reduction_factor(100) - correlation_reduction_asymptotic(100) ==
          Approx(static_cast<double>(gap(100))).epsilon(1e-9));
    CHECK(correlation_reduction_factor(1000) - correlation_reduction_asymptotic(1000) ==
          Approx(static_cast<double>(gap(1000))).epsilon(1e-7));
    CHECK(std::fabs(correlation_reduction_factor(100) - correlation_reduction_asymptotic(100) - 0.00501205) < 1e-7);
}

TEST_CASE("moment-ratio identity") {
    for (int nu = 3; nu <= 200; ++nu) {
        const double m1 = inverse_chi_moment(nu, 1);
        const double ratio = m1 * m1 / inverse_chi_moment(nu, 2);
        CAPTURE(nu);
        CHECK(std::fabs(correlation_reduction_factor(nu) - ratio) < 1e-12);
    }
}

TEST_CASE("effective_correlation") {
    CHECK(effective_correlation(0.9, 3) == Approx(0.9 * 2.0 / kPi).epsilon(1e-13));
    CHECK(std::fabs(effective_correlation(0.9, 3) - 0.5730) < 5e-5);
    CHECK(effective_correlation(0.0, 7) == 0.0);
    CHECK(std::fabs(effective_correlation(0.9, 20) - 0.9 * 0.9726) < 5e-5);
    CHECK_THROWS_AS(effective_correlation(1.5, 3), DomainError);
    CHECK_THROWS_AS(effective_correlation(0.5, 2), DomainError);
}

TEST_CASE("power_law_tail_variance") {
    CHECK(power_law_tail_variance(4, 10) == Approx(75.0).epsilon(1e-14));
    CHECK(oracle::power_law_tail_variance_quadrature(4, 10) == Approx(75.0).epsilon(1e-8));
    CHECK(power_law_tail_variance(5, 1) == Approx(4.0 / 18.0).epsilon(1e-14));
    for (double n : {3.5, 4.0, 5.0, 7.5}) {
        for (double mu : {0.5, 1.0, 3.0, 10.0}) {
            CHECK(power_law_tail_variance(n, 2 * mu) / power_law_tail_variance(n, mu) ==
                  Approx(4.0).epsilon(1e-14));
            CHECK(power_law_tail_variance(n, mu) ==
                  Approx(oracle::power_law_tail_variance_quadrature(n, mu)).epsilon(1e-6));
        }
    }
    CHECK_THROWS_AS(power_law_tail_variance(3.0, 1.0), DomainError);
    CHECK_THROWS_AS(power_law_tail_variance(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(power_law_tail_variance(4.0, 0.0), DomainError);
    CHECK_THROWS_AS(power_law_tail_variance(4.0, -1.0), DomainError);
}

TEST_CASE("t_tail_variance equals the power-law formula with exponent nu + 1") {
    CHECK(t_tail_variance(3, 10) == Approx(75.0).epsilon(1e-14));
    CHECK(t_tail_variance(5, 1) == Approx(5.0 / 48.0).epsilon(1e-14));
    for (double nu : {2.5, 3.0, 4.0, 5.0, 10.0, 30.0}) {
        for (double mu : {0.1, 1.0, 3.0, 17.0, 1000.0}) {
            const double a = t_tail_variance(nu, mu);
            const double b = power_law_tail_variance(nu + 1, mu);
            CHECK(std::fabs(a - b) <= 1e-12 * std::fabs(b));
        }
    }
    CHECK_THROWS_AS(t_tail_variance(2, 1), DomainError);
    CHECK_THROWS_AS(t_tail_variance(3, 0), DomainError);
}

TEST_CASE("t_tail_variance is an asymptotic tail statement") {
    // Exact Var[T | T > mu] for t(3) approaches the formula as mu grows.
    const double mu0 = 3.0 * std::sqrt(3.0);
    const double exact = oracle::t_tail_variance_quadrature(3, mu0);
    CHECK(std::fabs(t_tail_variance(3, mu0) / exact - 1.0) < 0.15);
    const double far = oracle::t_tail_variance_quadrature(3, 100.0);
    CHECK(std::fabs(t_tail_variance(3, 100.0) / far - 1.0) < 0.01);
}

TEST_CASE("t_tail_variance against Monte-Carlo conditional variance") {
    // 10^7 t(3) draws, mu = 3 sqrt(3). The t(3) law has no fourth moment, so
    // this estimate is noisy; the 15% band is the documented tolerance.
    const double mu = 3.0 * std::sqrt(3.0);
    const DegreesOfFreedom nu(3.0);
    MomentAccumulator acc;
    for (std::uint64_t i = 0; i < 10'000'000; ++i) {
        RngStream s(1, i);
        const double t = student_t(s, nu);
        if (t > mu) acc.add(t, t);
    }
    const double empirical = *acc.variance_u();
    CAPTURE(empirical);
    CAPTURE(acc.count());
    CHECK(std::fabs(empirical / t_tail_variance(3, mu) - 1.0) < 0.15);
}

TEST_CASE("normal pdf and cdf") {
    CHECK(normal_pdf(0) == Approx(1.0 / std::sqrt(2 * kPi)).epsilon(1e-15));
    CHECK(normal_pdf(0) == Approx(0.3989423).epsilon(1e-7));
    CHECK(normal_cdf(0) == 0.5);
    CHECK(std::fabs(normal_cdf(1.959964) - 0.975) < 1e-6);
    CHECK(std::fabs(normal_cdf(1.959964) - oracle::normal_cdf_series(1.959964)) < 1e-14);
    for (double x = -8.0; x <= 8.0; x += 0.01) {
        CHECK(std::fabs(normal_cdf(x) - oracle::normal_cdf(x)) < 1e-12);
    }
    for (double x = -3.0; x <= 3.0; x += 0.25) {
        CHECK(std::fabs(normal_cdf(x) - oracle::normal_cdf_series(x)) < 1e-13);
    }
}

TEST_CASE("normal tails beyond the switch point keep relative accuracy") {
    for (double x = 8.0; x <= 37.0; x += 0.5) {
        const double q = 0.5 * std::erfc(x / std::numbers::sqrt2);
        CAPTURE(x);
        // exp(-x^2/2) alone carries relative error ~ x^2/2 * 2^-53.
        CHECK(std::fabs(normal_upper_tail(x) / q - 1.0) < 5e-13);
        CHECK(std::fabs(normal_cdf(-x) / q - 1.0) < 5e-13);
    }
    CHECK(normal_upper_tail(37.5) > 0.0);
    CHECK(normal_cdf(-37.5) > 0.0);
    CHECK(normal_upper_tail(50.0) == 0.0);  // true value ~1e-545 underflows
    CHECK(normal_cdf(50.0) == 1.0);
    // Continuity across the switch.
    CHECK(normal_cdf(-8.0 - 1e-12) == Approx(normal_cdf(-8.0)).epsilon(1e-10));
    CHECK(mills_ratio(8.0 + 1e-12) == Approx(mills_ratio(8.0)).epsilon(1e-10));
}

TEST_CASE("normal_tail_variance") {
    CHECK(normal_tail_variance(0) == Approx(1.0 - 2.0 / kPi).epsilon(1e-14));
    CHECK(normal_tail_variance(0) == Approx(0.36338).epsilon(1e-5));
    CHECK(normal_tail_variance(10) < 0.01);
    CHECK(normal_tail_variance(5) < normal_tail_variance(3));
    CHECK(normal_tail_variance(3) < normal_tail_variance(1));
    CHECK(oracle::normal_tail_variance_quadrature(5) < oracle::normal_tail_variance_quadrature(3));
    CHECK(oracle::normal_tail_variance_quadrature(3) < oracle::normal_tail_variance_quadrature(1));
    CHECK(oracle::normal_tail_variance_quadrature(10) < 0.01);
}

TEST_CASE("normal_tail_variance matches quadrature") {
    for (double mu : {-5.0, -3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 7.999, 8.0, 8.001, 8.5, 10.0,
                      15.0, 20.0, 40.0}) {
        const double q = oracle::normal_tail_variance_quadrature(mu);
        CAPTURE(mu);
        CHECK(std::fabs(normal_tail_variance(mu) / q - 1.0) < 1e-8);
    }
}

TEST_CASE("normal_tail_variance decreases to zero without underflow") {
    double prev = normal_tail_variance(-5.0);
    for (double mu = -4.5; mu <= 1000.0; mu += 0.5) {
        const double v = normal_tail_variance(mu);
        CAPTURE(mu);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // ~1/mu^2 deep in the tail.
    CHECK(normal_tail_variance(1000.0) * 1e6 == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("tail_correlation_model") {
    for (double v : {0.1, 1.0, 100.0}) CHECK(tail_correlation_model({v, 0.0}) == 1.0);
    CHECK(tail_correlation_model({2.5, 2.5}) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    double prev = 0.0;
    for (int k = 1; k <= 8; ++k) {
        const double c = tail_correlation_model({std::pow(10.0, k), 3.0});
        CHECK(c > prev);
        CHECK(c <= 1.0);
        prev = c;
    }
    CHECK(prev > 0.999999);
    double last = 1.1;
    for (double kp = 0.0; kp < 50.0; kp += 0.5) {
        const double c = tail_correlation_model({2.0, kp});
        CHECK(c > 0.0);
        CHECK(c <= 1.0);
        CHECK(c < last);
        last = c;
    }
    CHECK_THROWS_AS(tail_correlation_model({0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(tail_correlation_model({-1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(tail_correlation_model({1.0, -1.0}), DomainError);
}

TEST_CASE("correlated_t_tail_correlation") {
    for (double nu : {2.5, 3.0, 10.0}) {
        for (double mu : {0.5, 3.0, 50.0}) CHECK(correlated_t_tail_correlation(1.0, nu, mu) == 1.0);
    }
    double prev = 0.0;
    for (int k = 0; k <= 6; ++k) {
        const double c = correlated_t_tail_correlation(0.9, 3, std::pow(10.0, k));
        CHECK(c > prev);
        prev = c;
    }
    CHECK(prev > 0.9999);
    // Proof-consistent K' = (1 - rho^2) * 3 / rho^2 at rho = 0.9.
    CHECK(k_prime(0.9, 3.0) == Approx(0.19 * 3.0 / 0.81).epsilon(1e-15));
    const double at_2sd = correlated_t_tail_correlation(0.9, 3, 2.0 * std::sqrt(3.0));
    CHECK(std::fabs(at_2sd - 0.9314) < 0.05);
    CHECK_THROWS_AS(correlated_t_tail_correlation(0.0, 3, 1.0), DomainError);
    CHECK_THROWS_AS(correlated_t_tail_correlation(0.9, 2, 1.0), DomainError);
    CHECK_THROWS_AS(correlated_t_tail_correlation(0.9, 3, 0.0), DomainError);
    CHECK_THROWS_AS(correlated_t_tail_correlation(1.2, 3, 1.0), DomainError);
}

TEST_CASE("correlated-t tail model against simulation at two standard deviations") {
    SimConfig cfg{CopulaMethod::CorrelatedT, 0.9, 3.0, 1'000'000, 1};
    const auto pairs = generate(cfg);
    const double mu = 2.0 * std::sqrt(3.0);
    const auto stat = tail_correlation(pairs, 2.0, std::sqrt(3.0));
    REQUIRE(stat.value);
    CHECK(std::fabs(correlated_t_tail_correlation(0.9, 3, mu) - *stat.value) < 0.05);
}

TEST_CASE("TailThreshold") {
    const auto t = TailThreshold::from_gamma(2.0, t_standard_deviation(3.0));
    CHECK(t.mu == Approx(2.0 * std::sqrt(3.0)).epsilon(1e-15));
    CHECK(t.gamma == 2.0);
    CHECK_THROWS_AS(TailThreshold::from_gamma(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(t_standard_deviation(2.0), DomainError);
}
