#include "tcopula/analytics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tcopula/error.hpp"

namespace tcopula::analytics {

namespace {

constexpr double kTailSwitch = 8.0;
constexpr int kMillsTerms = 200;

void require_nu_above_two(double nu, const char* what) {
    if (!(nu > 2.0) || !std::isfinite(nu)) {
        throw DomainError(std::string(what) + " requires nu > 2, got " + std::to_string(nu));
    }
}

void require_positive_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("tail threshold mu must be > 0, got " + std::to_string(mu));
    }
}

// Gamma(a) / Gamma(b) for a, b > 0.
double gamma_ratio(double a, double b) {
    return std::exp(std::lgamma(a) - std::lgamma(b));
}

// Tail t_k = k / (x + t_{k+1}) of the Mills-ratio continued fraction,
// R(x) = 1 / (x + t_1). Returns {t_1, t_2}.
std::pair<double, double> mills_tails(double x) noexcept {
    double t = 0.0;
    for (int k = kMillsTerms; k >= 2; --k) t = k / (x + t);
    const double t2 = t;
    return {1.0 / (x + t2), t2};
}

}  // namespace

double inverse_chi_moment(double nu, int k) {
    if (k < 1) throw DomainError("moment order k must be a positive integer");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("nu must be > 0");
    if (!(nu - k > 0.0)) {
        throw DomainError("inverse-chi moment undefined: order " + std::to_string(k) +
                          " requires nu > " + std::to_string(k) + ", got nu = " + std::to_string(nu));
    }
    return gamma_ratio(0.5 * (nu - k), 0.5 * nu) * std::pow(2.0, 0.5 * k);
}

double correlation_reduction_factor(double nu) {
    require_nu_above_two(nu, "correlation reduction factor");
    const double r = gamma_ratio(0.5 * (nu - 1.0), 0.5 * nu);
    return r * r * 0.5 * (nu - 2.0);
}

double correlation_reduction_asymptotic(double nu) {
    require_nu_above_two(nu, "asymptotic reduction factor");
    return (nu - 2.0) / (nu - 1.0);
}

double effective_correlation(double rho, double nu) {
    return CorrelationCoefficient(rho).value() * correlation_reduction_factor(nu);
}

double power_law_tail_variance(double n_exponent, double mu) {
    if (!(n_exponent > 3.0) || !std::isfinite(n_exponent)) {
        throw DomainError("infinite tail variance: power-law exponent must be > 3, got " +
                          std::to_string(n_exponent));
    }
    require_positive_mu(mu);
    const double n = n_exponent;
    return (n - 1.0) / ((n - 2.0) * (n - 2.0) * (n - 3.0)) * mu * mu;
}

double t_tail_variance(double nu, double mu) {
    require_nu_above_two(nu, "t tail variance");
    require_positive_mu(mu);
    return mu * mu * nu / ((nu - 1.0) * (nu - 1.0) * (nu - 2.0));
}

double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double mills_ratio(double x) noexcept {
    if (x < kTailSwitch) return 0.5 * std::erfc(x / std::numbers::sqrt2) / normal_pdf(x);
    const auto [t1, t2] = mills_tails(x);
    (void)t2;
    return 1.0 / (x + t1);
}

double normal_upper_tail(double x) noexcept {
    if (x > kTailSwitch) return normal_pdf(x) * mills_ratio(x);
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_cdf(double x) noexcept {
    if (x < -kTailSwitch) return normal_pdf(x) * mills_ratio(-x);
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_tail_variance(double mu) noexcept {
    if (mu <= kTailSwitch) {
        const double lambda = normal_pdf(mu) / normal_upper_tail(mu);
        return 1.0 + mu * lambda - lambda * lambda;
    }
    // With lambda = mu + t1 and mu * t1 = 1 - t2 * t1 the expression above
    // collapses to t1 * (t2 - t1), free of the O(mu^2) cancellation.
    const auto [t1, t2] = mills_tails(mu);
    return t1 * (t2 - t1);
}

double tail_correlation_model(TailModelInputs inputs) {
    if (!(inputs.v_tail > 0.0)) throw DomainError("tail variance V must be > 0");
    if (!(inputs.k_prime >= 0.0)) throw DomainError("K' must be >= 0");
    return 1.0 / std::sqrt(1.0 + inputs.k_prime / inputs.v_tail);
}

double k_prime(double rho, double noise_variance) {
    const double r = CorrelationCoefficient(rho).value();
    if (r == 0.0) {
        throw DomainError("tail-correlation law needs rho != 0; independent variables have "
                          "tail correlation 0");
    }
    if (!(noise_variance >= 0.0)) throw DomainError("noise variance must be >= 0");
    return (1.0 - r * r) * noise_variance / (r * r);
}

double correlated_t_tail_correlation(double rho, double nu, double mu) {
    require_nu_above_two(nu, "correlated-t tail correlation");
    const double kp = k_prime(rho, nu / (nu - 2.0));
    return tail_correlation_model({t_tail_variance(nu, mu), kp});
}

double t_standard_deviation(double nu) {
    require_nu_above_two(nu, "t standard deviation");
    return std::sqrt(nu / (nu - 2.0));
}

TailThreshold TailThreshold::from_gamma(double gamma, double standard_deviation) {
    if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
    if (!(standard_deviation > 0.0)) throw DomainError("standard deviation must be > 0");
    return {gamma, gamma * standard_deviation};
}

}  // namespace tcopula::analytics
