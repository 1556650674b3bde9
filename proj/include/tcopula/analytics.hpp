#pragma once

#include "tcopula/sampling.hpp"

// Closed-form quantities for the three constructions: inverse-chi moments,
// the correlation-reduction factor of the independent-chi2 construction,
// conditional tail variances and the tail-correlation law
//     corr(X, Z | X > mu) = 1 / sqrt(1 + K'/V),   V = Var[X | X > mu].
namespace tcopula::analytics {

// Moment of order k of the inverse-chi law, Gamma((nu-k)/2)/Gamma(nu/2) * 2^(k/2).
//
// The normalization is that of Y = 1/sqrt(X) with X ~ Gamma(shape nu/2,
// rate 2), i.e. Y = 2/sqrt(C) for C ~ chi2(nu); hence E[C^(-k/2)] is this
// value times 2^-k. Scale-free ratios such as the reduction factor are
// unaffected. Throws DomainError unless nu - k > 0 (the integral diverges).
double inverse_chi_moment(double nu, int k);

// [E(Y)]^2 / E(Y^2) = (Gamma((nu-1)/2) / Gamma(nu/2))^2 * (nu-2)/2, in (0, 1).
// The independent-chi2 construction multiplies rho by this factor.
// Gamma ratios go through log-gamma differences. Requires nu > 2.
double correlation_reduction_factor(double nu);

// Large-nu approximation (nu-2)/(nu-1) of the reduction factor. This comes
// from Gamma((nu-1)/2)/Gamma(nu/2) ~ sqrt(2/(nu-1)), which is only
// asymptotic; the two agree to < 1e-3 for nu >= 50 but are not equal.
double correlation_reduction_asymptotic(double nu);

// rho * correlation_reduction_factor(nu): population correlation of the
// independent-chi2 pair.
double effective_correlation(double rho, double nu);

// Var[X | X > mu] for an exact power-law density tail C x^-n on (mu, inf):
// (n-1) / ((n-2)^2 (n-3)) * mu^2. Requires n > 3 and mu > 0.
double power_law_tail_variance(double n_exponent, double mu);

// Student-t(nu) tail variance mu^2 nu / ((nu-1)^2 (nu-2)); the power-law
// formula with exponent nu + 1. Asymptotic in mu for the actual t law.
double t_tail_variance(double nu, double mu);

double normal_pdf(double x) noexcept;
// Complementary-error-function form for |x| <= 8, continued-fraction
// Mills ratio beyond, so the far tails keep full relative accuracy.
double normal_cdf(double x) noexcept;
// 1 - normal_cdf(x) without cancellation.
double normal_upper_tail(double x) noexcept;
// (1 - N(x)) / n(x), x >= 0.
double mills_ratio(double x) noexcept;

// Var[X | X > mu] for X ~ N(0,1):
//     1 + mu n(mu)/(1-N(mu)) - n(mu)^2/(1-N(mu))^2,
// evaluated in a cancellation-free continued-fraction form for mu > 8.
double normal_tail_variance(double mu) noexcept;

struct TailModelInputs {
    double v_tail = 1.0;   // V = Var[X | X > mu], > 0
    double k_prime = 0.0;  // K' >= 0
};

// 1 / sqrt(1 + K'/V).
double tail_correlation_model(TailModelInputs inputs);

// K' for Z = rho X + sqrt(1 - rho^2) Y with Var[Y] = noise_variance:
// (1 - rho^2) * noise_variance / rho^2. The (1 - rho^2) factor is what the
// conditional-covariance algebra produces; without it rho = 1 would not
// give a tail correlation of one. Requires rho != 0.
double k_prime(double rho, double noise_variance);

// Tail correlation of the correlated-t pair: t_tail_variance with
// K' = k_prime(rho, nu/(nu-2)). Requires nu > 2, 0 < |rho| <= 1, mu > 0.
double correlated_t_tail_correlation(double rho, double nu, double mu);

// sqrt(nu / (nu - 2)); requires nu > 2.
double t_standard_deviation(double nu);

// Threshold expressed both in standard deviations (gamma) and in the
// variable's own units (mu = gamma * sd).
struct TailThreshold {
    double gamma = 0.0;
    double mu = 0.0;

    static TailThreshold from_gamma(double gamma, double standard_deviation);
};

}  // namespace tcopula::analytics
