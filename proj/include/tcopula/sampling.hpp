#pragma once

#include <utility>

#include "tcopula/rng.hpp"

namespace tcopula {

// Degrees of freedom of a Student-t / chi-squared law. Always > 0 and
// finite; operations needing a finite variance check nu > 2 themselves.
class DegreesOfFreedom {
public:
    explicit DegreesOfFreedom(double nu);
    double value() const noexcept { return nu_; }
    bool has_finite_variance() const noexcept { return nu_ > 2.0; }

private:
    double nu_;
};

// Pearson correlation coefficient, |rho| <= 1.
class CorrelationCoefficient {
public:
    explicit CorrelationCoefficient(double rho);
    double value() const noexcept { return rho_; }

private:
    double rho_;
};

// Polar (Marsaglia) method; the second variate of each accepted pair is
// cached on the lane and returned by the next call.
double standard_normal(RngStream& stream, Lane lane = Lane::Normal);

// (X, rho*X + sqrt(1-rho^2)*Z), both drawn from the Normal lane.
std::pair<double, double> correlated_normal_pair(RngStream& stream, CorrelationCoefficient rho);

// Gamma(shape, scale 1) by Marsaglia-Tsang squeeze/rejection; shapes below
// one use the U^(1/shape) boost. All randomness comes from `lane`.
double gamma_variate(RngStream& stream, double shape, Lane lane);

// Chi-squared(nu) = 2 * Gamma(nu/2). Always strictly positive.
double chi_squared(RngStream& stream, DegreesOfFreedom nu, Lane lane = Lane::Mixing);

// X * sqrt(nu / C) with X taken from `normal_lane` and C from `mixing_lane`.
double student_t(RngStream& stream, DegreesOfFreedom nu,
                 Lane normal_lane = Lane::Normal, Lane mixing_lane = Lane::Mixing);

}  // namespace tcopula
