#include "tcopula/sampling.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tcopula/error.hpp"

namespace tcopula {

DegreesOfFreedom::DegreesOfFreedom(double nu) : nu_(nu) {
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw DomainError("degrees of freedom must be a finite value > 0, got " + std::to_string(nu));
    }
}

CorrelationCoefficient::CorrelationCoefficient(double rho) : rho_(rho) {
    if (!(std::fabs(rho) <= 1.0)) {
        throw DomainError("correlation must satisfy |rho| <= 1, got " + std::to_string(rho));
    }
}

double standard_normal(RngStream& stream, Lane lane) {
    auto& spare = stream.spare_normal(lane);
    if (spare) {
        const double z = *spare;
        spare.reset();
        return z;
    }
    double x, y, s;
    do {
        x = 2.0 * stream.uniform(lane) - 1.0;
        y = 2.0 * stream.uniform(lane) - 1.0;
        s = x * x + y * y;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare = y * f;
    return x * f;
}

std::pair<double, double> correlated_normal_pair(RngStream& stream, CorrelationCoefficient rho) {
    const double x = standard_normal(stream, Lane::Normal);
    const double z = standard_normal(stream, Lane::Normal);
    const double r = rho.value();
    if (r == 1.0) return {x, x};
    if (r == -1.0) return {x, -x};
    return {x, r * x + std::sqrt(1.0 - r * r) * z};
}

double gamma_variate(RngStream& stream, double shape, Lane lane) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw DomainError("gamma shape must be > 0");
    }
    if (shape < 1.0) {
        const double g = gamma_variate(stream, shape + 1.0, lane);
        const double u = stream.uniform(lane);
        const double out = g * std::pow(u, 1.0 / shape);
        // Tiny shapes can underflow; the law is supported on (0, inf).
        return out > 0.0 ? out : std::numeric_limits<double>::min();
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(stream, lane);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.uniform(lane);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double chi_squared(RngStream& stream, DegreesOfFreedom nu, Lane lane) {
    return 2.0 * gamma_variate(stream, 0.5 * nu.value(), lane);
}

double student_t(RngStream& stream, DegreesOfFreedom nu, Lane normal_lane, Lane mixing_lane) {
    const double x = standard_normal(stream, normal_lane);
    const double c = chi_squared(stream, nu, mixing_lane);
    return x * std::sqrt(nu.value() / c);
}

}  // namespace tcopula
