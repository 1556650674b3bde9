#include "tcopula/copulas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "tcopula/error.hpp"

namespace tcopula {

std::string_view to_string(CopulaMethod method) noexcept {
    switch (method) {
        case CopulaMethod::SameChi2: return "same-chi2";
        case CopulaMethod::IndepChi2: return "indep-chi2";
        case CopulaMethod::CorrelatedT: return "correlated-t";
    }
    return "unknown";
}

CopulaMethod parse_method(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (CopulaMethod m : kAllMethods) {
        if (lower == to_string(m)) return m;
    }
    throw InvalidArgument("unknown method '" + std::string(text) +
                          "' (expected same-chi2, indep-chi2 or correlated-t)");
}

namespace {

void require_finite_variance(DegreesOfFreedom nu) {
    if (!nu.has_finite_variance()) {
        throw DomainError("correlated-t requires nu > 2 so that U and W have finite variance "
                          "and corr(U, V) = rho is defined, got nu = " +
                          std::to_string(nu.value()));
    }
}

}  // namespace

void SimConfig::validate() const {
    if (n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
    const CorrelationCoefficient r(rho);
    const DegreesOfFreedom d(nu);
    (void)r;
    if (method == CopulaMethod::CorrelatedT) require_finite_variance(d);
}

BivariateSample sample_same_chi2(RngStream& stream, CorrelationCoefficient rho, DegreesOfFreedom nu) {
    const auto [x, y] = correlated_normal_pair(stream, rho);
    const double scale = std::sqrt(nu.value() / chi_squared(stream, nu, Lane::Mixing));
    return {x * scale, y * scale};
}

BivariateSample sample_indep_chi2(RngStream& stream, CorrelationCoefficient rho, DegreesOfFreedom nu) {
    const auto [x, y] = correlated_normal_pair(stream, rho);
    const double c1 = chi_squared(stream, nu, Lane::Mixing);
    const double c2 = chi_squared(stream, nu, Lane::MixingAux);
    return {x * std::sqrt(nu.value() / c1), y * std::sqrt(nu.value() / c2)};
}

BivariateSample sample_correlated_t(RngStream& stream, CorrelationCoefficient rho, DegreesOfFreedom nu) {
    require_finite_variance(nu);
    const double u = student_t(stream, nu, Lane::Normal, Lane::Mixing);
    const double w = student_t(stream, nu, Lane::NormalAux, Lane::MixingAux);
    const double r = rho.value();
    if (r == 1.0) return {u, u};
    if (r == -1.0) return {u, -u};
    return {u, r * u + std::sqrt(1.0 - r * r) * w};
}

BivariateSample sample(CopulaMethod method, RngStream& stream, CorrelationCoefficient rho,
                       DegreesOfFreedom nu) {
    switch (method) {
        case CopulaMethod::SameChi2: return sample_same_chi2(stream, rho, nu);
        case CopulaMethod::IndepChi2: return sample_indep_chi2(stream, rho, nu);
        case CopulaMethod::CorrelatedT: return sample_correlated_t(stream, rho, nu);
    }
    throw InvalidArgument("unknown copula method");
}

std::uint64_t method_seed(std::uint64_t seed, CopulaMethod method) noexcept {
    return mix64(mix64(seed) ^ (0x5851F42D4C957F2Dull * (static_cast<std::uint64_t>(method) + 1)));
}

PairGenerator::PairGenerator(const SimConfig& config)
    : config_((config.validate(), config)),
      family_seed_(method_seed(config.seed, config.method)),
      rho_(config.rho),
      nu_(config.nu) {}

BivariateSample PairGenerator::at(std::uint64_t index) const {
    RngStream stream(family_seed_, index);
    return sample(config_.method, stream, rho_, nu_);
}

BivariateSample PairGenerator::next() {
    if (done()) throw InvalidArgument("generator exhausted");
    return at(next_index_++);
}

void PairGenerator::seek(std::uint64_t index) {
    if (index > config_.n_samples) throw InvalidArgument("seek past end of run");
    next_index_ = index;
}

unsigned resolve_threads(unsigned threads) noexcept {
    if (threads != 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void generate_into(const SimConfig& config, std::uint64_t first, std::span<BivariateSample> out,
                   unsigned threads) {
    const PairGenerator gen(config);
    if (first > config.n_samples || out.size() > config.n_samples - first) {
        throw InvalidArgument("requested range exceeds n_samples");
    }
    const std::uint64_t n = out.size();
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::atomic<std::uint64_t> next_block{0};
    auto worker = [&] {
        for (std::uint64_t b = next_block++; b < blocks; b = next_block++) {
            const std::uint64_t end = std::min(n, (b + 1) * kBlockSize);
            for (std::uint64_t i = b * kBlockSize; i < end; ++i) out[i] = gen.at(first + i);
        }
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));
    if (workers <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
}

std::vector<BivariateSample> generate(const SimConfig& config, unsigned threads) {
    config.validate();
    std::vector<BivariateSample> out(config.n_samples);
    generate_into(config, 0, out, threads);
    return out;
}

}  // namespace tcopula
