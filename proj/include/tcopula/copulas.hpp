#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "tcopula/rng.hpp"
#include "tcopula/sampling.hpp"

namespace tcopula {

enum class CopulaMethod {
    SameChi2,     // U = X sqrt(nu/C),  V = Y sqrt(nu/C)
    IndepChi2,    // U = X sqrt(nu/C1), V = Y sqrt(nu/C2)
    CorrelatedT,  // V = rho U + sqrt(1 - rho^2) W
};

inline constexpr CopulaMethod kAllMethods[] = {
    CopulaMethod::SameChi2, CopulaMethod::IndepChi2, CopulaMethod::CorrelatedT};

// Canonical names: "same-chi2", "indep-chi2", "correlated-t".
std::string_view to_string(CopulaMethod method) noexcept;
// Case-insensitive; throws InvalidArgument on anything else.
CopulaMethod parse_method(std::string_view text);

struct BivariateSample {
    double u = 0.0;
    double v = 0.0;
};

struct SimConfig {
    CopulaMethod method = CopulaMethod::SameChi2;
    double rho = 0.9;
    double nu = 3.0;
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;

    // Throws DomainError / InvalidArgument when an invariant is broken,
    // including CorrelatedT with nu <= 2.
    void validate() const;
};

// Draw ordering, fixed for reproducibility:
//   SameChi2     (X, Y) <- Normal lane, C <- Mixing lane
//   IndepChi2    (X, Y) <- Normal lane, C1 <- Mixing lane, C2 <- MixingAux lane
//   CorrelatedT  U: X <- Normal, C <- Mixing;  W: Z <- NormalAux, C' <- MixingAux
BivariateSample sample_same_chi2(RngStream& stream, CorrelationCoefficient rho, DegreesOfFreedom nu);
BivariateSample sample_indep_chi2(RngStream& stream, CorrelationCoefficient rho, DegreesOfFreedom nu);
// Requires nu > 2.
BivariateSample sample_correlated_t(RngStream& stream, CorrelationCoefficient rho, DegreesOfFreedom nu);

BivariateSample sample(CopulaMethod method, RngStream& stream, CorrelationCoefficient rho,
                       DegreesOfFreedom nu);

// Seed of the stream family feeding one method. Each method gets its own
// family so adding or dropping a method never perturbs another's draws.
std::uint64_t method_seed(std::uint64_t seed, CopulaMethod method) noexcept;

// Sample i of a run is drawn from RngStream(method_seed(seed, method), i),
// so any index range can be produced independently of the others.
class PairGenerator {
public:
    explicit PairGenerator(const SimConfig& config);

    const SimConfig& config() const noexcept { return config_; }
    std::uint64_t position() const noexcept { return next_index_; }
    bool done() const noexcept { return next_index_ >= config_.n_samples; }

    BivariateSample next();
    BivariateSample at(std::uint64_t index) const;
    void seek(std::uint64_t index);

private:
    SimConfig config_;
    std::uint64_t family_seed_;
    CorrelationCoefficient rho_;
    DegreesOfFreedom nu_;
    std::uint64_t next_index_ = 0;
};

// Fixed block size used to partition work; results never depend on the
// worker count because blocks are reduced in index order.
inline constexpr std::uint64_t kBlockSize = 1u << 16;

// Fills `out` with samples [first, first + out.size()) of the run.
void generate_into(const SimConfig& config, std::uint64_t first, std::span<BivariateSample> out,
                   unsigned threads = 0);

// Materializes all n_samples draws.
std::vector<BivariateSample> generate(const SimConfig& config, unsigned threads = 0);

// 0 selects std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned threads) noexcept;

// Streams every sample of the run through `visit(state, sample)` without
// materializing the run. Each kBlockSize block gets a fresh state from
// `make_state()`; block states are merged left to right in index order,
// so the result is identical for any worker count. State must provide
// `void merge(const State&)`.
template <class MakeState, class Visit>
auto accumulate_samples(const SimConfig& config, MakeState make_state, Visit visit,
                        unsigned threads = 0) {
    using State = decltype(make_state());
    config.validate();
    const std::uint64_t n = config.n_samples;
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<std::optional<State>> partial(blocks);
    std::atomic<std::uint64_t> next_block{0};

    auto worker = [&] {
        PairGenerator gen(config);
        for (std::uint64_t b = next_block++; b < blocks; b = next_block++) {
            State state = make_state();
            const std::uint64_t end = std::min(n, (b + 1) * kBlockSize);
            gen.seek(b * kBlockSize);
            while (gen.position() < end) visit(state, gen.next());
            partial[b].emplace(std::move(state));
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    State total = make_state();
    for (auto& p : partial) total.merge(*p);
    return total;
}

}  // namespace tcopula
