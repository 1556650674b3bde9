#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace tcopula {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3"). Pure function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// SplitMix64 finalizer; used to derive per-method and per-purpose seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Independent logical substreams inside one RngStream. Each lane owns a
// disjoint slice of the Philox counter space, so consuming from one lane
// never shifts the values another lane produces.
enum class Lane : std::uint8_t {
    Normal = 0,     // Gaussian building blocks X, Y
    Mixing = 1,     // chi-squared mixing variable C / C1
    NormalAux = 2,  // second Gaussian source (W in the correlated-t blend)
    MixingAux = 3,  // second mixing variable C2 / W's chi-squared
};

inline constexpr std::size_t kLaneCount = 4;

// Counter-based random stream identified by (seed, stream_id).
//
// Counter layout for a block: word0 = block index (low 32 bits),
// word1 = block index bits 32..55 | lane << 24, word2/word3 = stream_id.
// The key is the 64-bit seed. Two streams with the same (seed, stream_id)
// replay identical sequences; different stream_ids address disjoint
// counter ranges.
//
// A stream is a value: copy it to fork an identical replay, move it
// between threads freely, but never consume one object from two threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64(Lane lane = Lane::Normal) noexcept;

    // Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform(Lane lane = Lane::Normal) noexcept;

    // Spare Gaussian slot used by the polar method.
    std::optional<double>& spare_normal(Lane lane) noexcept {
        return lanes_[static_cast<std::size_t>(lane)].spare;
    }

    // Number of 64-bit words consumed so far on a lane.
    std::uint64_t consumed(Lane lane) const noexcept;

private:
    struct LaneState {
        std::uint64_t words = 0;  // 64-bit words handed out; two per block
        std::array<std::uint32_t, 4> buffer{};
        std::optional<double> spare;
    };

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<LaneState, kLaneCount> lanes_{};
};

}  // namespace tcopula
