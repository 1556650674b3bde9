#include "tcopula/rng.hpp"

namespace tcopula {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
    }
    return c;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {}

std::uint64_t RngStream::next_u64(Lane lane) noexcept {
    LaneState& s = lanes_[static_cast<std::size_t>(lane)];
    const std::uint64_t word = s.words++;
    if ((word & 1u) == 0) {
        const std::uint64_t block = word >> 1;
        const PhiloxCounter ctr = {
            static_cast<std::uint32_t>(block),
            static_cast<std::uint32_t>((block >> 32) & 0x00FFFFFFu) |
                (static_cast<std::uint32_t>(lane) << 24),
            static_cast<std::uint32_t>(stream_id_),
            static_cast<std::uint32_t>(stream_id_ >> 32),
        };
        const PhiloxKey key = {static_cast<std::uint32_t>(seed_),
                               static_cast<std::uint32_t>(seed_ >> 32)};
        s.buffer = philox4x32_10(ctr, key);
        return (static_cast<std::uint64_t>(s.buffer[1]) << 32) | s.buffer[0];
    }
    return (static_cast<std::uint64_t>(s.buffer[3]) << 32) | s.buffer[2];
}

double RngStream::uniform(Lane lane) noexcept {
    // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
    return (static_cast<double>(next_u64(lane) >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RngStream::consumed(Lane lane) const noexcept {
    return lanes_[static_cast<std::size_t>(lane)].words;
}

}  // namespace tcopula
