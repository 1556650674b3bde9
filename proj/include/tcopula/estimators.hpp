#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcopula/copulas.hpp"

namespace tcopula {

// Streaming bivariate moments (Welford update, Chan et al. merge).
class MomentAccumulator {
public:
    void add(double u, double v) noexcept;
    void add(const BivariateSample& s) noexcept { add(s.u, s.v); }
    void merge(const MomentAccumulator& other) noexcept;

    std::uint64_t count() const noexcept { return count_; }
    double mean_u() const noexcept { return mean_u_; }
    double mean_v() const noexcept { return mean_v_; }
    // Centered sums of squares / cross products.
    double m2_u() const noexcept { return m2_u_; }
    double m2_v() const noexcept { return m2_v_; }
    double co_moment() const noexcept { return co_m_; }

    // Unbiased (n - 1) estimators; nullopt when count < 2.
    std::optional<double> variance_u() const noexcept;
    std::optional<double> variance_v() const noexcept;
    std::optional<double> covariance() const noexcept;

private:
    std::uint64_t count_ = 0;
    double mean_u_ = 0.0;
    double mean_v_ = 0.0;
    double m2_u_ = 0.0;
    double m2_v_ = 0.0;
    double co_m_ = 0.0;
};

// Sample correlation clamped to [-1, 1]; nullopt when count < 2 or a
// margin has zero variance.
std::optional<double> pearson_correlation(const MomentAccumulator& acc) noexcept;
std::optional<double> pearson_correlation(std::span<const BivariateSample> pairs) noexcept;

// Below this many points a conditional correlation is reported undefined.
inline constexpr std::uint64_t kMinTailSubsample = 10;

struct TailStatistic {
    double gamma = 0.0;
    double threshold_raw = 0.0;        // gamma * std
    std::uint64_t subsample_count = 0;
    std::optional<double> value;
};

// corr(U, V | U > gamma * std). Conditions on U only.
TailStatistic tail_correlation(std::span<const BivariateSample> pairs, double gamma, double std);

// #{ U > gamma * std and V > gamma * std }.
std::uint64_t tail_count(std::span<const BivariateSample> pairs, double gamma, double std);

// Subsample with U > gamma * std, in input order.
std::vector<BivariateSample> tail_scatter(std::span<const BivariateSample> pairs, double gamma,
                                          double std);

// One-pass, mergeable profile of conditional correlations and joint
// exceedance counts over a list of thresholds.
class TailProfile {
public:
    TailProfile(std::vector<double> gammas, double std);

    void add(const BivariateSample& s) noexcept;
    void merge(const TailProfile& other);

    std::size_t size() const noexcept { return gammas_.size(); }
    TailStatistic correlation(std::size_t i) const;
    std::uint64_t joint_count(std::size_t i) const { return joint_[i]; }
    const MomentAccumulator& conditional_moments(std::size_t i) const { return moments_[i]; }

private:
    std::vector<double> gammas_;
    std::vector<double> thresholds_;
    std::vector<MomentAccumulator> moments_;
    std::vector<std::uint64_t> joint_;
    double std_;
};

enum class GridScale { Raw, Copula };

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct GridSpec {
    std::size_t bins_x = 100;
    std::size_t bins_y = 100;
    Interval range_x{-10.0, 10.0};
    Interval range_y{-10.0, 10.0};
    GridScale scale = GridScale::Raw;

    void validate() const;
};

// 2-D histogram. Bins are half-open [lo, hi) except the last one, which
// also takes its upper edge. counts are row-major: counts[iy * bins_x + ix],
// x indexing U and y indexing V.
class DensityGrid {
public:
    explicit DensityGrid(GridSpec spec);

    void add(double x, double y) noexcept;
    void add(const BivariateSample& s) noexcept { add(s.u, s.v); }
    // Counts one observation directly in cell (ix, iy).
    void add_to_bin(std::size_t ix, std::size_t iy);
    void merge(const DensityGrid& other);

    const GridSpec& spec() const noexcept { return spec_; }
    std::size_t bins_x() const noexcept { return spec_.bins_x; }
    std::size_t bins_y() const noexcept { return spec_.bins_y; }
    std::uint64_t at(std::size_t ix, std::size_t iy) const { return counts_[iy * spec_.bins_x + ix]; }
    const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t in_range() const noexcept { return in_range_; }
    std::uint64_t out_of_range() const noexcept { return out_of_range_; }

    double center_x(std::size_t ix) const noexcept;
    double center_y(std::size_t iy) const noexcept;

    // Bin index on one axis, or nullopt when outside [lo, hi].
    static std::optional<std::size_t> bin_index(double value, Interval range, std::size_t bins) noexcept;

private:
    GridSpec spec_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t in_range_ = 0;
    std::uint64_t out_of_range_ = 0;
};

DensityGrid histogram2d(std::span<const BivariateSample> pairs, GridSpec spec);

// Ranks each margin (ties broken by input index), maps rank r to r/(N+1)
// and bins on [0,1]^2 with bins x bins cells; the bin of r is
// floor(r * bins / (N+1)) in exact integer arithmetic. Requires N >= 2.
DensityGrid empirical_copula_density(std::span<const BivariateSample> pairs, std::size_t bins);

// Pseudo-observations rank/(N+1) for one margin, ties by index.
std::vector<double> rank_transform(std::span<const double> values);

}  // namespace tcopula
