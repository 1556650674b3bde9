#include "tcopula/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tcopula/error.hpp"

namespace tcopula {

void MomentAccumulator::add(double u, double v) noexcept {
    ++count_;
    const double n = static_cast<double>(count_);
    const double du = u - mean_u_;
    const double dv = v - mean_v_;
    mean_u_ += du / n;
    mean_v_ += dv / n;
    m2_u_ += du * (u - mean_u_);
    m2_v_ += dv * (v - mean_v_);
    co_m_ += du * (v - mean_v_);
}

void MomentAccumulator::merge(const MomentAccumulator& other) noexcept {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double du = other.mean_u_ - mean_u_;
    const double dv = other.mean_v_ - mean_v_;
    const double w = na * nb / n;
    mean_u_ += du * nb / n;
    mean_v_ += dv * nb / n;
    m2_u_ += other.m2_u_ + du * du * w;
    m2_v_ += other.m2_v_ + dv * dv * w;
    co_m_ += other.co_m_ + du * dv * w;
    count_ += other.count_;
}

std::optional<double> MomentAccumulator::variance_u() const noexcept {
    if (count_ < 2) return std::nullopt;
    return m2_u_ / static_cast<double>(count_ - 1);
}

std::optional<double> MomentAccumulator::variance_v() const noexcept {
    if (count_ < 2) return std::nullopt;
    return m2_v_ / static_cast<double>(count_ - 1);
}

std::optional<double> MomentAccumulator::covariance() const noexcept {
    if (count_ < 2) return std::nullopt;
    return co_m_ / static_cast<double>(count_ - 1);
}

std::optional<double> pearson_correlation(const MomentAccumulator& acc) noexcept {
    if (acc.count() < 2 || !(acc.m2_u() > 0.0) || !(acc.m2_v() > 0.0)) return std::nullopt;
    const double r = acc.co_moment() / std::sqrt(acc.m2_u() * acc.m2_v());
    if (!std::isfinite(r)) return std::nullopt;
    return std::clamp(r, -1.0, 1.0);
}

std::optional<double> pearson_correlation(std::span<const BivariateSample> pairs) noexcept {
    MomentAccumulator acc;
    for (const auto& s : pairs) acc.add(s);
    return pearson_correlation(acc);
}

namespace {

void check_threshold(double gamma, double std) {
    if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
    if (!(std > 0.0) || !std::isfinite(std)) throw DomainError("std must be a finite value > 0");
}

TailStatistic make_statistic(double gamma, double threshold, const MomentAccumulator& acc) {
    TailStatistic out{gamma, threshold, acc.count(), std::nullopt};
    if (acc.count() >= kMinTailSubsample) out.value = pearson_correlation(acc);
    return out;
}

}  // namespace

TailStatistic tail_correlation(std::span<const BivariateSample> pairs, double gamma, double std) {
    check_threshold(gamma, std);
    const double threshold = gamma * std;
    MomentAccumulator acc;
    for (const auto& s : pairs) {
        if (s.u > threshold) acc.add(s);
    }
    return make_statistic(gamma, threshold, acc);
}

std::uint64_t tail_count(std::span<const BivariateSample> pairs, double gamma, double std) {
    check_threshold(gamma, std);
    const double threshold = gamma * std;
    return static_cast<std::uint64_t>(std::count_if(pairs.begin(), pairs.end(), [&](const auto& s) {
        return s.u > threshold && s.v > threshold;
    }));
}

std::vector<BivariateSample> tail_scatter(std::span<const BivariateSample> pairs, double gamma,
                                          double std) {
    check_threshold(gamma, std);
    const double threshold = gamma * std;
    std::vector<BivariateSample> out;
    std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
                 [&](const auto& s) { return s.u > threshold; });
    return out;
}

TailProfile::TailProfile(std::vector<double> gammas, double std)
    : gammas_(std::move(gammas)), moments_(gammas_.size()), joint_(gammas_.size(), 0), std_(std) {
    thresholds_.reserve(gammas_.size());
    for (double g : gammas_) {
        check_threshold(g, std);
        thresholds_.push_back(g * std);
    }
}

void TailProfile::add(const BivariateSample& s) noexcept {
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        if (s.u > thresholds_[i]) {
            moments_[i].add(s);
            if (s.v > thresholds_[i]) ++joint_[i];
        }
    }
}

void TailProfile::merge(const TailProfile& other) {
    if (other.gammas_ != gammas_ || other.std_ != std_) {
        throw InvalidArgument("cannot merge tail profiles with different thresholds");
    }
    for (std::size_t i = 0; i < moments_.size(); ++i) {
        moments_[i].merge(other.moments_[i]);
        joint_[i] += other.joint_[i];
    }
}

TailStatistic TailProfile::correlation(std::size_t i) const {
    return make_statistic(gammas_.at(i), thresholds_.at(i), moments_.at(i));
}

void GridSpec::validate() const {
    if (bins_x < 1 || bins_y < 1) throw InvalidArgument("grid needs at least one bin per axis");
    auto ok = [](Interval r) { return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo < r.hi; };
    if (!ok(range_x) || !ok(range_y)) throw InvalidArgument("grid range must be a nonempty finite interval");
    if (scale == GridScale::Copula &&
        (range_x.lo != 0.0 || range_x.hi != 1.0 || range_y.lo != 0.0 || range_y.hi != 1.0)) {
        throw InvalidArgument("copula-scale grids cover exactly [0,1]^2");
    }
}

DensityGrid::DensityGrid(GridSpec spec) : spec_(spec) {
    spec_.validate();
    counts_.assign(spec_.bins_x * spec_.bins_y, 0);
}

std::optional<std::size_t> DensityGrid::bin_index(double value, Interval range, std::size_t bins) noexcept {
    if (!(value >= range.lo && value <= range.hi)) return std::nullopt;
    const double pos = (value - range.lo) / (range.hi - range.lo) * static_cast<double>(bins);
    const auto idx = static_cast<std::size_t>(pos);
    return std::min(idx, bins - 1);
}

void DensityGrid::add(double x, double y) noexcept {
    const auto ix = bin_index(x, spec_.range_x, spec_.bins_x);
    const auto iy = bin_index(y, spec_.range_y, spec_.bins_y);
    if (!ix || !iy) {
        ++out_of_range_;
        return;
    }
    ++counts_[*iy * spec_.bins_x + *ix];
    ++in_range_;
}

void DensityGrid::add_to_bin(std::size_t ix, std::size_t iy) {
    if (ix >= spec_.bins_x || iy >= spec_.bins_y) throw InvalidArgument("bin index out of range");
    ++counts_[iy * spec_.bins_x + ix];
    ++in_range_;
}

void DensityGrid::merge(const DensityGrid& other) {
    if (other.spec_.bins_x != spec_.bins_x || other.spec_.bins_y != spec_.bins_y ||
        other.spec_.range_x.lo != spec_.range_x.lo || other.spec_.range_x.hi != spec_.range_x.hi ||
        other.spec_.range_y.lo != spec_.range_y.lo || other.spec_.range_y.hi != spec_.range_y.hi) {
        throw InvalidArgument("cannot merge grids with different layouts");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    in_range_ += other.in_range_;
    out_of_range_ += other.out_of_range_;
}

double DensityGrid::center_x(std::size_t ix) const noexcept {
    const double w = (spec_.range_x.hi - spec_.range_x.lo) / static_cast<double>(spec_.bins_x);
    return spec_.range_x.lo + (static_cast<double>(ix) + 0.5) * w;
}

double DensityGrid::center_y(std::size_t iy) const noexcept {
    const double w = (spec_.range_y.hi - spec_.range_y.lo) / static_cast<double>(spec_.bins_y);
    return spec_.range_y.lo + (static_cast<double>(iy) + 0.5) * w;
}

DensityGrid histogram2d(std::span<const BivariateSample> pairs, GridSpec spec) {
    DensityGrid grid(spec);
    for (const auto& s : pairs) grid.add(s);
    return grid;
}

std::vector<double> rank_transform(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> pseudo(n);
    const double denom = static_cast<double>(n) + 1.0;
    for (std::size_t r = 0; r < n; ++r) pseudo[order[r]] = static_cast<double>(r + 1) / denom;
    return pseudo;
}

DensityGrid empirical_copula_density(std::span<const BivariateSample> pairs, std::size_t bins) {
    if (pairs.size() < 2) throw InvalidArgument("copula density needs at least two samples");
    if (bins < 1) throw InvalidArgument("copula density needs at least one bin");
    const std::uint64_t n = pairs.size();
    auto ranks = [&](auto member) {
        std::vector<std::uint64_t> order(n);
        std::iota(order.begin(), order.end(), std::uint64_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint64_t a, std::uint64_t b) { return pairs[a].*member < pairs[b].*member; });
        std::vector<std::uint64_t> rank(n);
        for (std::uint64_t r = 0; r < n; ++r) rank[order[r]] = r + 1;
        return rank;
    };
    const auto ru = ranks(&BivariateSample::u);
    const auto rv = ranks(&BivariateSample::v);
    if (bins > std::numeric_limits<std::uint64_t>::max() / (n + 1)) {
        throw InvalidArgument("copula grid too fine for this sample size");
    }
    // Bin of rank/(N+1) computed in integers, so bin edges are exact.
    auto bin = [&](std::uint64_t r) { return static_cast<std::size_t>(r * bins / (n + 1)); };
    DensityGrid grid(GridSpec{bins, bins, {0.0, 1.0}, {0.0, 1.0}, GridScale::Copula});
    for (std::uint64_t i = 0; i < n; ++i) grid.add_to_bin(bin(ru[i]), bin(rv[i]));
    return grid;
}

}  // namespace tcopula
