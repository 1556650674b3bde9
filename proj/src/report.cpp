#include "tcopula/report.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "tcopula/analytics.hpp"
#include "tcopula/error.hpp"

namespace tcopula::report {

namespace {

constexpr const char* kToolName = "tcopula";

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

std::string column_name(CopulaMethod m) {
    std::string name(to_string(m));
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

std::vector<double> gamma_range(int gamma_max) {
    if (gamma_max < 1) throw InvalidArgument("gamma-max must be >= 1");
    std::vector<double> gammas;
    for (int g = 2; g <= gamma_max; ++g) gammas.push_back(g);
    return gammas;
}

// One streaming pass per method over the configured run.
std::vector<TailProfile> tail_profiles(const RunOptions& options, double std) {
    const auto gammas = gamma_range(options.gamma_max);
    std::vector<TailProfile> out;
    for (CopulaMethod m : kAllMethods) {
        SimConfig cfg = options.config;
        cfg.method = m;
        out.push_back(accumulate_samples(
            cfg, [&] { return TailProfile(gammas, std); },
            [](TailProfile& p, const BivariateSample& s) { p.add(s); }, options.threads));
    }
    return out;
}

RunManifest base_manifest(const std::string& command, const RunOptions& options) {
    RunManifest m;
    m.command = command;
    m.config = options.config;
    m.timestamp = options.timestamp;
    return m;
}

void validate_run(const RunOptions& options) {
    options.config.validate();
}

void write_sample_rows(std::ostream& out, std::span<const BivariateSample> rows) {
    out << "u,v\n";
    std::string line;
    for (const auto& s : rows) {
        line.clear();
        line += format_double(s.u);
        line += ',';
        line += format_double(s.v);
        line += '\n';
        out << line;
    }
}

}  // namespace

std::string_view to_string(StdMode mode) noexcept {
    return mode == StdMode::Unit ? "unit" : "t";
}

StdMode parse_std_mode(std::string_view text) {
    const auto t = lower(text);
    if (t == "unit") return StdMode::Unit;
    if (t == "t") return StdMode::StudentT;
    throw InvalidArgument("unknown std mode '" + std::string(text) + "' (expected t or unit)");
}

double threshold_std(StdMode mode, double nu) {
    if (mode == StdMode::Unit) return 1.0;
    return analytics::t_standard_deviation(nu);
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Interval parse_range(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("range must look like lo:hi");
    auto parse = [&](std::string_view part) {
        double v = 0.0;
        const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
            throw InvalidArgument("bad number '" + std::string(part) + "' in range");
        }
        return v;
    };
    Interval r{parse(text.substr(0, colon)), parse(text.substr(colon + 1))};
    if (!(r.lo < r.hi)) throw InvalidArgument("range must satisfy lo < hi");
    return r;
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const auto part = text.substr(start, comma - start);
        double v = 0.0;
        const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size()) {
            throw InvalidArgument("bad number '" + std::string(part) + "' in list");
        }
        out.push_back(v);
        start = comma + 1;
    }
    return out;
}

void RunManifest::write(std::ostream& out) const {
    out << "# tool: " << kToolName << ' ' << TCOPULA_VERSION_STRING << '\n';
    out << "# command: " << command << '\n';
    if (config) {
        if (all_methods) {
            out << "# method: same-chi2,indep-chi2,correlated-t (one run each)\n";
        } else {
            out << "# method: " << to_string(config->method) << '\n';
        }
        out << "# rho: " << format_double(config->rho) << '\n';
        out << "# nu: " << format_double(config->nu) << '\n';
        out << "# samples: " << config->n_samples << '\n';
        out << "# seed: " << config->seed << '\n';
        out << "# rng: philox4x32-10; sample i of a method draws from stream (method_seed(seed, method), i)\n";
    }
    if (std_mode) {
        out << "# threshold_convention: " << to_string(*std_mode)
            << (*std_mode == StdMode::Unit ? " (threshold = gamma)"
                                           : " (threshold = gamma * sqrt(nu/(nu-2)))")
            << '\n';
        out << "# threshold_std: " << format_double(threshold_std) << '\n';
    }
    if (grid) {
        out << "# grid_scale: " << (grid->scale == GridScale::Raw ? "raw" : "copula") << '\n';
        out << "# grid_bins: " << grid->bins_x << 'x' << grid->bins_y << '\n';
        out << "# grid_range_u: " << format_double(grid->range_x.lo) << ':'
            << format_double(grid->range_x.hi) << '\n';
        out << "# grid_range_v: " << format_double(grid->range_y.lo) << ':'
            << format_double(grid->range_y.hi) << '\n';
        out << "# grid_bins_half_open: [lo,hi) except the last bin, which is closed\n";
    }
    for (const auto& [key, value] : extra) out << "# " << key << ": " << value << '\n';
    if (!timestamp.empty()) out << "# timestamp: " << timestamp << '\n';
}

void write_reduction_table(std::ostream& out, const std::vector<double>& nus,
                           const std::string& timestamp) {
    RunManifest m;
    m.command = "reduction-table";
    m.timestamp = timestamp;
    m.extra.emplace_back("exact_factor", "(Gamma((nu-1)/2)/Gamma(nu/2))^2 * (nu-2)/2");
    m.extra.emplace_back("asymptotic_factor", "(nu-2)/(nu-1)");
    std::ostringstream body;
    m.write(body);
    body << "nu,exact_factor,exact_factor_4dp,asymptotic_factor,error\n";
    for (double nu : nus) {
        body << format_double(nu) << ',';
        try {
            const double exact = analytics::correlation_reduction_factor(nu);
            const double asym = analytics::correlation_reduction_asymptotic(nu);
            std::ostringstream rounded;
            rounded << std::fixed << std::setprecision(4) << exact;
            body << format_double(exact) << ',' << rounded.str() << ',' << format_double(asym) << ",\n";
        } catch (const DomainError& e) {
            body << ",,," << '"' << e.what() << '"' << '\n';
        }
    }
    out << body.str();
}

void write_tail_table(std::ostream& out, const RunOptions& options) {
    validate_run(options);
    const double std = threshold_std(options.std_mode, options.config.nu);
    const auto profiles = tail_profiles(options, std);

    RunManifest m = base_manifest("tail-table", options);
    m.all_methods = true;
    m.std_mode = options.std_mode;
    m.threshold_std = std;
    m.extra.emplace_back("statistic", "corr(U, V | U > gamma * threshold_std)");
    m.extra.emplace_back("min_subsample", std::to_string(kMinTailSubsample));
    m.write(out);

    out << "gamma,threshold";
    for (CopulaMethod meth : kAllMethods) out << ',' << column_name(meth);
    for (CopulaMethod meth : kAllMethods) out << ",n_" << column_name(meth);
    out << '\n';
    for (std::size_t i = 0; i < profiles.front().size(); ++i) {
        const auto first = profiles.front().correlation(i);
        out << format_double(first.gamma) << ',' << format_double(first.threshold_raw);
        for (const auto& p : profiles) {
            const auto stat = p.correlation(i);
            out << ',';
            if (stat.value) out << format_double(*stat.value);
        }
        for (const auto& p : profiles) out << ',' << p.correlation(i).subsample_count;
        out << '\n';
    }
}

void write_tail_counts(std::ostream& out, const RunOptions& options) {
    validate_run(options);
    const double std = threshold_std(options.std_mode, options.config.nu);
    const auto profiles = tail_profiles(options, std);

    RunManifest m = base_manifest("tail-counts", options);
    m.all_methods = true;
    m.std_mode = options.std_mode;
    m.threshold_std = std;
    m.extra.emplace_back("statistic", "#(U > gamma * threshold_std and V > gamma * threshold_std)");
    m.write(out);

    out << "gamma,threshold";
    for (CopulaMethod meth : kAllMethods) out << ',' << column_name(meth);
    out << '\n';
    for (std::size_t i = 0; i < profiles.front().size(); ++i) {
        const auto first = profiles.front().correlation(i);
        out << format_double(first.gamma) << ',' << format_double(first.threshold_raw);
        for (const auto& p : profiles) out << ',' << p.joint_count(i);
        out << '\n';
    }
}

void write_samples(std::ostream& out, const RunOptions& options) {
    validate_run(options);
    const auto pairs = generate(options.config, options.threads);
    MomentAccumulator acc;
    for (const auto& s : pairs) acc.add(s);

    RunManifest m = base_manifest("sample", options);
    m.extra.emplace_back("stat_count", std::to_string(acc.count()));
    m.extra.emplace_back("stat_mean_u", format_double(acc.mean_u()));
    m.extra.emplace_back("stat_mean_v", format_double(acc.mean_v()));
    const auto corr = pearson_correlation(acc);
    m.extra.emplace_back("stat_correlation", corr ? format_double(*corr) : "undefined");
    m.extra.emplace_back("stat_method", "sequential Welford accumulation in row order");
    m.write(out);
    write_sample_rows(out, pairs);
}

void write_density(std::ostream& out, const RunOptions& options) {
    validate_run(options);
    GridSpec spec = options.grid;
    std::optional<DensityGrid> grid;
    if (spec.scale == GridScale::Copula) {
        if (options.config.n_samples < 2) throw InvalidArgument("copula density needs at least two samples");
        if (spec.bins_x != spec.bins_y) throw InvalidArgument("copula grids are square");
        const auto pairs = generate(options.config, options.threads);
        grid.emplace(empirical_copula_density(pairs, spec.bins_x));
    } else {
        spec.validate();
        grid.emplace(accumulate_samples(
            options.config, [&] { return DensityGrid(spec); },
            [](DensityGrid& g, const BivariateSample& s) { g.add(s); }, options.threads));
    }

    RunManifest m = base_manifest("density", options);
    m.grid = grid->spec();
    m.extra.emplace_back("in_range", std::to_string(grid->in_range()));
    m.extra.emplace_back("out_of_range", std::to_string(grid->out_of_range()));
    if (spec.scale == GridScale::Copula) {
        m.extra.emplace_back("copula_transform", "rank/(N+1) per margin, ties by sample index");
    }
    m.extra.emplace_back("layout", "rows = V bins (ascending), columns = U bins (ascending)");
    m.write(out);

    out << "v_center\\u_center";
    for (std::size_t ix = 0; ix < grid->bins_x(); ++ix) out << ',' << format_double(grid->center_x(ix));
    out << '\n';
    for (std::size_t iy = 0; iy < grid->bins_y(); ++iy) {
        out << format_double(grid->center_y(iy));
        for (std::size_t ix = 0; ix < grid->bins_x(); ++ix) out << ',' << grid->at(ix, iy);
        out << '\n';
    }
}

void write_tail_curve(std::ostream& out, double rho, double nu, const std::vector<double>& mus,
                      const std::string& timestamp) {
    const double kp = analytics::k_prime(rho, analytics::t_standard_deviation(nu) *
                                                  analytics::t_standard_deviation(nu));
    std::vector<std::pair<double, double>> rows;
    for (double mu : mus) {
        rows.emplace_back(analytics::t_tail_variance(nu, mu),
                          analytics::correlated_t_tail_correlation(rho, nu, mu));
    }

    RunManifest m;
    m.command = "tail-curve";
    m.timestamp = timestamp;
    m.extra.emplace_back("rho", format_double(rho));
    m.extra.emplace_back("nu", format_double(nu));
    m.extra.emplace_back("k_prime", format_double(kp) + " = (1-rho^2) * nu/(nu-2) / rho^2");
    m.extra.emplace_back("model", "1/sqrt(1 + K'/V), V = mu^2 nu / ((nu-1)^2 (nu-2))");
    m.write(out);
    out << "mu,tail_variance,tail_correlation\n";
    for (std::size_t i = 0; i < mus.size(); ++i) {
        out << format_double(mus[i]) << ',' << format_double(rows[i].first) << ','
            << format_double(rows[i].second) << '\n';
    }
}

void write_tail_scatter(std::ostream& out, const RunOptions& options, double gamma) {
    validate_run(options);
    const double std = threshold_std(options.std_mode, options.config.nu);
    std::vector<BivariateSample> tail;
    {
        const auto pairs = generate(options.config, options.threads);
        tail = tcopula::tail_scatter(pairs, gamma, std);
    }
    RunManifest m = base_manifest("tail-scatter", options);
    m.std_mode = options.std_mode;
    m.threshold_std = std;
    m.extra.emplace_back("gamma", format_double(gamma));
    m.extra.emplace_back("threshold", format_double(gamma * std));
    m.extra.emplace_back("selection", "U > threshold (input order)");
    m.extra.emplace_back("rows", std::to_string(tail.size()));
    m.write(out);
    write_sample_rows(out, tail);
}

void write_file_atomically(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        std::ostringstream buffer;
        body(buffer);
        std::cout << buffer.str() << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    try {
        {
            std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
            if (!file) throw IoError("cannot open '" + tmp.string() + "' for writing");
            body(file);
            file.flush();
            if (!file) throw IoError("write to '" + tmp.string() + "' failed");
        }
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) throw IoError("cannot move output into '" + path + "': " + ec.message());
    } catch (...) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw;
    }
}

}  // namespace tcopula::report
