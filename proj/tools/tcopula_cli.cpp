// tcopula: correlated Student-t simulation tables and figure data as CSV.
//
//   tcopula reduction-table [--nu-list 3,4,5]
//   tcopula tail-table      [--rho 0.9 --nu 3 --samples 1000000 --seed 1 --gamma-max 20]
//   tcopula tail-counts     (same flags as tail-table)
//   tcopula sample          --method indep-chi2 --samples 5000
//   tcopula density         --scale copula --bins 50
//   tcopula tail-curve      --mu-list 2,5,10
//   tcopula tail-scatter    --method indep-chi2 --gamma 2
//
// Output goes to --out (written atomically) or stdout. Exit status is 0 on
// success, 1 on a domain or I/O error and 2 on a usage error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tcopula/tcopula.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const std::string part = text.substr(start, comma - start);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size()) {
            throw CLI::ValidationError(flag, "bad number '" + part + "'");
        }
        out.push_back(v);
        start = comma + 1;
    }
    return out;
}

bool parse_range(const std::string& text, double& lo, double& hi) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        std::size_t a = 0, b = 0;
        lo = std::stod(text.substr(0, colon), &a);
        hi = std::stod(text.substr(colon + 1), &b);
        return a == colon && b == text.size() - colon - 1 && lo < hi;
    } catch (const std::exception&) {
        return false;
    }
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int report(tc_status status) {
    if (status == TC_OK) return 0;
    std::cerr << "tcopula: " << tc_status_name(status) << ": " << tc_last_error() << '\n';
    return status == TC_ERR_INVALID_ARGUMENT ? kExitUsage : kExitError;
}

int usage(const std::string& message) {
    std::cerr << "tcopula: usage error: " << message << '\n';
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlated Student-t pairs: same-chi2, indep-chi2 and correlated-t constructions"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string("tcopula ") + tc_version());

    tc_run_options opts;
    tc_run_options_default(&opts);

    std::string method = "same-chi2";
    std::string std_mode = "unit";
    std::string scale = "raw";
    std::string range = "-10:10";
    std::string out_path;
    std::string nu_list = "3,4,5,6,7,8,9,10,20,50,100";
    std::string mu_list = "1,2,5,10,20,50,100";
    long long samples = static_cast<long long>(opts.config.n_samples);
    std::size_t bins = 0;
    double gamma = 2.0;
    bool stamp = false;

    app.add_option("--method", method, "same-chi2 | indep-chi2 | correlated-t")->capture_default_str();
    app.add_option("--rho", opts.config.rho, "base correlation of the normal pair")->capture_default_str();
    app.add_option("--nu", opts.config.nu, "degrees of freedom")->capture_default_str();
    app.add_option("--samples", samples, "number of pairs")->capture_default_str();
    app.add_option("--seed", opts.config.seed, "64-bit seed")
        ->envname("TCOPULA_SEED")
        ->capture_default_str();
    app.add_option("--gamma-max", opts.gamma_max, "largest tail threshold (rows run 2..gamma-max)")
        ->capture_default_str();
    app.add_option("--bins", bins, "bins per axis (raw default 100, copula default 50)");
    app.add_option("--range", range, "raw grid range lo:hi on both axes")->capture_default_str();
    app.add_option("--scale", scale, "density scale: raw | copula")->capture_default_str();
    app.add_option("--std-mode", std_mode,
                   "threshold convention: unit (gamma) | t (gamma * sqrt(nu/(nu-2)))")
        ->capture_default_str();
    app.add_option("--threads", opts.threads, "worker threads, 0 = all cores")->capture_default_str();
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_flag("--timestamp", stamp, "record the UTC run time in the manifest");

    auto* reduction = app.add_subcommand("reduction-table", "exact and asymptotic correlation-reduction factors");
    reduction->add_option("--nu-list", nu_list, "comma-separated degrees of freedom")->capture_default_str();
    auto* tail_table = app.add_subcommand("tail-table", "corr(U,V | U > threshold) per method");
    auto* tail_counts = app.add_subcommand("tail-counts", "#(U > threshold, V > threshold) per method");
    auto* sample = app.add_subcommand("sample", "raw (u,v) pairs");
    auto* density = app.add_subcommand("density", "2-D histogram or empirical copula grid");
    auto* curve = app.add_subcommand("tail-curve", "model tail correlation of the correlated-t pair");
    curve->add_option("--mu-list", mu_list, "comma-separated thresholds")->capture_default_str();
    auto* scatter = app.add_subcommand("tail-scatter", "pairs with U above gamma standard deviations");
    scatter->add_option("--gamma", gamma, "threshold in standard deviations")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return usage(e.what());
    }

    const std::string stamp_text = stamp ? utc_now() : std::string();
    opts.timestamp = stamp_text.c_str();
    const char* path = out_path.empty() ? nullptr : out_path.c_str();

    try {
        if (reduction->parsed()) {
            const auto nus = parse_list(nu_list, "--nu-list");
            return report(tc_write_reduction_table(nus.data(), nus.size(), opts.timestamp, path));
        }
        if (curve->parsed()) {
            const auto mus = parse_list(mu_list, "--mu-list");
            return report(tc_write_tail_curve(opts.config.rho, opts.config.nu, mus.data(), mus.size(),
                                              opts.timestamp, path));
        }
    } catch (const CLI::ValidationError& e) {
        return usage(e.what());
    }

    if (samples < 1) return usage("--samples must be >= 1");
    opts.config.n_samples = static_cast<uint64_t>(samples);
    if (report(tc_method_parse(method.c_str(), &opts.config.method)) != 0) return kExitUsage;
    if (report(tc_std_mode_parse(std_mode.c_str(), &opts.std_mode)) != 0) return kExitUsage;
    if (report(tc_scale_parse(scale.c_str(), &opts.scale)) != 0) return kExitUsage;
    if (opts.scale == TC_SCALE_RAW && !parse_range(range, opts.range_lo, opts.range_hi)) {
        return usage("--range must look like lo:hi with lo < hi");
    }
    if (bins == 0) bins = opts.scale == TC_SCALE_COPULA ? 50 : 100;
    opts.bins_x = opts.bins_y = bins;

    if (tail_table->parsed()) return report(tc_write_tail_table(&opts, path));
    if (tail_counts->parsed()) return report(tc_write_tail_counts(&opts, path));
    if (sample->parsed()) return report(tc_write_samples(&opts, path));
    if (density->parsed()) return report(tc_write_density(&opts, path));
    if (scatter->parsed()) return report(tc_write_tail_scatter(&opts, gamma, path));
    return usage("no command given");
}
