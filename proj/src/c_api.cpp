#include "tcopula/tcopula.h"

#include <new>
#include <optional>
#include <string>
#include <vector>

#include "tcopula/analytics.hpp"
#include "tcopula/copulas.hpp"
#include "tcopula/error.hpp"
#include "tcopula/estimators.hpp"
#include "tcopula/report.hpp"

using namespace tcopula;

struct tc_generator {
    PairGenerator gen;
};

struct tc_accumulator {
    MomentAccumulator acc;
};

namespace {

thread_local std::string g_last_error;

tc_status fail(tc_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <class F>
tc_status guarded(F&& body) noexcept {
    try {
        g_last_error.clear();
        return body();
    } catch (const DomainError& e) {
        return fail(TC_ERR_DOMAIN, e.what());
    } catch (const InvalidArgument& e) {
        return fail(TC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const IoError& e) {
        return fail(TC_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TC_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* name) {
    if (p == nullptr) throw InvalidArgument(std::string(name) + " must not be NULL");
}

CopulaMethod to_method(tc_method m) {
    switch (m) {
        case TC_METHOD_SAME_CHI2: return CopulaMethod::SameChi2;
        case TC_METHOD_INDEP_CHI2: return CopulaMethod::IndepChi2;
        case TC_METHOD_CORRELATED_T: return CopulaMethod::CorrelatedT;
    }
    throw InvalidArgument("unknown tc_method value");
}

tc_method from_method(CopulaMethod m) {
    switch (m) {
        case CopulaMethod::SameChi2: return TC_METHOD_SAME_CHI2;
        case CopulaMethod::IndepChi2: return TC_METHOD_INDEP_CHI2;
        case CopulaMethod::CorrelatedT: return TC_METHOD_CORRELATED_T;
    }
    return TC_METHOD_SAME_CHI2;
}

SimConfig to_config(const tc_config& c) {
    return SimConfig{to_method(c.method), c.rho, c.nu, c.n_samples, c.seed};
}

report::RunOptions to_options(const tc_run_options* o) {
    require(o, "options");
    report::RunOptions r;
    r.config = to_config(o->config);
    r.gamma_max = o->gamma_max;
    r.std_mode = o->std_mode == TC_STD_STUDENT_T ? report::StdMode::StudentT : report::StdMode::Unit;
    r.grid.bins_x = o->bins_x;
    r.grid.bins_y = o->bins_y;
    r.grid.scale = o->scale == TC_SCALE_COPULA ? GridScale::Copula : GridScale::Raw;
    if (r.grid.scale == GridScale::Copula) {
        r.grid.range_x = r.grid.range_y = Interval{0.0, 1.0};
    } else {
        r.grid.range_x = r.grid.range_y = Interval{o->range_lo, o->range_hi};
    }
    r.threads = o->threads;
    if (o->timestamp) r.timestamp = o->timestamp;
    return r;
}

std::string path_or_stdout(const char* path) { return path ? std::string(path) : std::string(); }

std::vector<BivariateSample> zip(const double* u, const double* v, std::size_t n) {
    if (n > 0) {
        require(u, "u");
        require(v, "v");
    }
    std::vector<BivariateSample> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {u[i], v[i]};
    return out;
}

template <class F>
tc_status scalar(double* out, F&& f) noexcept {
    return guarded([&] {
        require(out, "out");
        *out = f();
        return TC_OK;
    });
}

}  // namespace

extern "C" {

const char* tc_version(void) { return TCOPULA_VERSION_STRING; }

const char* tc_last_error(void) { return g_last_error.c_str(); }

const char* tc_status_name(tc_status status) {
    switch (status) {
        case TC_OK: return "ok";
        case TC_ERR_DOMAIN: return "domain error";
        case TC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case TC_ERR_UNDEFINED: return "undefined";
        case TC_ERR_IO: return "i/o error";
        case TC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void tc_config_default(tc_config* config) {
    if (!config) return;
    const SimConfig d;
    *config = tc_config{from_method(d.method), d.rho, d.nu, d.n_samples, d.seed};
}

void tc_run_options_default(tc_run_options* options) {
    if (!options) return;
    const report::RunOptions d;
    tc_config_default(&options->config);
    options->gamma_max = d.gamma_max;
    options->std_mode = TC_STD_UNIT;
    options->scale = TC_SCALE_RAW;
    options->bins_x = d.grid.bins_x;
    options->bins_y = d.grid.bins_y;
    options->range_lo = d.grid.range_x.lo;
    options->range_hi = d.grid.range_x.hi;
    options->threads = 0;
    options->timestamp = nullptr;
}

tc_status tc_config_validate(const tc_config* config) {
    return guarded([&] {
        require(config, "config");
        to_config(*config).validate();
        return TC_OK;
    });
}

tc_status tc_method_parse(const char* text, tc_method* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = from_method(parse_method(text));
        return TC_OK;
    });
}

const char* tc_method_name(tc_method method) {
    switch (method) {
        case TC_METHOD_SAME_CHI2: return "same-chi2";
        case TC_METHOD_INDEP_CHI2: return "indep-chi2";
        case TC_METHOD_CORRELATED_T: return "correlated-t";
    }
    return "unknown";
}

tc_status tc_std_mode_parse(const char* text, tc_std_mode* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = report::parse_std_mode(text) == report::StdMode::Unit ? TC_STD_UNIT : TC_STD_STUDENT_T;
        return TC_OK;
    });
}

tc_status tc_scale_parse(const char* text, tc_scale* out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        const std::string t(text);
        if (t == "raw") {
            *out = TC_SCALE_RAW;
        } else if (t == "copula") {
            *out = TC_SCALE_COPULA;
        } else {
            throw InvalidArgument("unknown scale '" + t + "' (expected raw or copula)");
        }
        return TC_OK;
    });
}

tc_status tc_inverse_chi_moment(double nu, int k, double* out) {
    return scalar(out, [&] { return analytics::inverse_chi_moment(nu, k); });
}

tc_status tc_correlation_reduction_factor(double nu, double* out) {
    return scalar(out, [&] { return analytics::correlation_reduction_factor(nu); });
}

tc_status tc_correlation_reduction_asymptotic(double nu, double* out) {
    return scalar(out, [&] { return analytics::correlation_reduction_asymptotic(nu); });
}

tc_status tc_effective_correlation(double rho, double nu, double* out) {
    return scalar(out, [&] { return analytics::effective_correlation(rho, nu); });
}

tc_status tc_power_law_tail_variance(double n_exponent, double mu, double* out) {
    return scalar(out, [&] { return analytics::power_law_tail_variance(n_exponent, mu); });
}

tc_status tc_t_tail_variance(double nu, double mu, double* out) {
    return scalar(out, [&] { return analytics::t_tail_variance(nu, mu); });
}

double tc_normal_pdf(double x) { return analytics::normal_pdf(x); }
double tc_normal_cdf(double x) { return analytics::normal_cdf(x); }
double tc_normal_tail_variance(double mu) { return analytics::normal_tail_variance(mu); }

tc_status tc_tail_correlation_model(double v_tail, double k_prime, double* out) {
    return scalar(out, [&] { return analytics::tail_correlation_model({v_tail, k_prime}); });
}

tc_status tc_correlated_t_tail_correlation(double rho, double nu, double mu, double* out) {
    return scalar(out, [&] { return analytics::correlated_t_tail_correlation(rho, nu, mu); });
}

tc_status tc_generator_create(const tc_config* config, tc_generator** out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = nullptr;
        *out = new tc_generator{PairGenerator(to_config(*config))};
        return TC_OK;
    });
}

void tc_generator_destroy(tc_generator* gen) { delete gen; }

tc_status tc_generator_next(tc_generator* gen, double* u, double* v) {
    return guarded([&] {
        require(gen, "gen");
        require(u, "u");
        require(v, "v");
        const auto s = gen->gen.next();
        *u = s.u;
        *v = s.v;
        return TC_OK;
    });
}

tc_status tc_generator_fill(tc_generator* gen, double* u, double* v, size_t capacity, size_t* written) {
    return guarded([&] {
        require(gen, "gen");
        require(written, "written");
        *written = 0;
        if (capacity > 0) {
            require(u, "u");
            require(v, "v");
        }
        while (*written < capacity && !gen->gen.done()) {
            const auto s = gen->gen.next();
            u[*written] = s.u;
            v[*written] = s.v;
            ++*written;
        }
        return TC_OK;
    });
}

tc_status tc_generator_seek(tc_generator* gen, uint64_t index) {
    return guarded([&] {
        require(gen, "gen");
        gen->gen.seek(index);
        return TC_OK;
    });
}

uint64_t tc_generator_position(const tc_generator* gen) { return gen ? gen->gen.position() : 0; }

tc_status tc_accumulator_create(tc_accumulator** out) {
    return guarded([&] {
        require(out, "out");
        *out = new tc_accumulator{};
        return TC_OK;
    });
}

void tc_accumulator_destroy(tc_accumulator* acc) { delete acc; }

tc_status tc_accumulator_add(tc_accumulator* acc, double u, double v) {
    return guarded([&] {
        require(acc, "acc");
        acc->acc.add(u, v);
        return TC_OK;
    });
}

tc_status tc_accumulator_add_many(tc_accumulator* acc, const double* u, const double* v, size_t n) {
    return guarded([&] {
        require(acc, "acc");
        if (n > 0) {
            require(u, "u");
            require(v, "v");
        }
        for (size_t i = 0; i < n; ++i) acc->acc.add(u[i], v[i]);
        return TC_OK;
    });
}

tc_status tc_accumulator_merge(tc_accumulator* into, const tc_accumulator* from) {
    return guarded([&] {
        require(into, "into");
        require(from, "from");
        into->acc.merge(from->acc);
        return TC_OK;
    });
}

uint64_t tc_accumulator_count(const tc_accumulator* acc) { return acc ? acc->acc.count() : 0; }

tc_status tc_accumulator_means(const tc_accumulator* acc, double* mean_u, double* mean_v) {
    return guarded([&] {
        require(acc, "acc");
        require(mean_u, "mean_u");
        require(mean_v, "mean_v");
        if (acc->acc.count() == 0) return fail(TC_ERR_UNDEFINED, "no observations");
        *mean_u = acc->acc.mean_u();
        *mean_v = acc->acc.mean_v();
        return TC_OK;
    });
}

tc_status tc_accumulator_correlation(const tc_accumulator* acc, double* out) {
    return guarded([&] {
        require(acc, "acc");
        require(out, "out");
        const auto r = pearson_correlation(acc->acc);
        if (!r) return fail(TC_ERR_UNDEFINED, "correlation undefined (count < 2 or constant margin)");
        *out = *r;
        return TC_OK;
    });
}

tc_status tc_tail_correlation(const double* u, const double* v, size_t n, double gamma, double std,
                              double* out, uint64_t* subsample) {
    return guarded([&] {
        require(out, "out");
        const auto pairs = zip(u, v, n);
        const auto stat = tail_correlation(pairs, gamma, std);
        if (subsample) *subsample = stat.subsample_count;
        if (!stat.value) {
            return fail(TC_ERR_UNDEFINED, "tail correlation undefined: " +
                                              std::to_string(stat.subsample_count) +
                                              " points above threshold");
        }
        *out = *stat.value;
        return TC_OK;
    });
}

tc_status tc_tail_count(const double* u, const double* v, size_t n, double gamma, double std,
                        uint64_t* out) {
    return guarded([&] {
        require(out, "out");
        const auto pairs = zip(u, v, n);
        *out = tail_count(pairs, gamma, std);
        return TC_OK;
    });
}

tc_status tc_write_reduction_table(const double* nus, size_t n, const char* timestamp, const char* path) {
    return guarded([&] {
        if (n > 0) require(nus, "nus");
        const std::vector<double> list(nus, nus + n);
        const std::string stamp = timestamp ? timestamp : "";
        report::write_file_atomically(path_or_stdout(path), [&](std::ostream& out) {
            report::write_reduction_table(out, list, stamp);
        });
        return TC_OK;
    });
}

tc_status tc_write_tail_table(const tc_run_options* options, const char* path) {
    return guarded([&] {
        const auto o = to_options(options);
        o.config.validate();
        report::write_file_atomically(path_or_stdout(path),
                                      [&](std::ostream& out) { report::write_tail_table(out, o); });
        return TC_OK;
    });
}

tc_status tc_write_tail_counts(const tc_run_options* options, const char* path) {
    return guarded([&] {
        const auto o = to_options(options);
        o.config.validate();
        report::write_file_atomically(path_or_stdout(path),
                                      [&](std::ostream& out) { report::write_tail_counts(out, o); });
        return TC_OK;
    });
}

tc_status tc_write_samples(const tc_run_options* options, const char* path) {
    return guarded([&] {
        const auto o = to_options(options);
        o.config.validate();
        report::write_file_atomically(path_or_stdout(path),
                                      [&](std::ostream& out) { report::write_samples(out, o); });
        return TC_OK;
    });
}

tc_status tc_write_density(const tc_run_options* options, const char* path) {
    return guarded([&] {
        const auto o = to_options(options);
        o.config.validate();
        report::write_file_atomically(path_or_stdout(path),
                                      [&](std::ostream& out) { report::write_density(out, o); });
        return TC_OK;
    });
}

tc_status tc_write_tail_curve(double rho, double nu, const double* mus, size_t n, const char* timestamp,
                              const char* path) {
    return guarded([&] {
        if (n > 0) require(mus, "mus");
        const std::vector<double> list(mus, mus + n);
        const std::string stamp = timestamp ? timestamp : "";
        report::write_file_atomically(path_or_stdout(path), [&](std::ostream& out) {
            report::write_tail_curve(out, rho, nu, list, stamp);
        });
        return TC_OK;
    });
}

tc_status tc_write_tail_scatter(const tc_run_options* options, double gamma, const char* path) {
    return guarded([&] {
        const auto o = to_options(options);
        o.config.validate();
        report::write_file_atomically(path_or_stdout(path), [&](std::ostream& out) {
            report::write_tail_scatter(out, o, gamma);
        });
        return TC_OK;
    });
}

}  // extern "C"
