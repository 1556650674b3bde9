#include "doctest.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tcopula/error.hpp"
#include "tcopula/report.hpp"

using namespace tcopula;
using namespace tcopula::report;

namespace {

std::string render(void (*fn)(std::ostream&, const RunOptions&), const RunOptions& o) {
    std::ostringstream s;
    fn(s, o);
    return s.str();
}

std::size_t count_lines(const std::string& text, char lead) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] == lead) ++n;
    return n;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 3.0, 0.9, 0.8954}) {
        const auto s = format_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(0.9) == "0.9");
}

TEST_CASE("range and list parsing") {
    const auto r = parse_range("-10:10");
    CHECK(r.lo == -10.0);
    CHECK(r.hi == 10.0);
    CHECK_THROWS_AS(parse_range("10:-10"), InvalidArgument);
    CHECK_THROWS_AS(parse_range("1,2"), InvalidArgument);
    CHECK_THROWS_AS(parse_range("a:2"), InvalidArgument);
    const auto l = parse_real_list("3,4.5,100");
    REQUIRE(l.size() == 3);
    CHECK(l[1] == 4.5);
    CHECK_THROWS_AS(parse_real_list("3,,4"), InvalidArgument);
    CHECK_THROWS_AS(parse_real_list(""), InvalidArgument);
}

TEST_CASE("std modes") {
    CHECK(parse_std_mode("unit") == StdMode::Unit);
    CHECK(parse_std_mode("T") == StdMode::StudentT);
    CHECK_THROWS_AS(parse_std_mode("sigma"), InvalidArgument);
    CHECK(threshold_std(StdMode::Unit, 3) == 1.0);
    CHECK(threshold_std(StdMode::StudentT, 3) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(threshold_std(StdMode::StudentT, 2), DomainError);
}

TEST_CASE("manifest carries configuration and omits the clock by default") {
    RunManifest m;
    m.command = "sample";
    m.config = SimConfig{CopulaMethod::IndepChi2, 0.5, 4, 10, 77};
    std::ostringstream s;
    m.write(s);
    const auto text = s.str();
    CHECK(text.find("# method: indep-chi2") != std::string::npos);
    CHECK(text.find("# seed: 77") != std::string::npos);
    CHECK(text.find("timestamp") == std::string::npos);
    m.timestamp = "2026-01-01T00:00:00Z";
    std::ostringstream s2;
    m.write(s2);
    CHECK(s2.str().find("# timestamp: 2026-01-01T00:00:00Z") != std::string::npos);
}

TEST_CASE("reduction table rows") {
    std::ostringstream s;
    write_reduction_table(s, {3, 2, 100});
    const auto text = s.str();
    CHECK(text.find("\n3,0.6366") != std::string::npos);
    CHECK(text.find(",0.6366,0.5,") != std::string::npos);
    CHECK(text.find("\n2,,,,\"") != std::string::npos);
    CHECK(text.find(",0.9949,") != std::string::npos);
}

TEST_CASE("tail tables have one row per gamma and are reproducible") {
    RunOptions o;
    o.config.n_samples = 20'000;
    o.gamma_max = 6;
    const auto a = render(write_tail_table, o);
    CHECK(a == render(write_tail_table, o));
    CHECK(a.find("gamma,threshold,same_chi2,indep_chi2,correlated_t,n_same_chi2") != std::string::npos);
    CHECK(count_lines(a, '#') >= 8);
    std::size_t rows = 0;
    std::istringstream in(a);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) ++rows;
    CHECK(rows == 5);
    o.threads = 3;
    CHECK(a == render(write_tail_table, o));

    const auto c = render(write_tail_counts, o);
    CHECK(c.find("\n2,2,") != std::string::npos);
    o.std_mode = StdMode::StudentT;
    CHECK(render(write_tail_counts, o).find("threshold_convention: t") != std::string::npos);
}

TEST_CASE("density matrix shape") {
    RunOptions o;
    o.config.n_samples = 5000;
    o.grid.bins_x = 4;
    o.grid.bins_y = 3;
    const auto d = render(write_density, o);
    std::istringstream in(d);
    std::size_t data_rows = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        ++data_rows;
    }
    CHECK(data_rows == 4);  // header + 3 V bins

    o.grid = GridSpec{5, 5, {0, 1}, {0, 1}, GridScale::Copula};
    CHECK(render(write_density, o).find("in_range: 5000") != std::string::npos);
    o.grid.bins_y = 4;
    CHECK_THROWS_AS(render(write_density, o), InvalidArgument);
}

TEST_CASE("atomic writes leave nothing behind on failure") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tcopula_report_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto target = (dir / "out.csv").string();

    write_file_atomically(target, [](std::ostream& o) { o << "ok\n"; });
    CHECK(fs::exists(target));

    CHECK_THROWS_AS(write_file_atomically(target,
                                          [](std::ostream& o) {
                                              o << "partial";
                                              throw DomainError("boom");
                                          }),
                    DomainError);
    std::ifstream in(target);
    std::string body;
    std::getline(in, body);
    CHECK(body == "ok");
    CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);

    CHECK_THROWS_AS(write_file_atomically((dir / "missing" / "x.csv").string(), [](std::ostream&) {}),
                    IoError);
    fs::remove_all(dir);
}
