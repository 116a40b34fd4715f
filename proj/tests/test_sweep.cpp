#include <sstream>

#include "doctest.h"
#include "qsld/sweep.hpp"

using namespace qsld;

namespace {

std::string csv(const Table& t) {
    std::ostringstream out;
    write_csv(t, out);
    return out.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

SweepConfig small_config() {
    SweepConfig c;
    c.s_values = {1.0};
    c.temperatures = {ThermalEnvironment::zero()};
    c.t_grid = {0.0, 10.0, 3};
    c.tau_grid = {1.0, 3.0, 3};
    return c;
}

} // namespace

TEST_CASE("command names") {
    for (const char* name : {"dephasing", "steady", "nonmarkov", "qsl", "geospeed", "critical"}) {
        REQUIRE(parse_command(name).has_value());
        CHECK(to_string(*parse_command(name)) == name);
    }
    CHECK_FALSE(parse_command("plot").has_value());
}

TEST_CASE("number format") {
    CHECK(format_real(1.0) == "1.00000000e+00");
    CHECK(format_real(-0.000123456789) == "-1.23456789e-04");
    CHECK(format_real(0.0) == "0.00000000e+00");
}

TEST_CASE("linear grids") {
    CHECK(LinearGrid{0.0, 10.0, 3}.values() == std::vector<double>{0.0, 5.0, 10.0});
    const auto s = default_s_grid().values();
    CHECK(s.size() == 80);
    CHECK(s.front() == doctest::Approx(0.1));
    CHECK(s[9] == doctest::Approx(1.0));
    CHECK(s.back() == 8.0);
    // Branch boundaries are hit exactly, not one ulp beside them.
    CHECK(s[9] == 1.0);
    CHECK(s[19] == 2.0);
    CHECK(s[29] == 3.0);
    const auto T = temperatures_from_grid(default_interplay_temperatures());
    CHECK(T.size() == 61);
    CHECK(T.front().regime() == Regime::zero);
    CHECK(T[1].temperature() == doctest::Approx(0.05));
    CHECK_THROWS_AS((LinearGrid{1.0, 1.0, 3}.values()), std::invalid_argument);
    CHECK_THROWS_AS((LinearGrid{0.0, 1.0, 1}.values()), std::invalid_argument);
}

TEST_CASE("dephasing table") {
    const auto t = run_command(Command::dephasing, small_config());
    const auto rows = lines(csv(t));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "s,temperature,t,D,gamma,F");
    CHECK(rows[1] == "1.00000000e+00,zero,0.00000000e+00,0.00000000e+00,0.00000000e+00,1.00000000e+00");
    CHECK(rows[2].rfind("1.00000000e+00,zero,5.00000000e+00,", 0) == 0);
    CHECK(exit_status(t) == 0);
}

TEST_CASE("headers of every command") {
    auto c = small_config();
    c.s_values = {4.0};
    c.nm_scan_points = 200;
    c.bracket_lo = 1.0;
    CHECK(run_command(Command::steady, c).header == std::vector<std::string>{"s", "temperature", "F_inf", "divergent"});
    CHECK(run_command(Command::nonmarkov, c).header == std::vector<std::string>{"s", "temperature", "N", "n_intervals"});
    CHECK(run_command(Command::qsl, c).header ==
          std::vector<std::string>{"s", "temperature", "tau", "geodesic", "path_length", "tau_qsl", "ratio"});
    CHECK(run_command(Command::geospeed, c).header ==
          std::vector<std::string>{"s", "temperature", "t", "geodesic_scaled", "speed_scaled"});
    CHECK(run_command(Command::critical, c).header == std::vector<std::string>{"temperature", "s_cri", "bracket_width"});
    c.qsl_mode = QslMode::interplay;
    CHECK(run_command(Command::qsl, c).header == std::vector<std::string>{"s", "T", "ratio"});
}

TEST_CASE("rows follow (s, temperature, t) order regardless of input order") {
    auto c = small_config();
    c.s_values = {4.0, 1.0, 4.0};
    c.temperatures = {ThermalEnvironment::finite(1.5), ThermalEnvironment::high_t_limit(1.0),
                      ThermalEnvironment::zero()};
    c.t_grid = {0.0, 1.0, 2};
    const auto rows = lines(csv(run_command(Command::dephasing, c)));
    REQUIRE(rows.size() == 1 + 2 * 3 * 2);
    CHECK(rows[1].rfind("1.00000000e+00,zero,0.0", 0) == 0);
    CHECK(rows[2].rfind("1.00000000e+00,zero,1.0", 0) == 0);
    CHECK(rows[3].rfind("1.00000000e+00,hight:1,0.0", 0) == 0);
    CHECK(rows[5].rfind("1.00000000e+00,t:1.5,0.0", 0) == 0);
    CHECK(rows[7].rfind("4.00000000e+00,zero,0.0", 0) == 0);
}

TEST_CASE("steady rows") {
    auto c = small_config();
    c.s_values = {0.5, 2.0, 6.0};
    const auto rows = lines(csv(run_command(Command::steady, c)));
    REQUIRE(rows.size() == 4);
    CHECK(rows[1] == "5.00000000e-01,zero,0.00000000e+00,1");
    CHECK(rows[2] == "2.00000000e+00,zero,3.67879441e-01,0");
    CHECK(rows[3].rfind("6.00000000e+00,zero,", 0) == 0);
}

TEST_CASE("s = 1 on the default grid is divergent at T = 0") {
    SweepConfig c;
    c.s_values = default_s_grid().values();
    c.temperatures = {ThermalEnvironment::zero()};
    const auto t = run_command(Command::steady, c);
    CHECK(t.rows[9] == "1.00000000e+00,zero,0.00000000e+00,1");
    CHECK(t.rows[10].substr(0, 20) == "1.10000000e+00,zero,");
    CHECK(t.rows[10].back() == '0');
}

TEST_CASE("geospeed t = 0 row") {
    auto c = small_config();
    c.omega_0 = 1.6;
    const auto rows = lines(csv(run_command(Command::geospeed, c)));
    CHECK(rows[1] == "1.00000000e+00,zero,0.00000000e+00,0.00000000e+00,8.00000000e-01");
}

TEST_CASE("output does not depend on the worker count") {
    auto c = small_config();
    c.s_values = {0.5, 2.5, 4.0};
    c.temperatures = {ThermalEnvironment::zero(), ThermalEnvironment::finite(0.7)};
    c.t_grid = {0.0, 8.0, 9};
    c.tau_grid = {0.5, 6.0, 4};
    for (Command cmd : {Command::dephasing, Command::steady, Command::qsl, Command::geospeed}) {
        c.threads = 1;
        const std::string one = csv(run_command(cmd, c));
        c.threads = 4;
        CHECK(csv(run_command(cmd, c)) == one);
    }
}

TEST_CASE("non-converged rows get a converged column") {
    auto c = small_config();
    c.s_values = {0.3};
    c.temperatures = {ThermalEnvironment::finite(1.0)};
    c.t_grid = {0.0, 30.0, 3};
    c.tol = {1e-15, 1e-15, 100};
    const auto t = run_command(Command::dephasing, c);
    const auto rows = lines(csv(t));
    CHECK(rows[0] == "s,temperature,t,D,gamma,F,converged");
    CHECK(rows[1].substr(rows[1].size() - 2) == ",1");  // t = 0 is exact
    CHECK(rows[3].substr(rows[3].size() - 2) == ",0");
    CHECK(exit_status(t) == 2);
}

TEST_CASE("QSL rows without a qubit splitting are kept when the bath dephases") {
    auto c = small_config();
    c.omega_0 = 0.0;
    c.s_values = {1.0};
    c.temperatures = {ThermalEnvironment::zero()};
    const auto t = run_command(Command::qsl, c);
    CHECK(t.rows.size() == 3);
    CHECK(t.warnings.empty());
}

TEST_CASE("critical bracket failures are reported per row") {
    auto c = small_config();
    c.temperatures = {ThermalEnvironment::zero(), ThermalEnvironment::high_t_limit(1.0)};
    c.bracket_lo = 2.5;
    const auto t = run_command(Command::critical, c);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == "zero,nan,nan");
    CHECK_FALSE(t.converged[0]);
    CHECK(t.converged[1]);
    CHECK(t.warnings.size() == 1);
    CHECK(exit_status(t) == 2);
}

TEST_CASE("configuration validation") {
    auto bad = [](auto mutate) {
        auto c = small_config();
        mutate(c);
        return c;
    };
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.s_values.clear(); }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.s_values = {-1.0}; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.temperatures.clear(); }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.t_grid = {5.0, 1.0, 10}; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.t_grid = {-1.0, 1.0, 10}; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.tau_grid = {0.0, 1.0, 10}; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.omega_0 = -1.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.threads = 0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(bad([](SweepConfig& c) { c.tol.abs_tol = 0.0; }).validate(), std::invalid_argument);
    CHECK_THROWS_AS(run_command(Command::steady, bad([](SweepConfig& c) { c.s_values.clear(); })),
                    std::invalid_argument);
}

TEST_CASE("unwritable output path") {
    const auto t = run_command(Command::steady, small_config());
    CHECK_THROWS_AS(write_output(t, "/nonexistent-dir/out.csv"), std::runtime_error);
}
