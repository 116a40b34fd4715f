#include <cmath>
#include <random>

#include "doctest.h"
#include "qsld/numerics/gamma.hpp"
#include "qsld/numerics/ode.hpp"
#include "qsld/numerics/quadrature.hpp"
#include "qsld/numerics/roots.hpp"
#include "qsld/numerics/simpson.hpp"

using namespace qsld::numerics;

TEST_CASE("gamma_fn at integers and one half") {
    CHECK(gamma_fn(1.0) == 1.0);
    CHECK(gamma_fn(4.0) == 6.0);
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(1.7724538509).epsilon(1e-10));
}

TEST_CASE("gamma_fn rejects nonpositive and non-finite arguments") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(std::nan("")), std::domain_error);
}

TEST_CASE("gamma_fn recurrence on random arguments") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 500; ++i) {
        const double s = u(rng);
        CHECK(std::abs(gamma_fn(s + 1.0) / (s * gamma_fn(s)) - 1.0) < 1e-10);
    }
}

TEST_CASE("Tolerance validation") {
    CHECK_NOTHROW(Tolerance{}.validate());
    CHECK_THROWS_AS((Tolerance{0.0, 1e-8, 1000}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Tolerance{1e-10, -1.0, 1000}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Tolerance{1e-10, 1e-8, 99}.validate()), std::invalid_argument);
}

TEST_CASE("integrate_semi_infinite on exponential-polynomial integrands") {
    const Tolerance tol{};
    auto e1 = integrate_semi_infinite([](double w) { return std::exp(-w); }, std::nullopt, tol);
    CHECK(e1.converged);
    CHECK(std::abs(e1.value - 1.0) <= std::max(e1.error_estimate, 1e-12));
    auto e2 = integrate_semi_infinite([](double w) { return w * std::exp(-w); }, std::nullopt, tol);
    CHECK(std::abs(e2.value - 1.0) <= std::max(e2.error_estimate, 1e-12));

    // w^n e^{-w} for n up to 6 against n!; the reported error bounds the actual one.
    double fact = 1.0;
    for (int n = 0; n <= 6; ++n) {
        if (n > 0) fact *= n;
        auto r = integrate_semi_infinite([n](double w) { return std::pow(w, n) * std::exp(-w); }, std::nullopt, tol,
                                         TailDecay{1.0, static_cast<double>(n)});
        CHECK(r.converged);
        CHECK(std::abs(r.value - fact) <= std::max(r.error_estimate, 1e-12 * fact) * 10.0);
        CHECK(r.error_estimate <= tol.bound(r.value));
    }
}

TEST_CASE("integrate_semi_infinite resolves the s=1 zero-temperature decay integrand") {
    auto f = [](double w) { return std::exp(-w) * (1.0 - std::cos(w)) / w; };
    auto r = integrate_semi_infinite(f, 1.0, Tolerance{});
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-10));
    CHECK(r.value == doctest::Approx(0.3465735903).epsilon(1e-9));
}

TEST_CASE("integrate_semi_infinite at long times stays accurate") {
    // integral of e^{-w} sin(w t) = t / (1 + t^2)
    for (double t : {10.0, 100.0, 1000.0}) {
        auto r = integrate_semi_infinite([t](double w) { return std::exp(-w) * std::sin(w * t); }, t, Tolerance{});
        CHECK(r.converged);
        CHECK(std::abs(r.value - t / (1.0 + t * t)) < 1e-10);
    }
}

TEST_CASE("integrable endpoint singularity") {
    // integral of w^{-1/2} e^{-w} = sqrt(pi)
    auto r = integrate_semi_infinite([](double w) { return std::exp(-w) / std::sqrt(w); }, std::nullopt, Tolerance{});
    CHECK(r.converged);
    CHECK(std::abs(r.value - std::sqrt(M_PI)) < 1e-9);
}

TEST_CASE("quadrature reports non-convergence instead of a silent value") {
    Tolerance tight{1e-15, 1e-15, 100};
    auto r = integrate_semi_infinite([](double w) { return std::pow(w, -0.95) * std::exp(-w); }, std::nullopt, tight);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("quadrature rejects non-finite samples") {
    auto bad = [](double w) { return w > 2.0 ? std::nan("") : 1.0; };
    CHECK_THROWS_AS(integrate_semi_infinite(bad, std::nullopt, Tolerance{}), NonFiniteError);
}

TEST_CASE("tail cutoff and breakpoints") {
    CHECK(tail_cutoff({1.0, 1.0}) == 40.0);
    CHECK(tail_cutoff({2.0, 30.0}) == doctest::Approx(2.0 * (30.0 + 10.0 * std::log(10.0))));
    const auto pts = uniform_breakpoints(0.0, 10.0, 3.0);
    REQUIRE(pts.size() == 5);
    CHECK(pts.front() == 0.0);
    CHECK(pts.back() == 10.0);
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] - pts[i - 1] <= 3.0);
}

TEST_CASE("find_sign_changes examples") {
    const Tolerance tol{};
    auto one = find_sign_changes([](double t) { return t - 0.5; }, 0.0, 1.0, 10, tol);
    REQUIRE(one.size() == 1);
    CHECK(one[0].t_root == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(one[0].direction == Crossing::negative_to_positive);

    CHECK(find_sign_changes([](double t) { return 1.0 + t * t; }, 0.0, 1.0, 100, tol).empty());

    // s=4 zero-temperature rate shape: sin(4 atan t) / (1+t^2)^2
    auto rate = [](double t) { return std::sin(4.0 * std::atan(t)) / std::pow(1.0 + t * t, 2.0); };
    auto r = find_sign_changes(rate, 1e-3, 10.0, 1000, tol);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0].t_root - 1.0) < 1e-9);
    CHECK(r[0].direction == Crossing::positive_to_negative);
}

TEST_CASE("sign changes are consistent with their direction") {
    const Tolerance tol{1e-9, 1e-8, 1000};
    auto g = [](double t) { return std::sin(3.0 * t) + 0.3 * std::cos(7.0 * t); };
    const auto roots = find_sign_changes(g, 0.0, 10.0, 2000, tol);
    CHECK(roots.size() >= 8);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto& c = roots[i];
        const double before = g(c.t_root - 2.0 * tol.abs_tol);
        const double after = g(c.t_root + 2.0 * tol.abs_tol);
        if (c.direction == Crossing::positive_to_negative) {
            CHECK(before > 0.0);
            CHECK(after < 0.0);
        } else {
            CHECK(before < 0.0);
            CHECK(after > 0.0);
        }
        if (i > 0) CHECK(roots[i].t_root > roots[i - 1].t_root);
    }
}

TEST_CASE("find_sign_changes argument checks") {
    auto g = [](double t) { return t; };
    CHECK_THROWS_AS(find_sign_changes(g, 1.0, 0.0, 10, Tolerance{}), std::invalid_argument);
    CHECK_THROWS_AS(find_sign_changes(g, 0.0, 1.0, 1, Tolerance{}), std::invalid_argument);
}

TEST_CASE("integrate_ode examples") {
    auto decay = [](double, const State& y) { return State{-y[0]}; };
    CHECK(std::abs(integrate_ode(decay, {1.0}, 0.0, 1.0, 1000)[0] - std::exp(-1.0)) < 1e-9);

    auto still = [](double, const State& y) { return State(y.size(), 0.0); };
    const State y0{0.3, -2.0, 5.0};
    CHECK(integrate_ode(still, y0, 0.0, 3.0, 7) == y0);

    auto rot = [](double, const State& y) { return State{-y[1], y[0]}; };
    const State half = integrate_ode(rot, {1.0, 0.0}, 0.0, M_PI, 2000);
    CHECK(std::abs(half[0] + 1.0) < 1e-8);
    CHECK(std::abs(half[1]) < 1e-8);
}

TEST_CASE("integrate_ode is fourth order") {
    auto decay = [](double, const State& y) { return State{-y[0]}; };
    double prev = 0.0;
    for (int steps : {4, 16, 64}) {
        const double err = std::abs(integrate_ode(decay, {1.0}, 0.0, 1.0, steps)[0] - std::exp(-1.0));
        if (prev > 0.0) CHECK(prev / err >= 128.0);  // 4^4 = 256 for a fourth-order method
        prev = err;
    }
}

TEST_CASE("integrate_ode error paths") {
    auto decay = [](double, const State& y) { return State{-y[0]}; };
    CHECK_THROWS_AS(integrate_ode(decay, {1.0}, 0.0, 1.0, 0), std::invalid_argument);
    auto blow = [](double, const State& y) { return State{y[0] * y[0]}; };
    CHECK_THROWS(integrate_ode(blow, {1.0}, 0.0, 10.0, 10));
}

TEST_CASE("Simpson rules") {
    std::vector<double> y;
    for (int i = 0; i <= 10; ++i) {
        const double x = i * 0.2;
        y.push_back(x * x * x - x + 2.0);
    }
    CHECK(simpson_samples(y, 0.2) == doctest::Approx(4.0 - 2.0 + 4.0).epsilon(1e-13));
    CHECK_THROWS_AS(simpson_samples({1.0, 2.0}, 0.1), std::invalid_argument);

    auto r = adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, Tolerance{});
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-9);
}
