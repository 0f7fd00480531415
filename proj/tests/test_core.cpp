#include <doctest.h>

#include <cmath>
#include <random>

#include "qrouter/params.hpp"
#include "qrouter/signal.hpp"

using namespace qrouter;

TEST_CASE("validate_params accepts the strongly coupled example set") {
    CqedParams p;
    p.g = 3.0;
    p.kappa1 = 0.45;
    p.kappa2 = 0.45;
    p.kappa_loss = 0.1;
    p.gamma = 1.0;
    const CqedParams valid = validate_params(p);
    CHECK(valid.kappa_total() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("validate_params accepts an ideal empty cavity") {
    CqedParams p;
    p.g = 0.0;
    p.kappa1 = 0.5;
    p.kappa2 = 0.5;
    p.kappa_loss = 0.0;
    p.gamma = 1.0;
    CHECK(validate_params(p).kappa_total() == doctest::Approx(1.0));
}

TEST_CASE("validate_params rejects negative rates and dead cavities") {
    CqedParams p;
    p.g = 3.0;
    p.kappa1 = -0.1;
    CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("kappa1"), Error);
    try {
        validate_params(p);
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NegativeRate);
    }

    CqedParams dead;
    dead.kappa1 = dead.kappa2 = dead.kappa_loss = 0.0;
    try {
        validate_params(dead);
        FAIL("expected ZeroCavity");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::ZeroCavity);
    }
}

TEST_CASE("kappa_total is always the exact sum of the three channels") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        CqedParams p;
        p.kappa1 = dist(rng);
        p.kappa2 = dist(rng);
        p.kappa_loss = dist(rng);
        CHECK(p.kappa_total() == p.kappa1 + p.kappa2 + p.kappa_loss);
    }
}

TEST_CASE("balanced qubit init puts 1/sqrt2 on both basis states") {
    const QubitInit q;
    CHECK(std::abs(q.alpha_amp() - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(q.beta_mag() - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("make_time_grid sample counts") {
    CHECK(make_time_grid(400.0, 0.01, 20.0).n_samples == 42001);
    CHECK(make_time_grid(1.0, 0.5, 0.0).n_samples == 3);
}

TEST_CASE("make_time_grid rejects a step that does not resolve the pulse") {
    try {
        make_time_grid(1.0, 2.0, 0.0);
        FAIL("expected BadStep");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::BadStep);
    }
    CHECK_THROWS_AS(make_time_grid(-1.0, 0.1, 0.0), Error);
    CHECK_THROWS_AS(make_time_grid(1.0, 0.0, 0.0), Error);
    CHECK_THROWS_AS(make_time_grid(1.0, 0.1, -2.0), Error);
}

TEST_CASE("grid spacing is uniform to rounding") {
    const TimeGrid grid = make_time_grid(10.0, 0.01, 2.0);
    for (std::size_t k = 0; k + 1 < grid.n_samples; ++k) {
        const double spacing = grid.time_at(k + 1) - grid.time_at(k);
        CHECK(std::abs(spacing - grid.dt) <= 8.0 * 1e-16 * (1.0 + grid.time_at(k + 1)));
    }
}

TEST_CASE("network validation fills defaults and rejects length mismatches") {
    NetworkConfig net;
    net.routers = {CqedParams{}, CqedParams{}};
    const NetworkConfig filled = validate_network(net);
    CHECK(filled.qubit_inits.size() == 2);
    CHECK(filled.arm_phases.size() == 1);
    CHECK(filled.arm_phases[0] == 0.0);

    net.qubit_inits = {QubitInit{}};
    CHECK_THROWS_AS(validate_network(net), Error);
}

TEST_CASE("simpson quadrature integrates smooth profiles accurately") {
    // integral of sin^2 over [0, pi] = pi/2, with an odd interval count
    const double pi = std::acos(-1.0);
    for (std::size_t n : {101u, 102u}) {
        std::vector<double> v(n);
        const double dt = pi / static_cast<double>(n - 1);
        for (std::size_t k = 0; k < n; ++k) {
            const double s = std::sin(static_cast<double>(k) * dt);
            v[k] = s * s;
        }
        CHECK(integrate(std::span<const double>(v), dt) ==
              doctest::Approx(pi / 2.0).epsilon(1e-8));
    }
}
