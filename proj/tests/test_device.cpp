#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mml/device.hpp"
#include "mml/errors.hpp"

#include "fixtures.hpp"

using namespace mml;

TEST_CASE("current is voltage over memristance") {
    CHECK(memristor_current(1.0, {5.0}) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(memristor_current(0.0, {5.0}) == 0.0);
    CHECK(memristor_current(-2.5, {50.0}) == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("rate is exactly zero inside the dead zone") {
    const auto p = fixtures::base_device();
    for (double v : {0.0, 0.3, -0.3, 0.999, -0.999, 0.9999999})
        CHECK(memristance_rate(v, {42.0}, p) == 0.0);
    // zero overdrive exactly at threshold
    CHECK(memristance_rate(1.0, {42.0}, p) == 0.0);
    CHECK(memristance_rate(-1.0, {42.0}, p) == 0.0);
}

TEST_CASE("rate grows linearly with overdrive and follows the sign") {
    const auto p = fixtures::base_device();
    CHECK(memristance_rate(2.0, {50.0}, p) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(memristance_rate(-2.0, {50.0}, p) == doctest::Approx(-100.0).epsilon(1e-12));
    CHECK(memristance_rate(1.5, {50.0}, p) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("rate is zeroed only at the bound it pushes against") {
    const auto p = fixtures::base_device();
    CHECK(memristance_rate(2.0, {p.r_off}, p) == 0.0);
    CHECK(memristance_rate(-2.0, {p.r_on}, p) == 0.0);
    CHECK(memristance_rate(2.0, {p.r_on}, p) > 0.0);
    CHECK(memristance_rate(-2.0, {p.r_off}, p) < 0.0);
}

TEST_CASE("advance examples") {
    const auto p = fixtures::base_device();
    CHECK(advance_memristor({5.0}, 0.5, 1e-2, p).r_m == 5.0);
    CHECK(advance_memristor({5.0}, 2.0, 1e-2, p).r_m == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(advance_memristor({99.9999}, 3.0, 1.0, p).r_m == 100.0);
    CHECK(advance_memristor({5.0001}, -3.0, 1.0, p).r_m == 5.0);
}

TEST_CASE("rate is odd in the voltage away from the bounds") {
    const auto p = fixtures::base_device();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> vmag(1.0, 10.0), rm(10.0, 90.0);
    for (int k = 0; k < 1000; ++k) {
        const double v = vmag(rng);
        const MemristorState s{rm(rng)};
        CHECK(memristance_rate(v, s, p) ==
              doctest::Approx(-memristance_rate(-v, s, p)).epsilon(1e-14));
    }
}

TEST_CASE("a larger overdrive never switches slower") {
    const auto p = fixtures::base_device();
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> vd(1.0, 8.0), rm(5.0, 100.0);
    for (int k = 0; k < 1000; ++k) {
        double v1 = vd(rng), v2 = vd(rng);
        if (v2 < v1) std::swap(v1, v2);
        const MemristorState s{rm(rng)};
        CHECK(memristance_rate(v2, s, p) >= memristance_rate(v1, s, p));
    }
}

TEST_CASE("state stays inside the bounds under random drive") {
    const auto p = fixtures::base_device();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> vd(-6.0, 6.0);
    MemristorState s{30.0};
    for (int k = 0; k < 20000; ++k) {
        s = advance_memristor(s, vd(rng), 1e-2, p);
        REQUIRE(s.r_m >= p.r_on);
        REQUIRE(s.r_m <= p.r_off);
    }
}

TEST_CASE("a bounded state held at constant drive stays put") {
    const auto p = fixtures::base_device();
    MemristorState s{p.r_off};
    for (int k = 0; k < 100; ++k) s = advance_memristor(s, 4.0, 1e-2, p);
    CHECK(s.r_m == p.r_off);
    s.r_m = p.r_on;
    for (int k = 0; k < 100; ++k) s = advance_memristor(s, -4.0, 1e-2, p);
    CHECK(s.r_m == p.r_on);
}

TEST_CASE("parameter validation") {
    auto p = fixtures::base_device();
    CHECK_NOTHROW(p.validate());
    p.r_on = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = fixtures::base_device();
    p.r_off = p.r_on;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = fixtures::base_device();
    p.beta = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = fixtures::base_device();
    p.v_t = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
