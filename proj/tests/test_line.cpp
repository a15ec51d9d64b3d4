#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mml/errors.hpp"
#include "mml/line.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace mml;

namespace {

SimTrace base_run(double dt = 1e-4, double t_end = 10.0, int stride = 0) {
    SimOptions o;
    o.dt = dt;
    o.sample_stride = stride;
    return simulate_line(fixtures::base_line(), Stimulus::step_at(5.0), t_end, o);
}

} // namespace

TEST_CASE("single-cell assembly without input reproduces the resistive divider") {
    LineSpec s = LineSpec::uniform(1, 50.0, 25.0, 5.0, fixtures::base_device());
    const double m[] = {40.0};
    const auto sys = assemble_line(s, m, std::nullopt);
    REQUIRE(sys.size() == 1);
    CHECK(sys.diag[0] == doctest::Approx(1.0 / 25.0 + 1.0 / 40.0).epsilon(1e-15));
    CHECK(sys.rhs[0] == doctest::Approx(5.0 / 25.0).epsilon(1e-15));
    const auto v = solve_tridiagonal(sys);
    CHECK(v[0] == doctest::Approx(5.0 * 40.0 / (40.0 + 25.0)).epsilon(1e-14));
}

TEST_CASE("input branch only enters the first row, and only when driven") {
    LineSpec s = fixtures::base_line(3);
    const std::vector<double> m = {5.0, 7.0, 9.0};
    const auto open = assemble_line(s, m, std::nullopt);
    const auto driven = assemble_line(s, m, 5.0);
    CHECK(driven.diag[0] == doctest::Approx(open.diag[0] + 1.0 / 50.0).epsilon(1e-15));
    CHECK(driven.rhs[0] == doctest::Approx(open.rhs[0] + 5.0 / 50.0).epsilon(1e-15));
    for (int i = 1; i < 3; ++i) {
        CHECK(driven.diag[i] == open.diag[i]);
        CHECK(driven.rhs[i] == open.rhs[i]);
        CHECK(driven.sub[i] == doctest::Approx(-1.0 / 50.0).epsilon(1e-15));
    }
}

TEST_CASE("line solve agrees with dense elimination on mixed memristances") {
    LineSpec s = fixtures::base_line();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> md(5.0, 100.0);
    std::vector<double> m(10);
    for (auto& x : m) x = md(rng);
    const auto sys = assemble_line(s, m, 5.0);
    const auto x = solve_tridiagonal(sys);
    const auto ref = oracle::solve_dense(oracle::dense_from_tridiagonal(sys), sys.rhs);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - ref[i]) <= 1e-12);
}

TEST_CASE("an undriven uniform line rests exactly at its divider voltage") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> rd(5.0, 200.0), vd(1.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        MemristorParams dev = fixtures::base_device();
        dev.r_on = rd(rng) * 0.1 + 1.0;
        dev.r_off = dev.r_on + rd(rng);
        LineSpec s = LineSpec::uniform(8, rd(rng), rd(rng), vd(rng), dev);
        const double v_rest = dev.r_on * s.v_p / (dev.r_on + s.bias_r[0]);
        const auto v = solve_tridiagonal(assemble_line(s, s.initial_memristance, std::nullopt));
        for (double vi : v) CHECK(vi == doctest::Approx(v_rest).epsilon(1e-12));
        // feeding that same voltage through the input changes nothing
        const auto v2 = solve_tridiagonal(assemble_line(s, s.initial_memristance, v_rest));
        for (double vi : v2) CHECK(vi == doctest::Approx(v_rest).epsilon(1e-12));
    }
}

TEST_CASE("a step at the input lifts the first cell above threshold immediately") {
    LineSpec s = fixtures::base_line();
    const auto v = solve_tridiagonal(assemble_line(s, s.initial_memristance, 5.0));
    CHECK(v[0] > s.device[0].v_t);
    CHECK(v[0] == doctest::Approx(1.1325).epsilon(1e-3));
    CHECK(v[1] < s.device[1].v_t);
}

TEST_CASE("step drive switches every cell in order") {
    const SimTrace tr = base_run();
    const EventLog ev = detect_events(tr);
    REQUIRE(ev.onset.size() == 10);
    for (int i = 0; i < 10; ++i) {
        REQUIRE(ev.onset[i].has_value());
        REQUIRE(ev.completion[i].has_value());
        CHECK(*ev.completion[i] > *ev.onset[i]);
    }
    CHECK(*ev.onset[0] == 0.0);
    for (int i = 1; i < 10; ++i) CHECK(*ev.onset[i] > *ev.onset[i - 1]);
    // every memristor ends pinned at its upper bound
    const std::size_t last = tr.samples() - 1;
    for (int i = 0; i < 10; ++i) CHECK(tr.memristance(last, i) == 100.0);
}

TEST_CASE("memristances never decrease under a positive step") {
    const SimTrace tr = base_run(2e-4, 8.0);
    for (std::size_t k = 1; k < tr.samples(); ++k)
        for (int i = 0; i < 10; ++i)
            CHECK(tr.memristance(k, i) >= tr.memristance(k - 1, i));
}

TEST_CASE("propagation delay and switching duration regression values") {
    const SimTrace tr = base_run();
    const EventLog ev = detect_events(tr);
    const auto st = tau_stats(ev, 10);
    REQUIRE(st.has_value());
    CHECK(st->count == 5);
    CHECK(st->mean == doctest::Approx(0.748585176928).epsilon(1e-6));
    CHECK(st->stddev == doctest::Approx(0.00982232651058).epsilon(1e-4));
    CHECK(st->stddev / st->mean < 0.10);

    double dur = 0.0;
    for (int i = 2; i <= 7; ++i) dur += *ev.completion[i] - *ev.onset[i];
    dur /= 6.0;
    CHECK(dur == doctest::Approx(0.8755).epsilon(1e-3));

    CHECK(*ev.onset[1] == doctest::Approx(0.362970200536).epsilon(1e-6));
    CHECK(*ev.completion[0] == doctest::Approx(0.584598916795).epsilon(1e-6));
}

TEST_CASE("a truncated run reports only the events that happened") {
    const SimTrace tr = base_run(1e-4, 0.5);
    const EventLog ev = detect_events(tr);
    CHECK(ev.onset[0].has_value());
    CHECK_FALSE(ev.completion[0].has_value()); // completes at ~0.585
    CHECK_FALSE(ev.onset[5].has_value());
    CHECK_FALSE(tau_stats(ev, 10).has_value());
}

TEST_CASE("an unstimulated line holds its state for a long horizon") {
    LineSpec s = fixtures::base_line();
    SimOptions fast;
    const SimTrace tr = simulate_line(s, Stimulus::open(), 100.0, fast);
    const double v_rest = 5.0 / 6.0;
    for (std::size_t k = 0; k < tr.samples(); ++k)
        for (int i = 0; i < 10; ++i) {
            CHECK(std::abs(tr.voltage(k, i) - v_rest) <= 1e-9);
            CHECK(tr.memristance(k, i) == 5.0);
        }
    CHECK(tr.times.back() == 100.0);
    const EventLog ev = detect_events(tr);
    for (int i = 0; i < 10; ++i) {
        CHECK_FALSE(ev.onset[i].has_value());
        CHECK_FALSE(ev.completion[i].has_value());
    }
}

TEST_CASE("the constant-state shortcut changes nothing observable") {
    LineSpec s = fixtures::base_line();
    SimOptions brute;
    brute.steady_exit = false;
    SimOptions fast;
    const SimTrace a = simulate_line(s, Stimulus::open(), 5.0, brute);
    const SimTrace b = simulate_line(s, Stimulus::open(), 5.0, fast);
    const double v_rest = 5.0 / 6.0;
    for (const SimTrace* tr : {&a, &b})
        for (std::size_t k = 0; k < tr->samples(); ++k)
            for (int i = 0; i < 10; ++i) CHECK(std::abs(tr->voltage(k, i) - v_rest) <= 1e-9);
    CHECK(a.times.front() == b.times.front());
    CHECK(a.times.back() == b.times.back());
    for (int i = 0; i < 10; ++i) {
        CHECK(a.voltage(a.samples() - 1, i) == b.voltage(b.samples() - 1, i));
        CHECK(a.memristance(a.samples() - 1, i) == b.memristance(b.samples() - 1, i));
    }
}

TEST_CASE("without supply bias a small input does not switch anything") {
    LineSpec s = fixtures::base_line();
    s.v_p = 0.0;
    const SimTrace tr = simulate_line(s, Stimulus::step_at(0.5), 5.0, {});
    const EventLog ev = detect_events(tr);
    for (int i = 0; i < 10; ++i) CHECK_FALSE(ev.onset[i].has_value());
    const std::size_t last = tr.samples() - 1;
    for (int i = 0; i < 10; ++i) CHECK(tr.memristance(last, i) == 5.0);
}

TEST_CASE("a finite pulse still drives the full cascade") {
    const SimTrace tr = simulate_line(fixtures::base_line(), Stimulus::rectangular(5.0, 0.0, 2.0),
                                      12.0, {});
    const EventLog ev = detect_events(tr);
    for (int i = 0; i < 10; ++i) REQUIRE(ev.completion[i].has_value());
    CHECK(*ev.completion[9] == doctest::Approx(6.932).epsilon(1e-3));
}

TEST_CASE("event times do not depend on the sampling stride") {
    const SimTrace fine = base_run(1e-4, 4.0, 1);
    const SimTrace coarse = base_run(1e-4, 4.0, 1000);
    const EventLog ef = detect_events(fine);
    const EventLog ec = detect_events(coarse);
    for (int i = 0; i < 5; ++i) {
        REQUIRE(ef.onset[i].has_value());
        REQUIRE(ec.onset[i].has_value());
        CHECK(*ec.onset[i] == doctest::Approx(*ef.onset[i]).epsilon(1e-12));
        if (ef.completion[i]) {
            REQUIRE(ec.completion[i].has_value());
            CHECK(*ec.completion[i] == doctest::Approx(*ef.completion[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("identical runs produce identical traces") {
    const SimTrace a = base_run(2e-4, 3.0);
    const SimTrace b = base_run(2e-4, 3.0);
    CHECK(a.times == b.times);
    CHECK(a.voltages == b.voltages);
    CHECK(a.memristances == b.memristances);
}

TEST_CASE("delayed interior waveforms predict their neighbours") {
    const SimTrace tr = base_run();
    const auto st = tau_stats(detect_events(tr), 10);
    REQUIRE(st.has_value());
    for (int cell = 2; cell <= 6; ++cell)
        CHECK(traveling_wave_residual(tr, st->mean, cell) <= 0.08);
    // with no delay the prediction is poor
    CHECK(traveling_wave_residual(tr, 0.0, 4) > 0.5);
}

TEST_CASE("the delayed-prediction check rejects bad arguments") {
    const SimTrace tr = base_run(1e-3, 2.0);
    CHECK_THROWS_AS(traveling_wave_residual(tr, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(traveling_wave_residual(tr, 0.5, 7), std::invalid_argument);
    CHECK_THROWS_AS(traveling_wave_residual(tr, -0.1, 4), std::invalid_argument);
    CHECK_THROWS_AS(traveling_wave_residual(tr, 100.0, 4), NumericalError);
}

TEST_CASE("trace interpolation is linear and range-checked") {
    const SimTrace tr = base_run(1e-3, 1.0, 10);
    const double t0 = tr.times[3], t1 = tr.times[4];
    const double mid = 0.5 * (t0 + t1);
    const double expect = 0.5 * (tr.voltage(3, 2) + tr.voltage(4, 2));
    CHECK(tr.voltage_at(mid, 2) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(tr.voltage_at(t0, 2) == tr.voltage(3, 2));
    CHECK_THROWS_AS(tr.voltage_at(-0.1, 2), std::invalid_argument);
    CHECK_THROWS_AS(tr.voltage_at(1.5, 2), std::invalid_argument);
}

TEST_CASE("single stepping advances time and the switching cell") {
    LineSpec s = fixtures::base_line();
    LineState st;
    st.memristance = s.initial_memristance;
    const auto v = step_line(s, st, Stimulus::step_at(5.0), 1e-4);
    CHECK(st.t == doctest::Approx(1e-4));
    CHECK(v[0] > 1.0);
    CHECK(st.memristance[0] > 5.0);
    for (int i = 1; i < 10; ++i) CHECK(st.memristance[i] == 5.0);

    LineState idle;
    idle.memristance = s.initial_memristance;
    step_line(s, idle, Stimulus::open(), 1e-4);
    for (int i = 0; i < 10; ++i) CHECK(idle.memristance[i] == 5.0);
}

TEST_CASE("simulation input validation") {
    LineSpec s = fixtures::base_line();
    SimOptions o;
    CHECK_THROWS_AS(simulate_line(s, Stimulus::open(), 0.5 * o.dt, o), ConfigError);
    o.dt = 0.0;
    CHECK_THROWS_AS(simulate_line(s, Stimulus::open(), 1.0, o), ConfigError);
    o.dt = 1e-4;
    o.sample_stride = -1;
    CHECK_THROWS_AS(simulate_line(s, Stimulus::open(), 1.0, o), ConfigError);
}

TEST_CASE("line validation catches malformed specs") {
    LineSpec s = fixtures::base_line();
    s.n = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = fixtures::base_line();
    s.coupling_r.pop_back();
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = fixtures::base_line();
    s.bias_r[4] = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = fixtures::base_line();
    s.initial_memristance[2] = 1000.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = fixtures::base_line();
    s.initial_memristance[2] = 60.0;
    CHECK_NOTHROW(s.validate());
    CHECK_FALSE(s.is_uniform());
}
