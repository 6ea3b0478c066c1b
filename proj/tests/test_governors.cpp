#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gridfreq/convert.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/governors.hpp"

using namespace gridfreq;

namespace {

// pmech trajectory from repeated RK4 steps at fixed speed deviation
std::vector<double> run_gov(const GovernorModel& m, double pm0, double domega, double dt,
                            double horizon_s) {
    GovernorState s = governor_init(m, pm0);
    std::vector<double> out;
    out.push_back(governor_output(m, s.x, domega));
    const int n = static_cast<int>(std::llround(horizon_s / dt));
    for (int i = 0; i < n; ++i) {
        auto [ns, pm] = governor_step(m, s, domega, dt);
        s = std::move(ns);
        out.push_back(pm);
    }
    return out;
}

}  // namespace

TEST_CASE("governors: every model holds its initial equilibrium") {
    const double pm0 = 0.8;
    const std::vector<GovernorModel> models = {
        Tgov1Params{}, GastParams{}, IeesgoParams{}, Ieeeg1Params{}, Wsieg1Params{}};
    for (const auto& m : models) {
        CAPTURE(governor_kind_name(m));
        const auto pm = run_gov(m, pm0, 0.0, 0.01, 100.0);
        for (double v : pm) CHECK(std::abs(v - pm0) <= 1e-9);
    }
}

TEST_CASE("governors: state vector sizes") {
    CHECK(governor_state_size(GovernorModel{Tgov1Params{}}) == 3);
    CHECK(governor_state_size(GovernorModel{GastParams{}}) == 4);
    CHECK(governor_state_size(GovernorModel{IeesgoParams{}}) == 6);
    CHECK(governor_state_size(GovernorModel{Ieeeg1Params{}}) == 7);
    CHECK(governor_state_size(GovernorModel{Wsieg1Params{}}) == 7);
}

TEST_CASE("tgov1: steady-state droop response") {
    Tgov1Params p;
    p.R = 0.05;
    p.Dt = 0.0;

    SUBCASE("underfrequency raises output by -domega/R") {
        const auto pm = run_gov(GovernorModel{p}, 0.5, -0.001, 0.005, 60.0);
        CHECK(std::abs(pm.back() - 0.5 - 0.020) <= 1e-6);
    }

    SUBCASE("turbine damping adds -Dt*domega") {
        p.Dt = 0.5;
        const auto pm = run_gov(GovernorModel{p}, 0.5, -0.001, 0.005, 60.0);
        CHECK(std::abs(pm.back() - 0.5 - (0.020 + 0.0005)) <= 1e-6);
    }

    SUBCASE("overfrequency lowers output symmetrically") {
        const auto up = run_gov(GovernorModel{p}, 0.5, -0.001, 0.005, 60.0);
        const auto dn = run_gov(GovernorModel{p}, 0.5, 0.001, 0.005, 60.0);
        for (std::size_t i = 0; i < up.size(); ++i) {
            CHECK(std::abs((up[i] - 0.5) + (dn[i] - 0.5)) <= 1e-12);
        }
    }
}

TEST_CASE("gast: droop with turbine damping, low-value gate inactive") {
    GastParams p;
    p.R = 0.05;
    p.Dturb = 0.3;
    const auto pm = run_gov(GovernorModel{p}, 0.5, -0.001, 0.005, 60.0);
    CHECK(std::abs(pm.back() - 0.5 - (0.020 + 0.0003)) <= 1e-6);
}

TEST_CASE("gast: temperature limit caps the response at AT") {
    GastParams p;
    p.R = 0.05;
    p.AT = 0.52;
    p.KT = 3.0;
    const auto pm = run_gov(GovernorModel{p}, 0.5, -0.01, 0.005, 60.0);
    // droop target 0.7 is unreachable; exhaust limit pulls output back to AT
    CHECK(std::abs(pm.back() - p.AT) <= 1e-4);
    CHECK(*std::max_element(pm.begin(), pm.end()) < 0.7 - 0.05);
}

TEST_CASE("gast: initial load above the temperature limit is infeasible") {
    GastParams p;
    p.AT = 0.55;
    CHECK_THROWS_AS(governor_init(GovernorModel{p}, 0.6), InfeasibleInit);
}

TEST_CASE("ieesgo: steady-state gain is K1 regardless of branch split") {
    IeesgoParams p;
    p.K1 = 25.0;
    p.K2 = 0.4;
    p.K3 = 0.3;
    const auto pm = run_gov(GovernorModel{p}, 0.6, -0.002, 0.005, 120.0);
    CHECK(std::abs(pm.back() - 0.6 - 0.05) <= 1e-6);

    p.K2 = 0.0;
    p.K3 = 0.0;
    const auto pm2 = run_gov(GovernorModel{p}, 0.6, -0.002, 0.005, 120.0);
    CHECK(std::abs(pm2.back() - 0.6 - 0.05) <= 1e-6);
}

TEST_CASE("ieeeg1: steady-state gain is K with unit stage-fraction sum") {
    Ieeeg1Params p;  // K = 20, K1+K3+K5 = 1
    const auto pm = run_gov(GovernorModel{p}, 0.5, -0.001, 0.005, 120.0);
    CHECK(std::abs(pm.back() - 0.5 - 0.020) <= 1e-6);
}

TEST_CASE("wsieg1: deadband blocks sub-band deviations bit-exactly") {
    Wsieg1Params p;
    p.db = DeadbandSpec::from_hz(0.036, 60.0);
    // 30 mHz deviation stays inside the 36 mHz band
    const auto pm = run_gov(GovernorModel{p}, 0.8, -0.030 / 60.0, 0.005, 20.0);
    for (double v : pm) CHECK(v == 0.8);
}

TEST_CASE("wsieg1: deadband shape changes the surviving signal") {
    Wsieg1Params p;
    p.db = DeadbandSpec::from_hz(0.036, 60.0);
    const double domega = -0.001;  // -60 mHz, outside the band

    p.db.shape = DeadbandShape::Step;
    const auto step = run_gov(GovernorModel{p}, 0.5, domega, 0.005, 120.0);
    CHECK(std::abs(step.back() - 0.5 - 0.020) <= 1e-6);

    p.db.shape = DeadbandShape::ContinuousOffset;
    const auto cont = run_gov(GovernorModel{p}, 0.5, domega, 0.005, 120.0);
    CHECK(std::abs(cont.back() - 0.5 - 20.0 * (0.001 - 0.0006)) <= 1e-6);
}

TEST_CASE("wsieg1: servo rate limit caps the opening slope") {
    Wsieg1Params p;
    p.T1 = 0.0;
    p.T2 = 0.0;
    p.T3 = 0.4;
    p.Uo = 0.1;
    p.Uc = -0.1;
    p.T4 = 0.0;
    p.T5 = 0.0;
    p.T6 = 0.0;
    p.K1 = 1.0;
    p.K3 = 0.0;
    p.K5 = 0.0;
    const double dt = 0.005;
    // demand jump of 0.2 pu; unconstrained servo slope would be 0.5 pu/s
    const auto pm = run_gov(GovernorModel{p}, 0.5, -0.01, dt, 30.0);
    double max_slope = 0.0;
    for (std::size_t i = 1; i < pm.size(); ++i) {
        max_slope = std::max(max_slope, std::abs(pm[i] - pm[i - 1]) / dt);
    }
    CHECK(max_slope <= p.Uo + 1e-9);
    CHECK(std::abs(pm.back() - 0.7) <= 1e-6);

    p.Uo = 10.0;
    p.Uc = -10.0;
    const auto fast = run_gov(GovernorModel{p}, 0.5, -0.01, dt, 30.0);
    double fast_slope = 0.0;
    for (std::size_t i = 1; i < fast.size(); ++i) {
        fast_slope = std::max(fast_slope, std::abs(fast[i] - fast[i - 1]) / dt);
    }
    CHECK(fast_slope > 0.3);  // near the unconstrained 0.5 pu/s
    CHECK(std::abs(fast.back() - 0.7) <= 1e-6);
}

TEST_CASE("wsieg1: rate-limit flag latches while slewing") {
    Wsieg1Params p;
    p.Uo = 0.05;
    p.Uc = -0.05;
    GovernorState s = governor_init(GovernorModel{p}, 0.5);
    CHECK_FALSE(s.rate_limited);
    for (int i = 0; i < 40; ++i) {
        auto [ns, pm] = governor_step(GovernorModel{p}, s, -0.01, 0.005);
        s = std::move(ns);
    }
    CHECK(s.rate_limited);
}

TEST_CASE("tgov1: non-windup valve limit releases cleanly") {
    Tgov1Params p;
    p.R = 0.05;
    const GovernorModel m{p};
    GovernorState s = governor_init(m, 0.9);

    // drive hard into Vmax: droop demand 0.9 + 0.2 > 1.0
    for (int i = 0; i < 4000; ++i) {
        auto [ns, pm] = governor_step(m, s, -0.01, 0.005);
        s = std::move(ns);
        CHECK(s.x[0] <= p.Vmax + 1e-12);
    }
    CHECK(s.at_upper);
    CHECK(governor_output(m, s.x, -0.01) == doctest::Approx(1.0).epsilon(1e-3));

    // release: output returns to the reference without windup overhang
    double pm_end = 0.0;
    for (int i = 0; i < 8000; ++i) {
        auto [ns, pm] = governor_step(m, s, 0.0, 0.005);
        s = std::move(ns);
        pm_end = pm;
        CHECK(pm >= 0.9 - 1e-9);
    }
    CHECK_FALSE(s.at_upper);
    CHECK(std::abs(pm_end - 0.9) <= 1e-4);
}

TEST_CASE("wsieg1: valve curve remaps position to stage power") {
    Wsieg1Params p;
    p.gv_curve = {{0.0, 0.0}, {0.5, 0.4}, {1.0, 1.0}};

    SUBCASE("equilibrium solves the inverse map") {
        const auto pm = run_gov(GovernorModel{p}, 0.4, 0.0, 0.01, 40.0);
        for (double v : pm) CHECK(std::abs(v - 0.4) <= 1e-9);
    }

    SUBCASE("droop response lands on the upper segment slope") {
        // valve settles at 0.52; second segment gain is 1.2
        const auto pm = run_gov(GovernorModel{p}, 0.4, -0.001, 0.005, 120.0);
        CHECK(std::abs(pm.back() - 0.424) <= 1e-6);
    }
}

TEST_CASE("governors: halving dt barely moves the response") {
    Wsieg1Params p;
    const GovernorModel m{p};
    const auto a = governor_step_response(m, -0.004, 0.5, 0.005, 30.0);
    const auto b = governor_step_response(m, -0.004, 0.5, 0.0025, 30.0);
    REQUIRE(b.size() == 2 * a.size() - 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[2 * i]));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("governors: infeasible initial output") {
    Tgov1Params p;
    CHECK_THROWS_AS(governor_init(GovernorModel{p}, p.Vmax + 0.1), InfeasibleInit);
    CHECK_THROWS_AS(governor_init(GovernorModel{p}, p.Vmin - 0.1), InfeasibleInit);
}

TEST_CASE("governors: non-finite speed input") {
    const GovernorModel m{Tgov1Params{}};
    GovernorState s = governor_init(m, 0.5);
    CHECK_THROWS_AS(governor_step(m, s, std::numeric_limits<double>::quiet_NaN(), 0.005),
                    NumericError);
}

TEST_CASE("governors: parameter validation") {
    SUBCASE("tgov1") {
        Tgov1Params p;
        p.R = 0.0;
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
        p = {};
        p.T2 = 4.0;  // exceeds T3
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
        p = {};
        p.Vmax = p.Vmin;
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
    }
    SUBCASE("wsieg1") {
        Wsieg1Params p;
        p.K2 = 0.1;  // second-shaft fractions unsupported
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
        p = {};
        p.gv_curve = {{0.0, 0.0}};
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
        p.gv_curve = {{0.0, 0.0}, {0.0, 0.5}};
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
    }
    SUBCASE("gast") {
        GastParams p;
        p.AT = 0.0;
        CHECK_THROWS_AS(governor_validate(GovernorModel{p}), InvalidParameter);
    }
}
