#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "gridfreq/convert.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/governors.hpp"

using namespace gridfreq;

namespace {

double max_response_dev(const GovernorModel& a, const GovernorModel& b, double domega,
                        double pm0 = 0.5, double dt = 0.005, double horizon = 60.0) {
    const auto ra = governor_step_response(a, domega, pm0, dt, horizon);
    const auto rb = governor_step_response(b, domega, pm0, dt, horizon);
    REQUIRE(ra.size() == rb.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) worst = std::max(worst, std::abs(ra[i] - rb[i]));
    return worst;
}

}  // namespace

TEST_CASE("convert_tgov1: field mapping") {
    Tgov1Params p;
    p.R = 0.05;
    p.T1 = 0.5;
    p.T2 = 1.0;
    p.T3 = 3.0;
    const Wsieg1Params w = convert_tgov1(p, DeadbandSpec{});

    CHECK(w.K == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(w.T3 == 0.5);
    CHECK(w.K1 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(w.K3 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(w.T5 == 3.0);
    CHECK(w.Pmax == p.Vmax);
    CHECK(w.Pmin == p.Vmin);

    // unused structure collapses
    CHECK(w.T1 == 0.0);
    CHECK(w.T2 == 0.0);
    CHECK(w.T4 == 0.0);
    CHECK(w.T6 == 0.0);
    CHECK(w.T7 == 0.0);
    CHECK(w.K5 == 0.0);
    CHECK(w.K7 == 0.0);

    // rate limits effectively unlimited
    CHECK(w.Uo == 10.0);
    CHECK(w.Uc == -10.0);
}

TEST_CASE("convert_tgov1: degenerate lead settings") {
    Tgov1Params p;
    p.T3 = 3.0;

    p.T2 = 0.0;  // no lead: all power through the reheater lag
    Wsieg1Params w = convert_tgov1(p, DeadbandSpec{});
    CHECK(w.K1 == 0.0);
    CHECK(w.K3 == 1.0);

    p.T2 = p.T3;  // full bypass: reheater invisible
    w = convert_tgov1(p, DeadbandSpec{});
    CHECK(w.K1 == 1.0);
    CHECK(w.K3 == 0.0);
}

TEST_CASE("convert_tgov1: stage fractions always sum to one") {
    std::mt19937 rng(123u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        Tgov1Params p;
        p.R = 0.03 + 0.09 * u01(rng);
        p.T1 = 0.2 + 0.6 * u01(rng);
        p.T3 = 2.0 + 8.0 * u01(rng);
        p.T2 = p.T3 * u01(rng);
        const Wsieg1Params w = convert_tgov1(p, DeadbandSpec{});
        CHECK(std::abs(w.K1 + w.K3 - 1.0) <= 1e-12);
        CHECK(w.K1 >= 0.0);
        CHECK(w.K3 >= 0.0);
    }
}

TEST_CASE("convert_tgov1: responses agree to integrator noise") {
    std::mt19937 rng(456u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        Tgov1Params p;
        p.R = 0.03 + 0.09 * u01(rng);
        p.T1 = 0.2 + 0.6 * u01(rng);
        p.T3 = 2.0 + 8.0 * u01(rng);
        p.T2 = p.T3 * 0.95 * u01(rng);
        const GovernorModel src{p};
        const GovernorModel dst{convert_tgov1(p, DeadbandSpec{})};
        CHECK(max_response_dev(src, dst, -0.004) <= 1e-6);
        CHECK(max_response_dev(src, dst, 0.002) <= 1e-6);
    }
}

TEST_CASE("convert_tgov1: invalid source rejected") {
    Tgov1Params p;
    p.T3 = 0.0;
    CHECK_THROWS_AS(convert_tgov1(p, DeadbandSpec{}), InvalidParameter);
}

TEST_CASE("convert_ieeeg1: field copy plus deadband attach") {
    Ieeeg1Params p;
    p.K = 18.0;
    p.T1 = 0.1;
    p.T2 = 0.05;
    p.Uo = 0.08;
    p.K1 = 0.25;
    p.K3 = 0.45;
    p.K5 = 0.30;
    const DeadbandSpec db = DeadbandSpec::from_hz(0.036, 60.0);
    const Wsieg1Params w = convert_ieeeg1(p, db);

    CHECK(w.K == p.K);
    CHECK(w.T1 == p.T1);
    CHECK(w.T2 == p.T2);
    CHECK(w.T3 == p.T3);
    CHECK(w.Uo == p.Uo);
    CHECK(w.Uc == p.Uc);
    CHECK(w.K1 == p.K1);
    CHECK(w.K3 == p.K3);
    CHECK(w.K5 == p.K5);
    CHECK(w.K1 + w.K3 + w.K5 + w.K7 == p.K1 + p.K3 + p.K5 + p.K7);
    CHECK(w.db.width == db.width);

    // with the band removed, the copy is response-identical
    Wsieg1Params bare = w;
    bare.db = DeadbandSpec{};
    CHECK(max_response_dev(GovernorModel{p}, GovernorModel{bare}, -0.004) <= 1e-9);

    // with the band in place, sub-band inputs produce no response at all
    const auto r = governor_step_response(GovernorModel{w}, -0.030 / 60.0, 0.5, 0.005, 20.0);
    for (double v : r) CHECK(v == 0.5);
}

TEST_CASE("verify_conversion: a model against itself scores zero") {
    const GovernorModel m{Wsieg1Params{}};
    const auto [rms, mx] = verify_conversion(m, m, FitConfig{});
    CHECK(rms == 0.0);
    CHECK(mx == 0.0);
}

TEST_CASE("verify_conversion: deadband suppression shows up as the full response") {
    Tgov1Params p;
    p.R = 0.05;
    const GovernorModel src{p};
    const GovernorModel banded{convert_tgov1(p, DeadbandSpec::from_hz(0.036, 60.0))};

    FitConfig cfg;
    cfg.probes_hz = {-0.020};  // inside the 36 mHz band
    const auto [rms, mx] = verify_conversion(src, banded, cfg);
    // banded copy never moves, so the error is the source deviation itself
    CHECK(mx == doctest::Approx(0.020 / 60.0 / p.R).epsilon(1e-4));
    CHECK(rms > 0.0);
}

TEST_CASE("convert_by_fit: tgov1 source lands near the analytic answer") {
    Tgov1Params p;
    p.R = 0.06;
    p.T1 = 0.4;
    p.T2 = 1.2;
    p.T3 = 4.0;
    const ConversionReport rep = convert_by_fit(GovernorModel{p}, DeadbandSpec{}, FitConfig{});
    CHECK(rep.verified);
    CHECK(rep.rms <= 1e-4);
    Wsieg1Params nodb = rep.result;
    nodb.db = DeadbandSpec{};
    const GovernorModel analytic{convert_tgov1(p, DeadbandSpec{})};
    CHECK(max_response_dev(analytic, GovernorModel{nodb}, -0.05 / 60.0) <= 1e-3);
}

TEST_CASE("convert_by_fit: wsieg1 source is recovered essentially exactly") {
    Wsieg1Params p;
    p.K = 22.0;
    p.T3 = 0.3;
    p.T5 = 6.0;
    p.K1 = 0.35;
    p.K3 = 0.65;
    p.K5 = 0.0;
    const ConversionReport rep = convert_by_fit(GovernorModel{p}, DeadbandSpec{}, FitConfig{});
    CHECK(rep.verified);
    CHECK(rep.rms <= 1e-9);
}

TEST_CASE("convert_by_fit: gast with a biting temperature limit cannot verify") {
    GastParams p;
    p.R = 0.05;
    p.AT = 0.55;   // barely above the 0.5 operating point
    p.KT = 1.0;
    const ConversionReport rep = convert_by_fit(GovernorModel{p}, DeadbandSpec{}, FitConfig{});
    CHECK_FALSE(rep.verified);
    CHECK(rep.max_abs > FitConfig{}.tolerance);
}

TEST_CASE("convert_by_fit: refitting a fit result is stable") {
    GastParams p;  // mild settings, no limit interaction
    p.R = 0.05;
    p.AT = 5.0;
    const ConversionReport first = convert_by_fit(GovernorModel{p}, DeadbandSpec{}, FitConfig{});
    CHECK(first.verified);
    const ConversionReport second =
        convert_by_fit(GovernorModel{first.result}, DeadbandSpec{}, FitConfig{});
    CHECK(second.verified);
    Wsieg1Params a = first.result;
    Wsieg1Params b = second.result;
    a.db = DeadbandSpec{};
    b.db = DeadbandSpec{};
    CHECK(max_response_dev(GovernorModel{a}, GovernorModel{b}, -0.05 / 60.0) <= 1e-6);
}

TEST_CASE("convert_model: dispatch and bookkeeping") {
    SUBCASE("tgov1 goes analytic, damping migrates out of the model") {
        Tgov1Params p;
        p.Dt = 0.3;
        const ConversionReport rep = convert_model(GovernorModel{p}, DeadbandSpec{}, FitConfig{});
        CHECK(rep.method == ConvertMethod::Analytic);
        CHECK(rep.source_kind == "TGOV1");
        CHECK(rep.dt_to_damping == 0.3);
        CHECK(rep.verified);
        // converted response matches the source with its damping removed
        Tgov1Params bare = p;
        bare.Dt = 0.0;
        Wsieg1Params nodb = rep.result;
        nodb.db = DeadbandSpec{};
        CHECK(max_response_dev(GovernorModel{bare}, GovernorModel{nodb}, -0.004) <= 1e-6);
    }
    SUBCASE("ieeeg1 goes analytic") {
        const ConversionReport rep =
            convert_model(GovernorModel{Ieeeg1Params{}}, DeadbandSpec{}, FitConfig{});
        CHECK(rep.method == ConvertMethod::Analytic);
        CHECK(rep.dt_to_damping == 0.0);
        CHECK(rep.verified);
    }
    SUBCASE("wsieg1 is a re-band copy") {
        Wsieg1Params p;
        const DeadbandSpec db = DeadbandSpec::from_hz(0.050, 60.0);
        const ConversionReport rep = convert_model(GovernorModel{p}, db, FitConfig{});
        CHECK(rep.method == ConvertMethod::Analytic);
        CHECK(rep.result.db.width == db.width);
        CHECK(rep.result.K == p.K);
        CHECK(rep.verified);
    }
    SUBCASE("gast and ieesgo go through the fitter") {
        GastParams g;
        g.AT = 5.0;
        g.Dturb = 0.2;
        const ConversionReport rg = convert_model(GovernorModel{g}, DeadbandSpec{}, FitConfig{});
        CHECK(rg.method == ConvertMethod::ResponseFit);
        CHECK(rg.dt_to_damping == 0.2);
        CHECK(rg.verified);

        const ConversionReport ri =
            convert_model(GovernorModel{IeesgoParams{}}, DeadbandSpec{}, FitConfig{});
        CHECK(ri.method == ConvertMethod::ResponseFit);
        CHECK(ri.verified);
    }
}

TEST_CASE("convert: fit config validation") {
    FitConfig cfg;
    cfg.probes_hz.clear();
    CHECK_THROWS_AS(convert_by_fit(GovernorModel{GastParams{}}, DeadbandSpec{}, cfg),
                    InvalidParameter);
    cfg = FitConfig{};
    cfg.dt = 0.0;
    CHECK_THROWS_AS(convert_by_fit(GovernorModel{GastParams{}}, DeadbandSpec{}, cfg),
                    InvalidParameter);
}
