#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridfreq/csv.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/fixtures.hpp"
#include "gridfreq/ingest.hpp"
#include "gridfreq/json_io.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/simulator.hpp"
#include "gridfreq/validate.hpp"

using namespace gridfreq;
namespace fs = std::filesystem;

namespace {

const fs::path& tmp_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("gridfreq_io_" + std::to_string(static_cast<long>(::getpid())));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
    const fs::path p = tmp_dir() / name;
    std::ofstream os(p);
    os << body;
    os.close();
    return p.string();
}

// uniform 10 Hz measurement CSV; mutate lets tests inject glitches
std::string clean_rows(int n, double f0 = 60.0, double droop = 0.0) {
    std::ostringstream os;
    os << "time_s,freq_hz\n";
    char buf[64];
    for (int i = 0; i < n; ++i) {
        const double t = 0.1 * i;
        const double f = f0 - droop * t;
        std::snprintf(buf, sizeof(buf), "%.1f,%.6f\n", t, f);
        os << buf;
    }
    return os.str();
}

}  // namespace

TEST_CASE("trace csv: single-column header and 6-decimal round trip") {
    const FrequencyTrace tr = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});
    const std::string path = (tmp_dir() / "trace.csv").string();
    write_trace_csv(tr, path);

    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header == "time_s,freq_hz");

    const FrequencyTrace back = read_trace_csv(path);
    REQUIRE(back.size() == tr.size());
    CHECK(back.dt == doctest::Approx(tr.dt).epsilon(1e-9));
    CHECK(back.start_s == doctest::Approx(tr.start_s).epsilon(1e-9));
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(back.columns[0][i] == round_places(tr.columns[0][i], 6));
    }
}

TEST_CASE("trace csv: multi-column header carries the labels") {
    const FrequencyTrace tr = simulate(pseudo_ercot(), pseudo_ercot_event(), SimConfig{});
    REQUIRE(tr.columns.size() == 2);
    std::ostringstream os;
    write_trace_csv(tr, os);
    const std::string text = os.str();
    const std::string expect =
        "time_s,freq_" + tr.labels[0] + ",freq_" + tr.labels[1] + "\n";
    CHECK(text.substr(0, expect.size()) == expect);

    std::istringstream is(text);
    const FrequencyTrace back = read_trace_csv(is);
    CHECK(back.labels == tr.labels);
    CHECK(back.columns.size() == 2);
}

TEST_CASE("report csv: golden row formatting") {
    ResponseMetrics meas;
    meas.nadir = 59.959;
    meas.rocof = 4.94;
    meas.settling_time = 9.9;
    meas.settling_frequency = 59.962;
    ResponseMetrics sim = meas;
    sim.rocof = 5.58;
    sim.settling_time = 9.2;
    sim.settling_frequency = 59.961;
    const MismatchReport rep = score(meas, sim, SuccessThresholds{});

    std::ostringstream os;
    write_report_csv(rep, os);
    CHECK(os.str() ==
          "metric,measured,simulated,mismatch,success_value,pass\n"
          "nadir,59.959,59.959,0.000,0.010,true\n"
          "rocof,4.94,5.58,0.64,10.00,true\n"
          "settling_time,9.9,9.2,0.7,3.0,true\n"
          "settling_frequency,59.962,59.961,0.001,0.010,true\n");
}

TEST_CASE("json: governor round trips preserve every field") {
    SUBCASE("tgov1") {
        Tgov1Params p;
        p.R = 0.047;
        p.T2 = 0.8;
        p.Dt = 0.2;
        const json j = governor_to_json(GovernorModel{p}, 60.0);
        CHECK(j["kind"] == "TGOV1");
        const auto back = std::get<Tgov1Params>(governor_from_json(j, 60.0));
        CHECK(back.R == p.R);
        CHECK(back.T2 == p.T2);
        CHECK(back.Dt == p.Dt);
    }
    SUBCASE("gast") {
        GastParams p;
        p.AT = 0.92;
        p.KT = 2.7;
        p.Dturb = 0.1;
        const json j = governor_to_json(GovernorModel{p}, 60.0);
        CHECK(j["kind"] == "GAST");
        const auto back = std::get<GastParams>(governor_from_json(j, 60.0));
        CHECK(back.AT == p.AT);
        CHECK(back.KT == p.KT);
        CHECK(back.Dturb == p.Dturb);
    }
    SUBCASE("ieesgo") {
        IeesgoParams p;
        p.K1 = 23.0;
        p.K2 = 0.35;
        p.T5 = 7.5;
        const json j = governor_to_json(GovernorModel{p}, 60.0);
        CHECK(j["kind"] == "IEESGO");
        const auto back = std::get<IeesgoParams>(governor_from_json(j, 60.0));
        CHECK(back.K1 == p.K1);
        CHECK(back.K2 == p.K2);
        CHECK(back.T5 == p.T5);
    }
    SUBCASE("ieeeg1") {
        Ieeeg1Params p;
        p.K = 25.0;
        p.Uo = 0.08;
        p.K5 = 0.2;
        p.K3 = 0.5;
        const json j = governor_to_json(GovernorModel{p}, 60.0);
        CHECK(j["kind"] == "IEEEG1");
        const auto back = std::get<Ieeeg1Params>(governor_from_json(j, 60.0));
        CHECK(back.K == p.K);
        CHECK(back.Uo == p.Uo);
        CHECK(back.K5 == p.K5);
    }
    SUBCASE("wsieg1 with deadband and valve curve") {
        Wsieg1Params p;
        p.K = 21.0;
        p.db = DeadbandSpec::from_hz(0.036, 60.0, DeadbandShape::Step);
        p.gv_curve = {{0.0, 0.0}, {0.5, 0.4}, {1.0, 1.0}};
        const json j = governor_to_json(GovernorModel{p}, 60.0);
        CHECK(j["kind"] == "WSIEG1");
        CHECK(j["db"]["width"] == doctest::Approx(0.036).epsilon(1e-12));
        CHECK(j["db"]["shape"] == "Step");
        REQUIRE(j.contains("gv_curve"));
        const auto back = std::get<Wsieg1Params>(governor_from_json(j, 60.0));
        CHECK(back.K == p.K);
        CHECK(back.db.width == doctest::Approx(p.db.width).epsilon(1e-12));
        CHECK(back.db.shape == DeadbandShape::Step);
        REQUIRE(back.gv_curve.size() == 3);
        CHECK(back.gv_curve[1][1] == 0.4);
    }
    SUBCASE("default wsieg1 omits the curve key") {
        const json j = governor_to_json(GovernorModel{Wsieg1Params{}}, 60.0);
        CHECK_FALSE(j.contains("gv_curve"));
    }
}

TEST_CASE("json: grid and event round trips") {
    for (const GridModel& g : {pseudo_ei(), pseudo_ercot()}) {
        const json j = grid_to_json(g);
        const GridModel back = grid_from_json(j);
        CHECK(grid_to_json(back) == j);
    }
    const EventSpec ev = pseudo_ercot_event();
    const EventSpec back = event_from_json(event_to_json(ev));
    CHECK(back.t_event == ev.t_event);
    CHECK(back.trip_mw == ev.trip_mw);
    CHECK(back.area == ev.area);
}

TEST_CASE("json: bundled data files match the fixture builders") {
    const std::string dir = GRIDFREQ_DATA_DIR;
    CHECK(load_json(dir + "/pseudo_ei.json") == grid_to_json(pseudo_ei()));
    CHECK(load_json(dir + "/pseudo_ercot.json") == grid_to_json(pseudo_ercot()));
    CHECK(load_json(dir + "/ei_trip_1016mw.json") == event_to_json(pseudo_ei_event()));
    CHECK(load_json(dir + "/ercot_trip_390mw.json") == event_to_json(pseudo_ercot_event()));
}

TEST_CASE("json: config round trips") {
    MetricsConfig mc;
    mc.settle_eps_hz = 0.004;
    mc.tail_after_event = {20.0, 30.0};
    const MetricsConfig mback = metrics_config_from_json(metrics_config_to_json(mc));
    CHECK(mback.settle_eps_hz == mc.settle_eps_hz);
    REQUIRE(mback.tail_after_event.has_value());
    CHECK(mback.tail_after_event->first == 20.0);
    CHECK(mback.tail_after_event->second == 30.0);

    SuccessThresholds th;
    th.rocof = 8.0;
    const SuccessThresholds tback = thresholds_from_json(thresholds_to_json(th));
    CHECK(tback.rocof == 8.0);
    CHECK(tback.nadir == th.nadir);
}

TEST_CASE("json: schema violations") {
    CHECK_THROWS_AS(governor_from_json(json{{"kind", "WOODWARD"}}, 60.0), InvalidParameter);
    CHECK_THROWS_AS(governor_from_json(json::array(), 60.0), InvalidParameter);
    CHECK_THROWS_AS(grid_from_json(json{{"name", "x"}}), InvalidParameter);

    json g = grid_to_json(pseudo_ei());
    g["machines"][0]["governor"]["kind"] = "NOPE";
    CHECK_THROWS_AS(grid_from_json(g), InvalidParameter);
}

TEST_CASE("json: file io errors") {
    CHECK_THROWS_AS(load_json((tmp_dir() / "missing.json").string()), IoError);
    const std::string bad = write_file("bad.json", "{ not json ]");
    CHECK_THROWS_AS(load_json(bad), IoError);
}

TEST_CASE("ingest: clean uniform file passes straight through") {
    const std::string path = write_file("clean.csv", clean_rows(600));
    const IngestResult r = ingest_measurement(path);
    CHECK(r.trace.size() == 600);
    CHECK(r.trace.dt == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(r.outliers_dropped == 0);
    CHECK(r.rows_skipped == 0);
    CHECK_FALSE(r.resampled);
    CHECK(r.trace.columns[0][0] == 60.0);
}

TEST_CASE("ingest: a trailing glitch row is dropped, grid left alone") {
    std::string body = clean_rows(599);
    body += "59.9,0.000000\n";  // dead sample at the end
    const std::string path = write_file("glitch_end.csv", body);
    const IngestResult r = ingest_measurement(path);
    CHECK(r.outliers_dropped == 1);
    CHECK(r.trace.size() == 599);
    CHECK_FALSE(r.resampled);
}

TEST_CASE("ingest: an interior glitch forces a uniformity repair") {
    std::string body = clean_rows(600);
    // replace the row at t = 30.0 with a dead sample
    const std::string needle = "30.0,60.000000\n";
    const auto pos = body.find(needle);
    REQUIRE(pos != std::string::npos);
    body.replace(pos, needle.size(), "30.0,0.000000\n");
    const std::string path = write_file("glitch_mid.csv", body);
    const IngestResult r = ingest_measurement(path);
    CHECK(r.outliers_dropped == 1);
    CHECK(r.resampled);
    CHECK(r.trace.size() == 600);  // interpolated back onto the 0.1 s grid
    CHECK(r.trace.dt == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("ingest: jittered timestamps get resampled, endpoints kept") {
    std::ostringstream os;
    os << "time_s,freq_hz\n";
    char buf[64];
    for (int i = 0; i < 300; ++i) {
        double t = 0.1 * i;
        if (i > 0 && i + 1 < 300) t += (i % 2 == 0 ? 0.004 : -0.004);
        std::snprintf(buf, sizeof(buf), "%.4f,%.6f\n", t, 60.0 - 0.0001 * i);
        os << buf;
    }
    const std::string path = write_file("jitter.csv", os.str());
    const IngestResult r = ingest_measurement(path);
    CHECK(r.resampled);
    CHECK(r.trace.dt == doctest::Approx(0.1).epsilon(0.05));
    CHECK(r.trace.columns[0].front() == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(r.trace.columns[0].back() == doctest::Approx(60.0 - 0.0001 * 299).epsilon(1e-6));
}

TEST_CASE("ingest: too many unparseable rows is an error") {
    std::string body = clean_rows(20);
    body += "oops,not_a_number\nstill,bad\n";
    const std::string path = write_file("garbage.csv", body);
    CHECK_THROWS_AS(ingest_measurement(path), IngestError);
}

TEST_CASE("ingest: empty and missing files") {
    const std::string empty = write_file("empty.csv", "time_s,freq_hz\n");
    CHECK_THROWS_AS(ingest_measurement(empty), IngestError);
    CHECK_THROWS_AS(ingest_measurement((tmp_dir() / "nope.csv").string()), IoError);
}

TEST_CASE("ingest: wall-clock timestamps are parsed and rebased") {
    std::ostringstream os;
    os << "utc,hz\n";
    for (int i = 0; i < 100; ++i) {
        const int sec = i / 10;
        const int dec = i % 10;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "2026-02-21 14:57:%02d.%d,%.6f\n", 6 + sec, dec,
                      59.98 + 0.0001 * i);
        os << buf;
    }
    const std::string path = write_file("stamps.csv", os.str());
    const IngestResult r = ingest_measurement(path);
    CHECK(r.trace.size() == 100);
    CHECK(r.trace.start_s == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.trace.dt == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("ingest: explicit column mapping by name and index") {
    std::ostringstream os;
    os << "station,f_meas,seconds\n";
    for (int i = 0; i < 50; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "alpha,%.6f,%.1f\n", 60.0 - 0.0001 * i, 0.1 * i);
        os << buf;
    }
    const std::string path = write_file("mapped.csv", os.str());

    IngestOptions opt;
    opt.time_col = "seconds";
    opt.freq_col = "f_meas";
    const IngestResult byname = ingest_measurement(path, opt);
    CHECK(byname.trace.size() == 50);

    opt.time_col = "2";
    opt.freq_col = "1";
    const IngestResult byindex = ingest_measurement(path, opt);
    CHECK(byindex.trace.size() == 50);
    CHECK(byindex.trace.columns[0][0] == byname.trace.columns[0][0]);

    opt.freq_col = "missing_col";
    CHECK_THROWS_AS(ingest_measurement(path, opt), IngestError);
}

TEST_CASE("ingest: rate hint pins the grid spacing") {
    const std::string path = write_file("rated.csv", clean_rows(200));
    IngestOptions opt;
    opt.rate_hz = 10.0;
    const IngestResult r = ingest_measurement(path, opt);
    CHECK(r.trace.dt == 0.1);
}

TEST_CASE("run_validate: repeated case averages to the single-case row") {
    const FrequencyTrace tr = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});
    const std::string measured = (tmp_dir() / "ei_measured.csv").string();
    write_trace_csv(tr, measured);

    CaseSpec c;
    c.name = "ei_1";
    c.grid_file = std::string(GRIDFREQ_DATA_DIR) + "/pseudo_ei.json";
    c.event = pseudo_ei_event();
    c.measured_file = measured;
    std::vector<CaseSpec> cases = {c, c, c};
    cases[1].name = "ei_2";
    cases[2].name = "ei_3";

    const ValidationSummary s = run_validate(cases, SuccessThresholds{});
    REQUIRE(s.cases.size() == 3);
    for (const auto& cr : s.cases) {
        CAPTURE(cr.error);
        REQUIRE(cr.ok);
    }
    for (int k = 0; k < 4; ++k) {
        CHECK(s.average[k] == s.cases[0].report.rows[k].mismatch);
    }
    CHECK(s.overall_pass);
}

TEST_CASE("run_validate: empty case list refused") {
    CHECK_THROWS_AS(run_validate({}, SuccessThresholds{}), InvalidParameter);
}

TEST_CASE("run_validate: per-case failures are contained") {
    CaseSpec good;
    good.name = "good";
    good.grid_file = std::string(GRIDFREQ_DATA_DIR) + "/pseudo_ei.json";
    good.event = pseudo_ei_event();
    const FrequencyTrace tr = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});
    good.measured_file = (tmp_dir() / "contained.csv").string();
    write_trace_csv(tr, good.measured_file);

    CaseSpec bad = good;
    bad.name = "bad";
    bad.measured_file = (tmp_dir() / "does_not_exist.csv").string();

    const ValidationSummary s = run_validate({good, bad}, SuccessThresholds{});
    REQUIRE(s.cases.size() == 2);
    CHECK(s.cases[0].ok);
    CHECK_FALSE(s.cases[1].ok);
    CHECK_FALSE(s.cases[1].error.empty());
    CHECK_FALSE(s.overall_pass);

    std::ostringstream os;
    write_summary_csv(s, os);
    const std::string text = os.str();
    CHECK(text.rfind("case,nadir_hz,rocof_mhz_s,settling_time_s,settling_frequency_hz,pass\n",
                     0) == 0);
    CHECK(text.find("bad,,,,,error: ") != std::string::npos);
    CHECK(text.find("\naverage,") != std::string::npos);
    CHECK(text.find("\nsuccess_value,") != std::string::npos);
}

TEST_CASE("cases_from_json: paths resolve and knobs validate") {
    const json j = {
        {"thresholds", {{"nadir", 0.02}, {"rocof", 12.0}, {"settling_time", 4.0},
                        {"settling_frequency", 0.02}}},
        {"cases",
         {{{"name", "c1"},
           {"grid", "pseudo_ei.json"},
           {"trip_mw", 1016.0},
           {"area", pseudo_ei_event().area},
           {"t_event", 5.0},
           {"measured", "m1.csv"},
           {"rate_hz", 10.0}}}}};
    const auto cases = cases_from_json(j, GRIDFREQ_DATA_DIR);
    REQUIRE(cases.size() == 1);
    CHECK(cases[0].name == "c1");
    CHECK(cases[0].grid_file == std::string(GRIDFREQ_DATA_DIR) + "/pseudo_ei.json");
    CHECK(cases[0].measured_file == std::string(GRIDFREQ_DATA_DIR) + "/m1.csv");
    CHECK(cases[0].event.trip_mw == 1016.0);
    REQUIRE(cases[0].ingest.rate_hz.has_value());
    CHECK(*cases[0].ingest.rate_hz == 10.0);
    CHECK(thresholds_from_cases_json(j).rocof == 12.0);

    json badtrip = j;
    badtrip["cases"][0]["trip_mw"] = 0.0;
    CHECK_THROWS_AS(cases_from_json(badtrip, GRIDFREQ_DATA_DIR), InvalidParameter);

    json nocase = j;
    nocase.erase("cases");
    CHECK_THROWS_AS(cases_from_json(nocase, GRIDFREQ_DATA_DIR), InvalidParameter);
}

TEST_CASE("emit_plotdata: identical traces overlay exactly") {
    FrequencyTrace tr = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});
    const std::string out = (tmp_dir() / "plot_same.csv").string();
    emit_plotdata(&tr, tr, out);

    std::ifstream is(out);
    std::string header;
    std::getline(is, header);
    CHECK(header == "time_s,freq_measured,freq_simulated");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        CHECK(line.substr(c1 + 1, c2 - c1 - 1) == line.substr(c2 + 1));
    }
    CHECK(rows == tr.size());
}

TEST_CASE("emit_plotdata: simulated-only header") {
    const FrequencyTrace tr = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});
    const std::string out = (tmp_dir() / "plot_sim.csv").string();
    emit_plotdata(nullptr, tr, out);
    std::ifstream is(out);
    std::string header;
    std::getline(is, header);
    CHECK(header == "time_s,freq_simulated");
}

TEST_CASE("emit_plotdata: output lands on the coarser grid over the overlap") {
    FrequencyTrace meas = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});  // 10 Hz, 60 s
    SimConfig fine;
    fine.report_rate_hz = 200.0;
    fine.horizon_s = 30.0;
    FrequencyTrace sim = simulate(pseudo_ei(), pseudo_ei_event(), fine);
    const std::string out = (tmp_dir() / "plot_grid.csv").string();
    emit_plotdata(&meas, sim, out);

    std::ifstream is(out);
    std::string line;
    std::getline(is, line);  // header
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    // event-relative overlap is [-5, 25] at 0.1 s
    CHECK(rows == 301);
}

TEST_CASE("emit_plotdata: unannotated trace is an error") {
    FrequencyTrace tr = simulate(pseudo_ei(), pseudo_ei_event(), SimConfig{});
    FrequencyTrace bare = tr;
    bare.event_time_s.reset();
    const std::string out = (tmp_dir() / "plot_err.csv").string();
    CHECK_THROWS_AS(emit_plotdata(&bare, tr, out), MetricsError);
    CHECK_THROWS_AS(emit_plotdata(&tr, bare, out), MetricsError);
}
