#include "gridfreq/json_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "gridfreq/errors.hpp"

namespace gridfreq {
namespace {

double num(const json& j, const char* key, double fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return fallback;
    }
    if (!it->is_number()) {
        throw InvalidParameter(std::string("field '") + key + "' must be a number");
    }
    return it->get<double>();
}

double num_req(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) {
        throw InvalidParameter(std::string(ctx) + ": missing numeric field '" + key + "'");
    }
    return it->get<double>();
}

std::string str_req(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw InvalidParameter(std::string(ctx) + ": missing string field '" + key + "'");
    }
    return it->get<std::string>();
}

bool flag(const json& j, const char* key, bool fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return fallback;
    }
    if (!it->is_boolean()) {
        throw InvalidParameter(std::string("field '") + key + "' must be a boolean");
    }
    return it->get<bool>();
}

const char* shape_name(DeadbandShape s) {
    return s == DeadbandShape::Step ? "Step" : "ContinuousOffset";
}

DeadbandShape shape_from(const std::string& s) {
    if (s == "ContinuousOffset") {
        return DeadbandShape::ContinuousOffset;
    }
    if (s == "Step") {
        return DeadbandShape::Step;
    }
    throw InvalidParameter("deadband shape must be 'ContinuousOffset' or 'Step', got '" + s + "'");
}

json db_to_json(const DeadbandSpec& db, double f0) {
    return json{{"width", db.width_hz(f0)}, {"shape", shape_name(db.shape)}};
}

DeadbandSpec db_from_json(const json& j, double f0) {
    if (!j.is_object()) {
        throw InvalidParameter("deadband must be an object {width, shape}");
    }
    DeadbandShape shape = DeadbandShape::ContinuousOffset;
    if (j.contains("shape")) {
        shape = shape_from(str_req(j, "shape", "deadband"));
    }
    return DeadbandSpec::from_hz(num(j, "width", 0.0), f0, shape);
}

}  // namespace

json governor_to_json(const GovernorModel& m, double f0) {
    json j;
    j["kind"] = std::string(governor_kind_name(m));
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, Tgov1Params>) {
                j["R"] = p.R;
                j["T1"] = p.T1;
                j["T2"] = p.T2;
                j["T3"] = p.T3;
                j["Dt"] = p.Dt;
                j["Vmax"] = p.Vmax;
                j["Vmin"] = p.Vmin;
            } else if constexpr (std::is_same_v<P, GastParams>) {
                j["R"] = p.R;
                j["T1"] = p.T1;
                j["T2"] = p.T2;
                j["T3"] = p.T3;
                j["AT"] = p.AT;
                j["KT"] = p.KT;
                j["Vmax"] = p.Vmax;
                j["Vmin"] = p.Vmin;
                j["Dturb"] = p.Dturb;
            } else if constexpr (std::is_same_v<P, IeesgoParams>) {
                j["K1"] = p.K1;
                j["K2"] = p.K2;
                j["K3"] = p.K3;
                j["T1"] = p.T1;
                j["T2"] = p.T2;
                j["T3"] = p.T3;
                j["T4"] = p.T4;
                j["T5"] = p.T5;
                j["T6"] = p.T6;
                j["Pmax"] = p.Pmax;
                j["Pmin"] = p.Pmin;
            } else {
                // IEEEG1 / WSIEG1 share the field list
                j["K"] = p.K;
                j["T1"] = p.T1;
                j["T2"] = p.T2;
                j["T3"] = p.T3;
                j["Uo"] = p.Uo;
                j["Uc"] = p.Uc;
                j["Pmax"] = p.Pmax;
                j["Pmin"] = p.Pmin;
                j["T4"] = p.T4;
                j["T5"] = p.T5;
                j["T6"] = p.T6;
                j["T7"] = p.T7;
                j["K1"] = p.K1;
                j["K2"] = p.K2;
                j["K3"] = p.K3;
                j["K4"] = p.K4;
                j["K5"] = p.K5;
                j["K6"] = p.K6;
                j["K7"] = p.K7;
                j["K8"] = p.K8;
                if constexpr (std::is_same_v<P, Wsieg1Params>) {
                    j["db"] = db_to_json(p.db, f0);
                    if (!p.gv_curve.empty()) {
                        json pts = json::array();
                        for (const auto& pt : p.gv_curve) {
                            pts.push_back(json::array({pt[0], pt[1]}));
                        }
                        j["gv_curve"] = pts;
                    }
                }
            }
        },
        m);
    return j;
}

namespace {

template <typename P>
void read_ieeeg1_fields(const json& j, P& p) {
    p.K = num(j, "K", p.K);
    p.T1 = num(j, "T1", p.T1);
    p.T2 = num(j, "T2", p.T2);
    p.T3 = num(j, "T3", p.T3);
    p.Uo = num(j, "Uo", p.Uo);
    p.Uc = num(j, "Uc", p.Uc);
    p.Pmax = num(j, "Pmax", p.Pmax);
    p.Pmin = num(j, "Pmin", p.Pmin);
    p.T4 = num(j, "T4", p.T4);
    p.T5 = num(j, "T5", p.T5);
    p.T6 = num(j, "T6", p.T6);
    p.T7 = num(j, "T7", p.T7);
    p.K1 = num(j, "K1", p.K1);
    p.K2 = num(j, "K2", p.K2);
    p.K3 = num(j, "K3", p.K3);
    p.K4 = num(j, "K4", p.K4);
    p.K5 = num(j, "K5", p.K5);
    p.K6 = num(j, "K6", p.K6);
    p.K7 = num(j, "K7", p.K7);
    p.K8 = num(j, "K8", p.K8);
}

}  // namespace

GovernorModel governor_from_json(const json& j, double f0) {
    if (!j.is_object()) {
        throw InvalidParameter("governor must be a JSON object with a 'kind' field");
    }
    const std::string kind = str_req(j, "kind", "governor");
    GovernorModel m;
    if (kind == "TGOV1") {
        Tgov1Params p;
        p.R = num(j, "R", p.R);
        p.T1 = num(j, "T1", p.T1);
        p.T2 = num(j, "T2", p.T2);
        p.T3 = num(j, "T3", p.T3);
        p.Dt = num(j, "Dt", p.Dt);
        p.Vmax = num(j, "Vmax", p.Vmax);
        p.Vmin = num(j, "Vmin", p.Vmin);
        m = p;
    } else if (kind == "GAST") {
        GastParams p;
        p.R = num(j, "R", p.R);
        p.T1 = num(j, "T1", p.T1);
        p.T2 = num(j, "T2", p.T2);
        p.T3 = num(j, "T3", p.T3);
        p.AT = num(j, "AT", p.AT);
        p.KT = num(j, "KT", p.KT);
        p.Vmax = num(j, "Vmax", p.Vmax);
        p.Vmin = num(j, "Vmin", p.Vmin);
        p.Dturb = num(j, "Dturb", p.Dturb);
        m = p;
    } else if (kind == "IEESGO") {
        IeesgoParams p;
        p.K1 = num(j, "K1", p.K1);
        p.K2 = num(j, "K2", p.K2);
        p.K3 = num(j, "K3", p.K3);
        p.T1 = num(j, "T1", p.T1);
        p.T2 = num(j, "T2", p.T2);
        p.T3 = num(j, "T3", p.T3);
        p.T4 = num(j, "T4", p.T4);
        p.T5 = num(j, "T5", p.T5);
        p.T6 = num(j, "T6", p.T6);
        p.Pmax = num(j, "Pmax", p.Pmax);
        p.Pmin = num(j, "Pmin", p.Pmin);
        m = p;
    } else if (kind == "IEEEG1") {
        Ieeeg1Params p;
        read_ieeeg1_fields(j, p);
        m = p;
    } else if (kind == "WSIEG1") {
        Wsieg1Params p;
        read_ieeeg1_fields(j, p);
        if (j.contains("db")) {
            p.db = db_from_json(j.at("db"), f0);
        }
        if (j.contains("gv_curve")) {
            const auto& pts = j.at("gv_curve");
            if (!pts.is_array()) {
                throw InvalidParameter("gv_curve must be an array of [gv, pgv] pairs");
            }
            for (const auto& pt : pts) {
                if (!pt.is_array() || pt.size() != 2) {
                    throw InvalidParameter("gv_curve entries must be [gv, pgv] pairs");
                }
                p.gv_curve.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
            }
        }
        m = p;
    } else {
        throw InvalidParameter("unknown governor kind '" + kind + "'");
    }
    governor_validate(m);
    return m;
}

json grid_to_json(const GridModel& g) {
    json j;
    j["name"] = g.name;
    j["sbase_mva"] = g.sbase;
    j["f0_hz"] = g.f0;
    j["aggregate"] = g.aggregate;
    json areas = json::array();
    for (const auto& a : g.areas) {
        json ja{{"id", a.id}, {"D", a.D}};
        if (!a.label.empty() && a.label != a.id) {
            ja["label"] = a.label;
        }
        areas.push_back(ja);
    }
    j["areas"] = areas;
    json machines = json::array();
    for (const auto& mach : g.machines) {
        json jm{{"id", mach.id},   {"mva", mach.mva},
                {"H", mach.H},     {"area", mach.area},
                {"pmech0", mach.pmech0}};
        if (mach.governor) {
            jm["governor"] = governor_to_json(*mach.governor, g.f0);
            jm["governor_enabled"] = mach.governor_enabled;
        }
        machines.push_back(jm);
    }
    j["machines"] = machines;
    if (!g.ties.empty()) {
        json ties = json::array();
        for (const auto& t : g.ties) {
            ties.push_back(json{{"area_a", t.area_a}, {"area_b", t.area_b}, {"coeff", t.coeff}});
        }
        j["ties"] = ties;
    }
    json knobs{{"governor_ratio", g.knobs.governor_ratio},
               {"inertia_scale", g.knobs.inertia_scale}};
    if (g.knobs.deadband_hz) {
        knobs["deadband_hz"] = *g.knobs.deadband_hz;
    }
    j["knobs"] = knobs;
    return j;
}

GridModel grid_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidParameter("grid must be a JSON object");
    }
    GridModel g;
    if (j.contains("name")) {
        g.name = str_req(j, "name", "grid");
    }
    g.sbase = num(j, "sbase_mva", g.sbase);
    g.f0 = num(j, "f0_hz", g.f0);
    g.aggregate = flag(j, "aggregate", false);
    auto areas = j.find("areas");
    if (areas == j.end() || !areas->is_array()) {
        throw InvalidParameter("grid: missing 'areas' array");
    }
    for (const auto& ja : *areas) {
        AreaSpec a;
        a.id = str_req(ja, "id", "area");
        a.D = num(ja, "D", 0.0);
        a.label = ja.contains("label") ? str_req(ja, "label", "area") : a.id;
        g.areas.push_back(std::move(a));
    }
    auto machines = j.find("machines");
    if (machines == j.end() || !machines->is_array()) {
        throw InvalidParameter("grid: missing 'machines' array");
    }
    for (const auto& jm : *machines) {
        MachineSpec mach;
        mach.id = str_req(jm, "id", "machine");
        mach.mva = num_req(jm, "mva", "machine");
        mach.H = num_req(jm, "H", "machine");
        mach.area = str_req(jm, "area", "machine");
        mach.pmech0 = num_req(jm, "pmech0", "machine");
        if (jm.contains("governor") && !jm.at("governor").is_null()) {
            mach.governor = governor_from_json(jm.at("governor"), g.f0);
        }
        mach.governor_enabled = flag(jm, "governor_enabled", true);
        g.machines.push_back(std::move(mach));
    }
    if (j.contains("ties")) {
        for (const auto& jt : j.at("ties")) {
            TieSpec t;
            t.area_a = str_req(jt, "area_a", "tie");
            t.area_b = str_req(jt, "area_b", "tie");
            t.coeff = num_req(jt, "coeff", "tie");
            g.ties.push_back(std::move(t));
        }
    }
    if (j.contains("knobs")) {
        const auto& jk = j.at("knobs");
        g.knobs.governor_ratio = num(jk, "governor_ratio", 1.0);
        g.knobs.inertia_scale = num(jk, "inertia_scale", 1.0);
        if (jk.contains("deadband_hz") && !jk.at("deadband_hz").is_null()) {
            g.knobs.deadband_hz = num_req(jk, "deadband_hz", "knobs");
        }
    }
    g.validate();
    return g;
}

json event_to_json(const EventSpec& e) {
    return json{{"t_event", e.t_event}, {"trip_mw", e.trip_mw}, {"area", e.area}};
}

EventSpec event_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidParameter("event must be a JSON object");
    }
    EventSpec e;
    e.t_event = num(j, "t_event", e.t_event);
    e.trip_mw = num_req(j, "trip_mw", "event");
    e.area = str_req(j, "area", "event");
    e.validate();
    return e;
}

json metrics_config_to_json(const MetricsConfig& c) {
    json j{{"pre_window_s", c.pre_window_s},
           {"nadir_window_s", c.nadir_window_s},
           {"settle_eps_hz", c.settle_eps_hz},
           {"settle_hold_s", c.settle_hold_s},
           {"tail_s", c.tail_s},
           {"detect_threshold_mhz_s", c.detect_threshold_mhz_s},
           {"detect_window_s", c.detect_window_s}};
    if (c.tail_after_event) {
        j["tail_after_event"] = json::array({c.tail_after_event->first, c.tail_after_event->second});
    }
    return j;
}

MetricsConfig metrics_config_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidParameter("metrics config must be a JSON object");
    }
    MetricsConfig c;
    c.pre_window_s = num(j, "pre_window_s", c.pre_window_s);
    c.nadir_window_s = num(j, "nadir_window_s", c.nadir_window_s);
    c.settle_eps_hz = num(j, "settle_eps_hz", c.settle_eps_hz);
    c.settle_hold_s = num(j, "settle_hold_s", c.settle_hold_s);
    c.tail_s = num(j, "tail_s", c.tail_s);
    c.detect_threshold_mhz_s = num(j, "detect_threshold_mhz_s", c.detect_threshold_mhz_s);
    c.detect_window_s = num(j, "detect_window_s", c.detect_window_s);
    if (j.contains("tail_after_event") && !j.at("tail_after_event").is_null()) {
        const auto& w = j.at("tail_after_event");
        if (!w.is_array() || w.size() != 2) {
            throw InvalidParameter("tail_after_event must be [start_s, end_s]");
        }
        c.tail_after_event = std::make_pair(w.at(0).get<double>(), w.at(1).get<double>());
    }
    c.validate();
    return c;
}

json response_metrics_to_json(const ResponseMetrics& m) {
    return json{{"nadir", m.nadir},
                {"rocof", m.rocof},
                {"settling_time", m.settling_time},
                {"settling_frequency", m.settling_frequency},
                {"point_a", m.point_a},
                {"t_nadir", m.t_nadir}};
}

ResponseMetrics response_metrics_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidParameter("metrics must be a JSON object");
    }
    ResponseMetrics m;
    m.nadir = num_req(j, "nadir", "metrics");
    m.rocof = num_req(j, "rocof", "metrics");
    m.settling_time = num_req(j, "settling_time", "metrics");
    m.settling_frequency = num_req(j, "settling_frequency", "metrics");
    m.point_a = num(j, "point_a", 0.0);
    m.t_nadir = num(j, "t_nadir", 0.0);
    return m;
}

json thresholds_to_json(const SuccessThresholds& t) {
    return json{{"nadir", t.nadir},
                {"rocof", t.rocof},
                {"settling_time", t.settling_time},
                {"settling_frequency", t.settling_frequency}};
}

SuccessThresholds thresholds_from_json(const json& j) {
    if (!j.is_object()) {
        throw InvalidParameter("thresholds must be a JSON object");
    }
    SuccessThresholds t;
    t.nadir = num(j, "nadir", t.nadir);
    t.rocof = num(j, "rocof", t.rocof);
    t.settling_time = num(j, "settling_time", t.settling_time);
    t.settling_frequency = num(j, "settling_frequency", t.settling_frequency);
    t.validate();
    return t;
}

json report_to_json(const MismatchReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(json{{"metric", row.metric},
                            {"measured", row.measured},
                            {"simulated", row.simulated},
                            {"mismatch", row.mismatch},
                            {"success_value", row.success_value},
                            {"pass", row.pass}});
    }
    return json{{"rows", rows}, {"overall_pass", r.overall_pass}};
}

json conversion_report_to_json(const ConversionReport& r, double f0) {
    return json{{"source_kind", r.source_kind},
                {"method", r.method == ConvertMethod::Analytic ? "analytic" : "fit"},
                {"result", governor_to_json(GovernorModel{r.result}, f0)},
                {"rms", r.rms},
                {"max_abs", r.max_abs},
                {"verified", r.verified},
                {"dt_to_damping", r.dt_to_damping}};
}

json calibration_result_to_json(const CalibrationResult& r) {
    return json{{"best",
                 json{{"governor_ratio", r.best.governor_ratio},
                      {"deadband_hz", r.best.deadband_hz},
                      {"inertia_scale", r.best.inertia_scale}}},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"history", r.history},
                {"report", report_to_json(r.report)}};
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

}  // namespace gridfreq
