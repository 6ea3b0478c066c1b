#include "gridfreq/fixtures.hpp"

namespace gridfreq {

GridModel pseudo_ei() {
    Wsieg1Params gov;
    gov.K = 20.0;
    gov.T1 = 0.2;
    gov.T2 = 0.0;
    gov.T3 = 0.4;
    gov.Uo = 0.05;
    gov.Uc = -0.05;
    gov.Pmax = 1.05;
    gov.Pmin = 0.3;
    gov.T4 = 0.3;
    gov.T5 = 8.0;
    gov.T6 = 0.4;
    gov.K1 = 0.3;
    gov.K3 = 0.4;
    gov.K5 = 0.3;
    gov.K7 = 0.0;
    gov.db = DeadbandSpec::from_hz(0.036, 60.0);

    GridModel g;
    g.name = "pseudo_ei";
    g.sbase = 300000.0;
    g.f0 = 60.0;
    g.aggregate = true;
    g.areas = {{"ei", 4.0, "ei"}};
    MachineSpec m;
    m.id = "ei_agg";
    m.mva = 300000.0;
    m.H = 6.0;
    m.area = "ei";
    m.governor = gov;
    m.pmech0 = 0.8;
    g.machines = {m};
    g.knobs.governor_ratio = 0.7;
    return g;
}

GridModel pseudo_ercot() {
    GridModel g;
    g.name = "pseudo_ercot";
    g.sbase = 45000.0;
    g.f0 = 60.0;
    g.areas = {{"north", 1.5, "north"}, {"south", 1.5, "south"}};
    g.ties = {{"north", "south", 3.0}};

    Wsieg1Params ws;
    ws.K = 6.0;
    ws.T1 = 0.15;
    ws.T3 = 0.3;
    ws.Uo = 0.1;
    ws.Uc = -0.1;
    ws.Pmax = 1.0;
    ws.Pmin = 0.0;
    ws.T4 = 0.25;
    ws.T5 = 7.0;
    ws.T6 = 0.3;
    ws.K1 = 0.3;
    ws.K3 = 0.4;
    ws.K5 = 0.3;
    ws.db = DeadbandSpec::from_hz(0.017, 60.0);

    Tgov1Params tg;
    tg.R = 0.15;
    tg.T1 = 0.4;
    tg.T2 = 1.2;
    tg.T3 = 4.5;
    tg.Vmax = 1.0;
    tg.Vmin = 0.0;

    GastParams ga;
    ga.R = 0.17;
    ga.T1 = 0.4;
    ga.T2 = 0.1;
    ga.T3 = 3.0;
    ga.AT = 0.95;
    ga.KT = 2.0;
    ga.Vmax = 1.0;
    ga.Vmin = 0.0;

    IeesgoParams sg;
    sg.K1 = 6.5;
    sg.K2 = 0.3;
    sg.K3 = 0.25;
    sg.T1 = 0.08;
    sg.T2 = 0.0;
    sg.T3 = 0.15;
    sg.T4 = 0.25;
    sg.T5 = 7.0;
    sg.T6 = 0.4;
    sg.Pmax = 1.0;
    sg.Pmin = 0.0;

    auto mach = [](std::string id, double mva, double h, std::string area, GovernorModel gov,
                   double pm0) {
        MachineSpec m;
        m.id = std::move(id);
        m.mva = mva;
        m.H = h;
        m.area = std::move(area);
        m.governor = std::move(gov);
        m.pmech0 = pm0;
        return m;
    };
    g.machines = {
        mach("steam_n1", 14000.0, 3.8, "north", ws, 0.75),
        mach("steam_n2", 8000.0, 3.2, "north", tg, 0.80),
        mach("gas_s1", 15000.0, 3.6, "south", ga, 0.70),
        mach("steam_s2", 8000.0, 2.8, "south", sg, 0.85),
    };
    return g;
}

EventSpec pseudo_ei_event() { return EventSpec{5.0, 1016.0, "ei"}; }

EventSpec pseudo_ercot_event() { return EventSpec{5.0, 390.0, "south"}; }

}  // namespace gridfreq
