#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "macrsv/analysis.hpp"
#include "macrsv/engine.hpp"
#include "macrsv/scenario.hpp"
#include "macrsv/validation.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw macrsv::ConfigError("cannot write " + path);
    f << text;
}

struct SimulateArgs {
    std::string scenario;
    std::string out;
    std::string trace_path;
    std::vector<std::uint64_t> seeds;
    std::vector<double> sweep;
    std::string grant_policy;
    long frames = 0;
    std::string protocol;
    bool paranoid_ncts = false;
    bool rb_ablation = false;
};

void apply_overrides(macrsv::Scenario& sc, const SimulateArgs& a) {
    if (!a.grant_policy.empty()) {
        if (a.grant_policy == "partial")
            sc.sim.options.grant_policy = macrsv::GrantPolicy::Partial;
        else if (a.grant_policy == "all_or_nothing")
            sc.sim.options.grant_policy = macrsv::GrantPolicy::AllOrNothing;
        else
            throw macrsv::ConfigError("--grant-policy must be partial or all_or_nothing");
    }
    if (a.paranoid_ncts) sc.sim.options.paranoid_ncts = true;
    if (a.rb_ablation) sc.sim.options.rb_ablation = true;
    if (a.frames > 0) sc.sim.frames = a.frames;
    if (!a.protocol.empty()) sc.sim.protocol = a.protocol;
}

int cmd_simulate(const SimulateArgs& a) {
    macrsv::Scenario base = macrsv::load_scenario(a.scenario);
    apply_overrides(base, a);
    std::vector<std::uint64_t> seeds = a.seeds;
    if (seeds.empty()) seeds.push_back(base.sim.seed);
    std::vector<double> loads = a.sweep;
    if (loads.empty()) loads.push_back(base.sim.traffic.offered_load_bps);
    if (!a.trace_path.empty() && (seeds.size() != 1 || loads.size() != 1))
        throw macrsv::ConfigError("--trace needs exactly one seed and one load");

    std::string csv = macrsv::csv_header() + "\n";
    for (double load : loads)
        for (std::uint64_t seed : seeds) {
            macrsv::Scenario sc = base;
            sc.sim.seed = seed;
            if (sc.sim.traffic.kind != macrsv::TrafficKind::Script)
                sc.sim.traffic.offered_load_bps = load;
            macrsv::TraceSink trace(!a.trace_path.empty());
            macrsv::Metrics m = macrsv::run_simulation(sc.sim, macrsv::build_topology(sc.topo),
                                                       trace.enabled() ? &trace : nullptr);
            csv += macrsv::csv_row(m) + "\n";
            if (trace.enabled()) write_text(a.trace_path, trace.to_text());
        }
    write_text(a.out, csv);
    return 0;
}

int cmd_analyze(const std::string& scenario, const std::string& out, int n_max_override,
                double bound_override) {
    macrsv::Scenario sc = macrsv::load_scenario(scenario);
    if (!sc.has_analysis)
        throw macrsv::ConfigError("scenario has no [analysis] section: " + scenario);
    if (sc.analysis_loads.empty()) throw macrsv::ConfigError("analysis needs loads");

    std::string csv =
        "q,p,triples,data_slots,load,n_max,iterations,residual,truncation_mass,"
        "worst_row_tail,utilization\n";
    char row[512];
    for (double load : sc.analysis_loads) {
        macrsv::AnalysisParams par = sc.analysis;
        par.load = load;
        if (n_max_override > 0) par.n_max = n_max_override;
        if (bound_override > 0.0) par.truncation_bound = bound_override;
        macrsv::MarkovModel model = macrsv::build_model(par);
        macrsv::Utilization u = macrsv::utilization(model);
        std::snprintf(row, sizeof(row), "%.17g,%.17g,%d,%d,%.17g,%d,%ld,%.17g,%.17g,%.17g,%.17g\n",
                      par.q, par.p, par.triples_K, par.data_slots_N, load, model.params.n_max,
                      model.iterations, model.residual, model.truncation_mass,
                      model.worst_row_tail, u.expected);
        csv += row;
    }
    write_text(out, csv);
    return 0;
}

int cmd_validate(const std::string& scenario_dir, const std::string& out) {
    auto results = macrsv::run_acceptance(scenario_dir);
    std::string report;
    bool all_ok = true;
    for (const auto& r : results) {
        nlohmann::json j;
        j["criterion"] = r.criterion;
        j["name"] = r.name;
        j["status"] = r.pass ? (r.finding ? "finding" : "pass") : "fail";
        j["detail"] = r.detail;
        report += j.dump() + "\n";
        all_ok = all_ok && r.pass;
    }
    write_text(out, report);
    return all_ok ? 0 : 1;
}

int cmd_compare(const std::string& scenario, const std::string& out,
                const std::vector<double>& loads, const std::vector<std::uint64_t>& seeds) {
    macrsv::Scenario base = macrsv::load_scenario(scenario);
    std::vector<double> ls = loads;
    if (ls.empty()) ls.push_back(base.sim.traffic.offered_load_bps);
    std::vector<std::uint64_t> ss = seeds;
    if (ss.empty()) ss.push_back(base.sim.seed);

    std::string csv = macrsv::csv_header() + "\n";
    for (const std::string& protocol : {std::string("rsv"), std::string("cata")})
        for (double load : ls)
            for (std::uint64_t seed : ss) {
                macrsv::Scenario sc = base;
                sc.sim.protocol = protocol;
                sc.sim.seed = seed;
                sc.sim.traffic.offered_load_bps = load;
                macrsv::Metrics m =
                    macrsv::run_simulation(sc.sim, macrsv::build_topology(sc.topo));
                csv += macrsv::csv_row(m) + "\n";
            }
    write_text(out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slotted reservation-MAC simulator and analytical model"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "run a scenario and emit metrics CSV");
    sim->add_option("--scenario", sim_args.scenario, "scenario file")->required();
    sim->add_option("--out", sim_args.out, "output CSV path (default stdout)");
    sim->add_option("--trace", sim_args.trace_path, "write the event trace here");
    sim->add_option("--seeds", sim_args.seeds, "seeds to run (default: scenario seed)");
    sim->add_option("--sweep", sim_args.sweep, "offered loads in bps to sweep");
    sim->add_option("--grant-policy", sim_args.grant_policy, "partial | all_or_nothing");
    sim->add_option("--frames", sim_args.frames, "override frame count");
    sim->add_option("--protocol", sim_args.protocol, "override protocol (rsv | cata)");
    sim->add_flag("--paranoid-ncts", sim_args.paranoid_ncts,
                  "jam on any request collision, reservations or not");
    sim->add_flag("--rb-ablation", sim_args.rb_ablation,
                  "disable the receive beacon check (transmitters always send)");

    std::string an_scenario, an_out;
    int an_nmax = 0;
    double an_bound = 0.0;
    auto* an = app.add_subcommand("analyze", "evaluate the analytical model over a load grid");
    an->add_option("--scenario", an_scenario, "scenario file with an [analysis] section")
        ->required();
    an->add_option("--out", an_out, "output CSV path (default stdout)");
    an->add_option("--n-max", an_nmax, "fix the truncation level instead of auto-raising");
    an->add_option("--truncation-bound", an_bound,
                   "override the stationary-flux bound (inf to report only)");

    std::string va_dir = "scenarios", va_out;
    auto* va = app.add_subcommand("validate", "run the acceptance checks, JSON line each");
    va->add_option("--scenario-dir", va_dir, "directory with the bundled scenarios");
    va->add_option("--out", va_out, "output path (default stdout)");

    std::string cp_scenario, cp_out;
    std::vector<double> cp_loads;
    std::vector<std::uint64_t> cp_seeds;
    auto* cp = app.add_subcommand("compare",
                                  "run both protocols over a load sweep on one scenario");
    cp->add_option("--scenario", cp_scenario, "scenario file")->required();
    cp->add_option("--out", cp_out, "output CSV path (default stdout)");
    cp->add_option("--loads", cp_loads, "offered loads in bps");
    cp->add_option("--seeds", cp_seeds, "seeds to run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (an->parsed()) return cmd_analyze(an_scenario, an_out, an_nmax, an_bound);
        if (va->parsed()) return cmd_validate(va_dir, va_out);
        if (cp->parsed()) return cmd_compare(cp_scenario, cp_out, cp_loads, cp_seeds);
    } catch (const macrsv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const macrsv::OversizePacket& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
