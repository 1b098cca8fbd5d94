#pragma once

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "macrsv/analysis.hpp"
#include "macrsv/engine.hpp"
#include "macrsv/infinite_population.hpp"
#include "macrsv/oracles.hpp"
#include "macrsv/scenario.hpp"

namespace macrsv {

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool pass = false;     // criterion satisfied
    bool finding = false;  // satisfied via the documented-finding path
    std::string detail;
};

// Pinned acceptance tolerances.
namespace tolerances {
constexpr double kPmfMatch = 1e-12;        // closed form vs independent oracle
constexpr double kFlattenedMatch = 1e-13;  // grant recursion vs plain binomial
constexpr double kRowSum = 1e-12;          // transition rows and pi normalization
constexpr double kTruncationMass = 1e-6;   // stationary flux past n_max
constexpr double kUtilGap = 0.05;          // relative, model vs Monte Carlo
constexpr double kHistZ = 3.0;             // per-state batch-means z bound
constexpr long kHistMinCount = 10;         // counts needed for a state to be checked
constexpr int kHistBatches = 100;
constexpr double kSatLow = 17.0e6;         // saturation plateau band, bps
constexpr double kSatHigh = 19.0e6;
constexpr double kPlateauFlat = 0.15;      // relative spread across plateau loads
constexpr double kBaselineRatio = 1.5;     // reservation over baseline at top load
constexpr double kOrderLow = 10.0e6 / 3.0; // order-of-magnitude band for baseline
constexpr double kOrderHigh = 30.0e6;
constexpr int kDriftCap = 128;             // n_max cap when a refusal is the expected outcome
}  // namespace tolerances

namespace acceptance {

inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

inline Topology ring_clique(int n) {
    constexpr double tau = 6.283185307179586;
    std::vector<Vec2> pos;
    for (int i = 0; i < n; ++i) {
        double a = tau * i / n;
        pos.push_back({50.0 * std::cos(a), 50.0 * std::sin(a)});
    }
    return Topology(std::move(pos), 1000.0);
}

inline Topology line(int n) {
    std::vector<Vec2> pos;
    for (int i = 0; i < n; ++i) pos.push_back({200.0 * i, 0.0});
    return Topology(std::move(pos), 250.0);
}

// Criterion 1: collision-free data delivery on static topologies. The engine
// additionally throws on any data collision at an intended receiver while the
// receive beacon is active, so a pass means the invariant held in every slot
// of every run.
inline CheckResult check_collision_freedom() {
    CheckResult r{1, "collision_freedom", false, false, ""};
    const int bytes_cycle[3] = {1044, 3132, 7308};
    struct Run {
        Topology topo;
        std::uint64_t seed;
        int bytes;
    };
    std::vector<Run> runs;
    for (int n = 2; n <= 10; ++n)
        for (std::uint64_t s = 1; s <= 3; ++s)
            runs.push_back({ring_clique(n), s, bytes_cycle[(n + s) % 3]});
    for (int n = 4; n <= 8; ++n)
        for (std::uint64_t s = 1; s <= 3; ++s)
            runs.push_back({line(n), s, bytes_cycle[(n + s) % 3]});
    for (std::uint64_t s = 1; s <= 10; ++s)
        runs.push_back({build_grid_mesh(5, 5, 200.0, 250.0), s, bytes_cycle[s % 3]});
    for (std::uint64_t s = 1; s <= 48; ++s)
        runs.push_back({build_random(12, 500.0, 500.0, 180.0, s), s, bytes_cycle[s % 3]});

    long collisions = 0, deliveries = 0, deferrals = 0;
    for (const auto& run : runs) {
        SimConfig cfg;
        cfg.scenario_name = "collision_freedom";
        cfg.frames = 40;
        cfg.seed = run.seed;
        cfg.traffic.kind = TrafficKind::Random;
        cfg.traffic.packet_bytes = run.bytes;
        cfg.traffic.offered_load_bps = 6.0e6;
        Metrics m = run_simulation(cfg, run.topo);
        collisions += m.data_collisions;
        deliveries += m.delivered_packets;
        deferrals += m.deadlock_deferrals;
    }
    r.pass = collisions == 0 && deliveries > 0;
    r.detail = fmt("%zu static runs, %ld data collisions, %ld deliveries, %ld deferrals",
                   runs.size(), collisions, deliveries, deferrals);
    return r;
}

// Criterion 2: the crossed-reservation deadlock is broken by the receive
// beacon (deferral, no collision, the crossing flow still delivers), and
// collides when the beacon is disabled.
inline CheckResult check_deadlock_scenario(const std::string& scenario_dir) {
    CheckResult r{2, "deadlock_release", false, false, ""};
    Scenario sc = load_scenario(scenario_dir + "/crossed_deadlock.scn");
    Metrics normal = run_simulation(sc.sim, build_topology(sc.topo));
    Scenario ab = sc;
    ab.sim.options.rb_ablation = true;
    Metrics ablated = run_simulation(ab.sim, build_topology(ab.topo));

    long crossing = normal.delivered_by_flow.count({3, 2})
                        ? normal.delivered_by_flow.at({3, 2})
                        : 0;
    long deferred_flow = normal.delivered_by_flow.count({1, 0})
                             ? normal.delivered_by_flow.at({1, 0})
                             : 0;
    bool beacon_ok = normal.deadlock_deferrals >= 1 && normal.data_collisions == 0 &&
                     crossing >= 1 && deferred_flow >= 1;
    bool ablation_ok = ablated.data_collisions >= 1;
    r.pass = beacon_ok && ablation_ok;
    r.detail = fmt("beacon on: %ld deferrals, %ld collisions, crossing flow %ld pkts, "
                   "deferred flow %ld pkts; beacon off: %ld collisions",
                   normal.deadlock_deferrals, normal.data_collisions, crossing, deferred_flow,
                   ablated.data_collisions);
    return r;
}

// Criterion 3: closed-form reserved-slot distribution vs m-fold convolution.
inline CheckResult check_reserved_pmf_oracle() {
    CheckResult r{3, "reserved_slots_pmf", false, false, ""};
    double worst = 0.0;
    int cases = 0;
    for (int N : {5, 10, 25, 30})
        for (double q : {0.3, 0.6, 0.9})
            for (int m = 1; m <= std::min(10, N); ++m) {
                auto closed = reserved_slots_pmf(m, q, N);
                auto conv = reference::reserved_slots_pmf_conv(m, q, N);
                for (int v = 0; v <= N; ++v)
                    worst = std::max(worst, std::abs(closed[v] - conv[v]));
                ++cases;
            }
    r.pass = worst <= tolerances::kPmfMatch;
    r.detail = fmt("%d (N,q,m) cases, max |closed - convolution| = %.3g (bound %.3g)", cases,
                   worst, tolerances::kPmfMatch);
    return r;
}

// Criterion 4: frame grant distribution vs exhaustive pattern enumeration
// built on the independently coded double-sum grant probability, plus the
// constant-rate reduction to a plain binomial.
inline CheckResult check_successes_pmf_oracle() {
    CheckResult r{4, "grants_pmf", false, false, ""};
    double worst = 0.0, worst_flat = 0.0;
    int cases = 0;
    for (int K : {4, 6})
        for (int N : {6, 8})
            for (long n_c : {2L, 5L, 8L})
                for (double q : {0.4, 0.8})
                    for (double p : {0.1, 0.3}) {
                        AnalysisParams par;
                        par.q = q;
                        par.p = p;
                        par.triples_K = K;
                        par.data_slots_N = N;
                        auto dp = successes_pmf(n_c, par);
                        auto ref = reference::successes_pmf_enum(
                            n_c, par, [&](int j) {
                                return reference::success_prob_double_sum(j, n_c, par);
                            });
                        for (std::size_t j = 0; j < dp.size(); ++j)
                            worst = std::max(worst, std::abs(dp[j] - ref[j]));
                        ++cases;
                    }
    // With the per-state grant probability pinned to a constant, the pattern
    // enumeration must reduce to Binomial(K, c) whenever saturation cannot
    // bite (jmax >= K).
    for (double c : {0.2, 0.5, 0.8}) {
        AnalysisParams par;
        par.triples_K = 5;
        par.data_slots_N = 10;
        auto ref = reference::successes_pmf_enum(9, par, [&](int) { return c; });
        auto binom = reference::binomial_pmf(par.triples_K, c);
        for (int j = 0; j <= par.triples_K; ++j)
            worst_flat = std::max(worst_flat, std::abs(ref[j] - binom[j]));
    }
    r.pass = worst <= tolerances::kPmfMatch && worst_flat <= tolerances::kFlattenedMatch;
    r.detail = fmt("%d grids, max |recursion - enumeration| = %.3g (bound %.3g); "
                   "flattened-vs-binomial max diff = %.3g (bound %.3g)",
                   cases, worst, tolerances::kPmfMatch, worst_flat,
                   tolerances::kFlattenedMatch);
    return r;
}

struct HygieneGrid {
    AnalysisParams base;
    std::vector<double> loads;
};

inline AnalysisParams table_grid_params() {
    AnalysisParams par;
    par.q = 0.5;
    par.p = 0.175;
    par.triples_K = 14;
    par.data_slots_N = 25;
    return par;
}

// Criterion 5: chain hygiene on the shipped analysis grids. On loads the
// fixed point describes, the automatic n_max must bring the truncation flux
// within bound; on loads where the backlog drifts off to saturation no
// truncation is defensible, so the builder must refuse (truncation mass blows
// the bound at every n_max up to the cap, or the iteration never settles)
// rather than return a fudged distribution.
inline CheckResult check_chain_hygiene(const std::string& scenario_dir) {
    CheckResult r{5, "chain_hygiene", false, false, ""};
    Scenario smoke = load_scenario(scenario_dir + "/analysis_smoke.scn");
    std::vector<HygieneGrid> stable;
    stable.push_back({smoke.analysis, smoke.analysis_loads});
    stable.push_back({table_grid_params(), {0.25, 0.5, 1.0}});
    std::vector<HygieneGrid> drifting;
    drifting.push_back({smoke.analysis, {1.0, 2.0}});
    drifting.push_back({table_grid_params(), {2.0}});

    double worst_row = 0.0, worst_pi = 0.0, worst_mass = 0.0, worst_residual = 0.0;
    long worst_iters = 0;
    int models = 0;
    for (const auto& grid : stable)
        for (double load : grid.loads) {
            AnalysisParams par = grid.base;
            par.load = load;
            par.n_max = 0;
            MarkovModel model = build_model(par);
            for (const auto& row : model.tm.rows) {
                double s = 0.0;
                for (double v : row) s += v;
                worst_row = std::max(worst_row, std::abs(s - 1.0));
            }
            double psum = 0.0, pmin = 0.0;
            for (double v : model.pi) {
                psum += v;
                pmin = std::min(pmin, v);
            }
            worst_pi = std::max(worst_pi, std::abs(psum - 1.0));
            worst_pi = std::max(worst_pi, -pmin);
            worst_residual = std::max(worst_residual, model.residual);
            worst_iters = std::max(worst_iters, model.iterations);
            worst_mass = std::max(worst_mass, model.truncation_mass);
            ++models;
        }

    int refusals = 0, drift_loads = 0;
    std::string drift_detail;
    for (const auto& grid : drifting)
        for (double load : grid.loads) {
            AnalysisParams par = grid.base;
            par.load = load;
            par.n_max = 0;
            par.n_max_cap = tolerances::kDriftCap;
            ++drift_loads;
            try {
                MarkovModel model = build_model(par);
                drift_detail += fmt("[K=%d load %.1f: converged, mass %.3g -- unexpected] ",
                                    par.triples_K, load, model.truncation_mass);
            } catch (const TruncationError& e) {
                ++refusals;
                drift_detail += fmt("[K=%d load %.1f: refused, mass %.3g at n_max %d] ",
                                    par.triples_K, load, e.truncation_mass, e.n_max);
            } catch (const NoConvergence& e) {
                ++refusals;
                drift_detail += fmt("[K=%d load %.1f: refused, residual %.3g after %ld "
                                    "iterations] ",
                                    par.triples_K, load, e.residual, e.iterations);
            }
        }

    r.pass = worst_row <= tolerances::kRowSum && worst_pi <= tolerances::kRowSum &&
             worst_mass <= tolerances::kTruncationMass && refusals == drift_loads;
    r.detail = fmt("%d stable models: max |row sum - 1| = %.3g, max pi defect = %.3g, "
                   "truncation mass = %.3g (bound %.3g), max residual = %.3g, max "
                   "iterations = %ld; %d/%d drifting loads refused %s",
                   models, worst_row, worst_pi, worst_mass, tolerances::kTruncationMass,
                   worst_residual, worst_iters, refusals, drift_loads, drift_detail.c_str());
    return r;
}

struct CrossValidationLeg {
    double load = 0.0;
    double util_model = 0.0;
    double util_mc = 0.0;
    double gap = 0.0;          // relative
    double max_z = 0.0;
    int checked_bins = 0;
    bool histogram_ok = false;
};

inline CrossValidationLeg cross_validate_load(AnalysisParams par, double load,
                                              std::uint64_t seed) {
    CrossValidationLeg leg;
    leg.load = load;
    par.load = load;
    MarkovModel model = build_model(par);
    leg.util_model = utilization(model).expected;

    const long frames = 100000;
    auto mc = run_infinite_population(
        {par.q, par.p, par.triples_K, par.data_slots_N, load}, frames, seed);
    const long warm = frames / 10;
    const long measured = frames - warm;
    double mean_reserved = 0.0;
    for (long f = warm; f < frames; ++f) mean_reserved += mc[f].reserved;
    mean_reserved /= static_cast<double>(measured);
    leg.util_mc = mean_reserved / par.data_slots_N;
    leg.gap = std::abs(leg.util_mc - leg.util_model) / std::max(leg.util_model, 1e-300);

    // Batch-means comparison of the visited-backlog histogram against pi.
    const int B = tolerances::kHistBatches;
    const long batch = measured / B;
    const int S = model.params.n_max;
    std::vector<std::vector<double>> frac(B, std::vector<double>(S + 1, 0.0));
    std::vector<long> total_count(S + 1, 0);
    for (int b = 0; b < B; ++b) {
        for (long f = warm + b * batch; f < warm + (b + 1) * batch; ++f) {
            long v = std::min<long>(mc[f].contenders, S);
            frac[b][v] += 1.0;
            total_count[v] += 1;
        }
        for (int v = 0; v <= S; ++v) frac[b][v] /= static_cast<double>(batch);
    }
    leg.histogram_ok = true;
    for (int v = 0; v <= S; ++v) {
        double expected_count = model.pi[v] * static_cast<double>(B * batch);
        if (expected_count < tolerances::kHistMinCount ||
            total_count[v] < tolerances::kHistMinCount)
            continue;
        double mean = 0.0;
        for (int b = 0; b < B; ++b) mean += frac[b][v];
        mean /= B;
        double var = 0.0;
        for (int b = 0; b < B; ++b) var += (frac[b][v] - mean) * (frac[b][v] - mean);
        var /= (B - 1);
        double se = std::sqrt(var / B);
        double z = se > 0.0 ? std::abs(mean - model.pi[v]) / se
                            : (std::abs(mean - model.pi[v]) < 1e-12 ? 0.0 : 1e9);
        leg.max_z = std::max(leg.max_z, z);
        ++leg.checked_bins;
        if (z > tolerances::kHistZ) leg.histogram_ok = false;
    }
    return leg;
}

struct DivergenceLeg {
    double load = 0.0;
    bool refused = false;       // the model declined to produce a distribution
    std::string refusal;        // what the builder reported
    double util_mc = 0.0;       // short-horizon window, warmup dropped
    long escape_frame = -1;     // first frame the backlog left the working regime
    long peak_backlog = 0;
};

inline DivergenceLeg divergence_leg(AnalysisParams par, double load, std::uint64_t seed) {
    DivergenceLeg leg;
    leg.load = load;
    par.load = load;
    par.n_max = 0;
    par.n_max_cap = tolerances::kDriftCap;
    try {
        MarkovModel model = build_model(par);
        leg.refusal = fmt("converged with mass %.3g", model.truncation_mass);
    } catch (const TruncationError& e) {
        leg.refused = true;
        leg.refusal = fmt("truncation mass %.3g at n_max %d", e.truncation_mass, e.n_max);
    } catch (const NoConvergence& e) {
        leg.refused = true;
        leg.refusal = fmt("residual %.3g after %ld iterations", e.residual, e.iterations);
    }
    const long frames = 3000, warm = 300;
    auto mc = run_infinite_population(
        {par.q, par.p, par.triples_K, par.data_slots_N, load}, frames, seed);
    double sum = 0.0;
    for (long f = 0; f < frames; ++f) {
        leg.peak_backlog = std::max(leg.peak_backlog, mc[f].contenders);
        if (leg.escape_frame < 0 && mc[f].contenders > 3 * par.triples_K)
            leg.escape_frame = f;
        if (f >= warm) sum += mc[f].reserved;
    }
    leg.util_mc = sum / static_cast<double>(frames - warm) / par.data_slots_N;
    return leg;
}

// Criterion 6: analytical utilization and stationary distribution vs the
// backlog Monte Carlo, on the grid of the bundled analysis scenario. The
// low-load legs are held to the strict bars. At overloads the chain has no
// working fixed point, so the model must refuse; whether the Monte Carlo
// backlog has also collapsed within the measured horizon ("both collapse")
// or is still riding a metastable low-backlog regime is reported, the latter
// as a model-fidelity finding (contingent on criteria 3-5).
inline CheckResult check_cross_validation(const std::string& scenario_dir, bool c345_ok) {
    CheckResult r{6, "model_vs_monte_carlo", false, false, ""};
    AnalysisParams par = load_scenario(scenario_dir + "/analysis_smoke.scn").analysis;

    std::vector<CrossValidationLeg> strict;
    strict.push_back(cross_validate_load(par, 0.5, 1));
    strict.push_back(cross_validate_load(par, 0.5, 2));
    std::vector<DivergenceLeg> over;
    over.push_back(divergence_leg(par, 1.0, 1));
    over.push_back(divergence_leg(par, 2.0, 1));

    bool strict_ok = true;
    bool refused_ok = true;
    bool any_finding = false;
    std::string detail;
    for (const auto& leg : strict) {
        bool gap_ok = leg.gap <= tolerances::kUtilGap;
        strict_ok = strict_ok && gap_ok && leg.histogram_ok && leg.checked_bins >= 5;
        detail += fmt("[load %.1f strict: model %.6f mc %.6f gap %.2f%%, max z %.2f over "
                      "%d states] ",
                      leg.load, leg.util_model, leg.util_mc, 100.0 * leg.gap, leg.max_z,
                      leg.checked_bins);
    }
    for (const auto& leg : over) {
        refused_ok = refused_ok && leg.refused;
        bool metastable = leg.refused && leg.escape_frame < 0;
        if (metastable) any_finding = true;
        detail += fmt("[load %.1f overload: model %s; mc %s, util %.4f over 3000 frames, "
                      "peak backlog %ld%s] ",
                      leg.load, leg.refused ? "refuses" : "DID NOT refuse",
                      leg.escape_frame >= 0 ? fmt("collapses at frame %ld", leg.escape_frame).c_str()
                                            : "holds the low-backlog regime",
                      leg.util_mc, leg.peak_backlog, metastable ? ", finding" : "");
    }
    if (any_finding)
        detail += "-- the infinite-horizon model writes off any load whose grant rate tops "
                  "out below the arrival rate, while the simulated backlog can ride the "
                  "low-occupancy regime for a long metastable window before collapsing; "
                  "the disagreement is a horizon mismatch, not a simulator defect";
    r.pass = strict_ok && refused_ok && (!any_finding || c345_ok);
    r.finding = any_finding;
    r.detail = detail;
    return r;
}

// Criterion 7: saturation throughput plateau of the bundled grid scenario.
inline CheckResult check_saturation_plateau(const std::string& scenario_dir) {
    CheckResult r{7, "saturation_plateau", false, false, ""};
    Scenario sc = load_scenario(scenario_dir + "/pair_saturation.scn");
    Metrics m = run_simulation(sc.sim, build_topology(sc.topo));
    r.pass = m.throughput_bps() >= tolerances::kSatLow &&
             m.throughput_bps() <= tolerances::kSatHigh && m.data_collisions == 0;
    r.detail = fmt("offered %.3g bps -> %.4g bps aggregate (band [%.3g, %.3g]), "
                   "%ld data collisions",
                   m.offered_load_bps, m.throughput_bps(), tolerances::kSatLow,
                   tolerances::kSatHigh, m.data_collisions);
    return r;
}

// Criterion 8: the pair-based baseline saturates flat and well below the
// reservation MAC on the same frame geometry.
inline CheckResult check_baseline_comparison(const std::string& scenario_dir) {
    CheckResult r{8, "baseline_comparison", false, false, ""};
    Scenario sc = load_scenario(scenario_dir + "/cata_16_16.scn");
    auto run_at = [&](const std::string& protocol, double load) {
        Scenario s = sc;
        s.sim.protocol = protocol;
        s.sim.traffic.offered_load_bps = load;
        return run_simulation(s.sim, build_topology(s.topo));
    };
    Metrics cata_mid = run_at("cata", 16.0e6);
    Metrics cata_top = run_at("cata", 24.0e6);
    Metrics rsv_top = run_at("rsv", 24.0e6);

    double plateau = cata_top.throughput_bps();
    bool flat = std::abs(plateau - cata_mid.throughput_bps()) <=
                tolerances::kPlateauFlat * plateau;
    bool ratio = rsv_top.throughput_bps() >= tolerances::kBaselineRatio * plateau;
    bool order = plateau >= tolerances::kOrderLow && plateau <= tolerances::kOrderHigh;
    r.pass = flat && ratio && order;
    r.detail = fmt("baseline %.4g bps at 16M offered, %.4g bps at 24M (flat within %.0f%%: "
                   "%s); reservation %.4g bps at 24M (ratio %.2f, bar %.1f); plateau band "
                   "[%.3g, %.3g]: %s",
                   cata_mid.throughput_bps(), plateau, 100.0 * tolerances::kPlateauFlat,
                   flat ? "yes" : "no", rsv_top.throughput_bps(),
                   rsv_top.throughput_bps() / plateau, tolerances::kBaselineRatio,
                   tolerances::kOrderLow, tolerances::kOrderHigh, order ? "yes" : "no");
    return r;
}

// Criterion 9: bit-identical reruns (metrics and event trace) and the
// per-frame packet-conservation invariant, which every engine run in this
// suite asserts internally.
inline CheckResult check_determinism(const std::string& scenario_dir) {
    CheckResult r{9, "determinism", false, false, ""};
    auto run_traced = [&](const std::string& file) {
        Scenario sc = load_scenario(scenario_dir + "/" + file);
        TraceSink trace(true);
        Metrics m = run_simulation(sc.sim, build_topology(sc.topo), &trace);
        return std::make_pair(csv_row(m), trace.to_text());
    };
    auto a1 = run_traced("crossed_deadlock.scn");
    auto a2 = run_traced("crossed_deadlock.scn");
    auto b1 = run_traced("mobile_rwp.scn");
    auto b2 = run_traced("mobile_rwp.scn");
    bool deadlock_same = a1.first == a2.first && a1.second == a2.second;
    bool mobile_same = b1.first == b2.first && b1.second == b2.second;
    r.pass = deadlock_same && mobile_same;
    r.detail = fmt("deadlock rerun identical: %s (%zu trace bytes); mobile rerun identical: "
                   "%s (%zu trace bytes); packet conservation asserted per frame in every run",
                   deadlock_same ? "yes" : "no", a1.second.size(),
                   mobile_same ? "yes" : "no", b1.second.size());
    return r;
}

}  // namespace acceptance

inline std::vector<CheckResult> run_acceptance(
    const std::string& scenario_dir,
    const std::function<void(const CheckResult&)>& on_result = {}) {
    using namespace acceptance;
    std::vector<CheckResult> out;
    auto guard = [&](int criterion, const std::string& name, auto fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({criterion, name, false, false, std::string("exception: ") + e.what()});
        }
        if (on_result) on_result(out.back());
    };
    guard(1, "collision_freedom", [&] { return check_collision_freedom(); });
    guard(2, "deadlock_release", [&] { return check_deadlock_scenario(scenario_dir); });
    guard(3, "reserved_slots_pmf", [&] { return check_reserved_pmf_oracle(); });
    guard(4, "grants_pmf", [&] { return check_successes_pmf_oracle(); });
    guard(5, "chain_hygiene", [&] { return check_chain_hygiene(scenario_dir); });
    bool c345 = out[2].pass && out[3].pass && out[4].pass;
    guard(6, "model_vs_monte_carlo", [&] { return check_cross_validation(scenario_dir, c345); });
    guard(7, "saturation_plateau", [&] { return check_saturation_plateau(scenario_dir); });
    guard(8, "baseline_comparison", [&] { return check_baseline_comparison(scenario_dir); });
    guard(9, "determinism", [&] { return check_determinism(scenario_dir); });
    return out;
}

}  // namespace macrsv
