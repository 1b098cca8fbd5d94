#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "macrsv/engine.hpp"

using namespace macrsv;

namespace {

FrameConfig small_frame(int K, int N) {
    FrameConfig f;
    f.triples_K = K;
    f.data_slots_N = N;
    return f;
}

SimConfig script_config(std::vector<ScriptedArrival> script, int K, int N) {
    SimConfig cfg;
    cfg.frame = small_frame(K, N);
    cfg.options.persistence_p = 1.0;
    cfg.frames = 2;
    cfg.warmup_fraction = 0.0;
    cfg.traffic.kind = TrafficKind::Script;
    cfg.traffic.script = std::move(script);
    return cfg;
}

Topology pair_topo() { return Topology({{0, 0}, {100, 0}}, 250.0); }

}  // namespace

TEST_CASE("single scripted packet is delivered with frame-accurate delay") {
    SimConfig cfg = script_config({{0, 0, 1, 1044}}, 2, 3);
    Metrics m = run_simulation(cfg, pair_topo());
    REQUIRE(m.arrived_packets == 1);
    REQUIRE(m.delivered_packets == 1);
    REQUIRE(m.queued_packets == 0);
    REQUIRE(m.conserved());
    REQUIRE(m.data_collisions == 0);
    REQUIRE(m.deadlock_deferrals == 0);
    REQUIRE(m.delivered_by_flow.at({0, 1}) == 1);
    REQUIRE(m.delivered_bits == 8.0 * 1044);
    REQUIRE(m.duration_s == Catch::Approx(2.0 * frame_duration_s(cfg.frame)));

    // delivery lands at the end of some data slot of frame 0
    double sig = signaling_duration_s(cfg.frame);
    double block = data_slot_block_s(cfg.frame);
    double slot = (m.mean_delay_s() - sig) / block;
    REQUIRE(slot == Catch::Approx(std::round(slot)).margin(1e-9));
    REQUIRE(slot >= 1.0);
    REQUIRE(slot <= 3.0);
}

TEST_CASE("multi-slot packet completes once, at its last slot") {
    SimConfig cfg = script_config({{0, 0, 1, 3132}}, 2, 3);
    Metrics m = run_simulation(cfg, pair_topo());
    REQUIRE(m.delivered_packets == 1);
    REQUIRE(m.delivered_bits == 8.0 * 3132);
    double expected = signaling_duration_s(cfg.frame) + 3 * data_slot_block_s(cfg.frame);
    REQUIRE(m.mean_delay_s() == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("warmup gates measurement but not conservation") {
    SimConfig cfg = script_config({{0, 0, 1, 1044}, {7, 0, 1, 1044}}, 2, 3);
    cfg.frames = 10;
    cfg.warmup_fraction = 0.5;
    Metrics m = run_simulation(cfg, pair_topo());
    REQUIRE(m.warmup_frames == 5);
    REQUIRE(m.delivered_packets == 2);
    REQUIRE(m.measured_deliveries == 1);
    REQUIRE(m.delivered_bits == 8.0 * 1044);
    REQUIRE(m.mean_delay_s() > 0.0);
    REQUIRE(m.mean_delay_s() <= frame_duration_s(cfg.frame));
    REQUIRE(m.duration_s == Catch::Approx(5.0 * frame_duration_s(cfg.frame)));
}

TEST_CASE("hidden terminals share a receiver without data collisions") {
    SimConfig cfg;
    cfg.frame = small_frame(4, 5);
    cfg.options.persistence_p = 0.3;
    cfg.frames = 60;
    cfg.warmup_fraction = 0.1;
    cfg.seed = 3;
    cfg.traffic.kind = TrafficKind::Flows;
    cfg.traffic.flows = {{0, 1}, {2, 1}};
    cfg.traffic.offered_load_bps = 3e6;
    Topology line({{0, 0}, {200, 0}, {400, 0}}, 250.0);

    // collision at the intended receiver would throw on this static topology
    Metrics m = run_simulation(cfg, line);
    REQUIRE(m.data_collisions == 0);
    REQUIRE(m.delivered_packets > 20);
    REQUIRE(m.conserved());
}

TEST_CASE("identical runs produce identical rows and traces") {
    SimConfig cfg;
    cfg.scenario_name = "det";
    cfg.frame = small_frame(3, 4);
    cfg.options.persistence_p = 0.4;
    cfg.frames = 40;
    cfg.seed = 12;
    cfg.traffic.kind = TrafficKind::Random;
    cfg.traffic.offered_load_bps = 1.5e6;
    cfg.mobility.kind = MobilityKind::RandomWaypoint;
    cfg.mobility.area_w = 500;
    cfg.mobility.area_h = 300;
    cfg.mobility.speed_mps = 30;
    cfg.mobility.pause_s = 0.1;
    Topology topo = build_random(12, 500, 300, 200, 5);

    TraceSink t1(true), t2(true);
    Metrics a = run_simulation(cfg, topo, &t1);
    Metrics b = run_simulation(cfg, topo, &t2);
    REQUIRE(csv_row(a) == csv_row(b));
    REQUIRE(t1.to_text() == t2.to_text());
    REQUIRE_FALSE(t1.records().empty());
    REQUIRE(a.conserved());

    cfg.seed = 13;
    Metrics c = run_simulation(cfg, topo);
    REQUIRE(csv_row(a) != csv_row(c));
}

TEST_CASE("pair-based baseline delivers on isolated pairs with exact timing") {
    SimConfig cfg = script_config({{0, 0, 1, 1044}, {0, 2, 3, 1044}}, 2, 2);
    cfg.protocol = "cata";
    cfg.frames = 1;
    Topology topo({{0, 0}, {100, 0}, {5000, 0}, {5100, 0}}, 250.0);
    Metrics m = run_simulation(cfg, topo);
    REQUIRE(m.protocol == "cata");
    REQUIRE(m.delivered_packets == 2);
    REQUIRE(m.data_collisions == 0);
    REQUIRE(m.conserved());
    double expected = cata_signaling_duration_s(cfg.frame) + cata_data_slot_block_s(cfg.frame);
    REQUIRE(m.mean_delay_s() == Catch::Approx(expected).epsilon(1e-12));
    REQUIRE(m.duration_s == Catch::Approx(cata_frame_duration_s(cfg.frame)));
}

TEST_CASE("pair-based baseline under contention stays conserved") {
    SimConfig cfg;
    cfg.protocol = "cata";
    cfg.frame = small_frame(4, 4);
    cfg.options.persistence_p = 0.25;
    cfg.frames = 50;
    cfg.seed = 9;
    cfg.traffic.kind = TrafficKind::Flows;
    cfg.traffic.flows = {{0, 1}, {2, 1}};
    cfg.traffic.offered_load_bps = 2e6;
    Topology line({{0, 0}, {200, 0}, {400, 0}}, 250.0);
    Metrics m = run_simulation(cfg, line);
    REQUIRE(m.conserved());
    REQUIRE(m.delivered_packets > 0);
}

TEST_CASE("baseline node state blocks contending and granting") {
    ProtocolOptions o;
    o.persistence_p = 1.0;
    Rng rng(1);

    CataNode n(1, 3, o);
    Packet p;
    p.id = 5;
    p.src = 1;
    p.dst = 2;
    p.length_slots = 1;
    p.remaining_slots = 1;
    n.enqueue(p);
    REQUIRE(n.choose_request(0, rng).has_value());
    n.end_of_pair();
    n.inject_state(1, CataSlotState::BusyTx);
    REQUIRE_FALSE(n.choose_request(1, rng).has_value());
    n.inject_state(2, CataSlotState::BusyRx);
    REQUIRE_FALSE(n.choose_request(2, rng).has_value());

    CataNode r(2, 3, o);
    auto obs = Observation<ControlMessage>::clean(ControlMessage{Rts{1, 2, {0}}});
    r.inject_state(0, CataSlotState::BusyTx);
    REQUIRE_FALSE(r.on_rts_minislot(0, obs).has_value());
    auto grant = r.on_rts_minislot(1, Observation<ControlMessage>::clean(ControlMessage{Rts{1, 2, {1}}}));
    REQUIRE(grant.has_value());
    REQUIRE(grant->slots == SlotSet{1});
    REQUIRE(r.expecting(1));
    REQUIRE(r.expected_src(1) == 1);

    // foreign traffic is remembered but never overrides a commitment
    CataNode w(9, 3, o);
    w.on_rts_minislot(0, obs);
    REQUIRE(w.table(0) == CataSlotState::BusyTx);
    w.on_cts_minislot(1, Observation<ControlMessage>::clean(ControlMessage{Cts{2, 1, {1}}}));
    REQUIRE(w.table(1) == CataSlotState::BusyRx);
    w.end_of_frame();
    REQUIRE(w.table(0) == CataSlotState::Free);
    REQUIRE(w.table(1) == CataSlotState::Free);
}

TEST_CASE("mobile random-traffic run stays conserved") {
    SimConfig cfg;
    cfg.frame = small_frame(3, 4);
    cfg.options.persistence_p = 0.35;
    cfg.frames = 50;
    cfg.seed = 21;
    cfg.traffic.kind = TrafficKind::Random;
    cfg.traffic.offered_load_bps = 1e6;
    cfg.mobility.kind = MobilityKind::RandomWaypoint;
    cfg.mobility.area_w = 400;
    cfg.mobility.area_h = 300;
    cfg.mobility.speed_mps = 40;
    Topology topo = build_random(10, 400, 300, 150, 7);
    Metrics m = run_simulation(cfg, topo);
    REQUIRE(m.arrived_packets > 0);
    REQUIRE(m.conserved());
}

TEST_CASE("configuration errors are rejected up front") {
    SimConfig cfg = script_config({{0, 0, 1, 1044}}, 2, 3);
    Topology topo = pair_topo();

    SimConfig bad = cfg;
    bad.frames = 0;
    REQUIRE_THROWS_AS(run_simulation(bad, topo), ConfigError);
    bad = cfg;
    bad.options.persistence_p = 0.0;
    REQUIRE_THROWS_AS(run_simulation(bad, topo), ConfigError);
    bad = cfg;
    bad.options.persistence_p = 1.5;
    REQUIRE_THROWS_AS(run_simulation(bad, topo), ConfigError);
    bad = cfg;
    bad.warmup_fraction = 1.0;
    REQUIRE_THROWS_AS(run_simulation(bad, topo), ConfigError);
    bad = cfg;
    bad.protocol = "aloha";
    REQUIRE_THROWS_AS(run_simulation(bad, topo), ConfigError);
    bad = cfg;
    bad.frame.triples_K = 0;
    REQUIRE_THROWS_AS(run_simulation(bad, topo), ConfigError);
    REQUIRE_THROWS_AS(run_simulation(cfg, Topology({{0, 0}}, 100.0)), ConfigError);
}
