#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "macrsv/cata_node.hpp"
#include "macrsv/channel.hpp"
#include "macrsv/metrics.hpp"
#include "macrsv/mobility.hpp"
#include "macrsv/rsv_node.hpp"
#include "macrsv/topology.hpp"
#include "macrsv/trace.hpp"
#include "macrsv/traffic.hpp"

namespace macrsv {

struct SimConfig {
    std::string scenario_name = "unnamed";
    std::string protocol = "rsv";  // "rsv" | "cata"
    FrameConfig frame;
    ProtocolOptions options;
    long frames = 100;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.1;
    MobilityModel mobility;
    TrafficConfig traffic;
};

namespace detail {

inline std::string slot_tag(long frame, int slot) {
    return "frame " + std::to_string(frame) + " slot " + std::to_string(slot);
}

template <typename Node>
long queued_total(const std::vector<Node>& nodes) {
    long q = 0;
    for (const auto& nd : nodes) q += static_cast<long>(nd.queue().size());
    return q;
}

}  // namespace detail

// Reservation MAC: per frame, K signaling triples build the slot tables,
// then each data slot runs beacon / data / acknowledgement. Collision-free
// data delivery is enforced as a runtime invariant on static topologies
// whenever the receive beacon is active.
inline Metrics run_rsv(const SimConfig& cfg, Topology& topo, TraceSink* trace) {
    const int n = topo.size();
    const int K = cfg.frame.triples_K;
    const int N = cfg.frame.data_slots_N;
    const double T = frame_duration_s(cfg.frame);
    const double sig = signaling_duration_s(cfg.frame);
    const double block = data_slot_block_s(cfg.frame);
    const bool enforce =
        cfg.mobility.kind == MobilityKind::Static && !cfg.options.rb_ablation;

    Rng master(cfg.seed);
    std::vector<Rng> node_rng;
    node_rng.reserve(n);
    for (int i = 0; i < n; ++i) node_rng.push_back(master.fork(1000 + i));
    TrafficSource traffic(cfg.traffic, cfg.frame, master.fork(1));
    Rng mob_rng = master.fork(2);
    std::vector<WaypointState> waypoints(n);

    std::vector<RsvNode> nodes;
    nodes.reserve(n);
    for (int i = 0; i < n; ++i) nodes.emplace_back(i, N, cfg.options);

    Metrics m;
    m.frames = cfg.frames;
    m.warmup_frames = static_cast<long>(std::floor(cfg.frames * cfg.warmup_fraction));
    double generated_bits = 0.0;

    for (long f = 0; f < cfg.frames; ++f) {
        for (const Packet& p : traffic.admissions(f)) {
            nodes[p.src].enqueue(p);
            m.arrived_packets += 1;
            generated_bits += 8.0 * p.payload_bytes;
            if (trace)
                trace->emit(f, "admit", -1, p.src,
                            "arrive", "pkt=" + std::to_string(p.id) + " dst=" +
                                          std::to_string(p.dst) + " slots=" +
                                          std::to_string(p.length_slots));
        }

        for (int k = 0; k < K; ++k) {
            std::vector<Transmission<ControlMessage>> rts;
            for (int i = 0; i < n; ++i)
                if (auto r = nodes[i].choose_request(node_rng[i])) {
                    rts.push_back({i, ControlMessage{*r}});
                    if (trace) trace->emit(f, "rts", k, i, "tx", serialize(rts.back().message));
                }
            auto ob1 = resolve(rts, topo);

            std::vector<Transmission<ControlMessage>> replies;
            for (int i = 0; i < n; ++i)
                if (!nodes[i].sent_rts_this_triple())
                    if (auto rep = nodes[i].on_rts_minislot(ob1[i])) {
                        replies.push_back({i, *rep});
                        if (trace)
                            trace->emit(f, "cts", k, i, "tx", serialize(replies.back().message));
                    }
            auto ob2 = resolve(replies, topo);

            std::vector<Transmission<ControlMessage>> confs;
            for (int i = 0; i < n; ++i) {
                if (nodes[i].sent_rts_this_triple()) {
                    if (auto c = nodes[i].on_ncts_minislot(ob2[i])) {
                        confs.push_back({i, ControlMessage{*c}});
                        if (trace)
                            trace->emit(f, "conf", k, i, "tx", serialize(confs.back().message));
                    }
                } else {
                    nodes[i].overheard_cts(ob2[i]);
                }
            }
            auto ob3 = resolve(confs, topo);
            std::vector<char> confirmed(n, 0);
            for (const auto& t : confs) confirmed[t.sender] = 1;
            for (int i = 0; i < n; ++i)
                if (!confirmed[i]) nodes[i].on_conf_minislot(ob3[i]);
            for (int i = 0; i < n; ++i) nodes[i].end_of_triple();
        }

        for (int s = 0; s < N; ++s) {
            std::vector<Transmission<ControlMessage>> beacons;
            for (int i = 0; i < n; ++i)
                if (auto b = nodes[i].receive_beacon(s)) {
                    beacons.push_back({i, ControlMessage{*b}});
                    if (trace) trace->emit(f, "rb", s, i, "tx", serialize(beacons.back().message));
                }
            auto obr = resolve(beacons, topo);

            std::vector<Transmission<DataBurst>> bursts;
            for (int i = 0; i < n; ++i) {
                if (nodes[i].table().state(s) == SlotState::RT) {
                    if (nodes[i].rb_decision(s, obr[i]) == RbAction::Transmit) {
                        bursts.push_back({i, *nodes[i].data_burst(s, s)});
                        if (trace)
                            trace->emit(f, "data", s, i, "tx",
                                        "pkt=" + std::to_string(bursts.back().message.packet_id));
                    } else {
                        int released = nodes[i].defer_and_release(s);
                        m.deadlock_deferrals += 1;
                        if (trace)
                            trace->emit(f, "rb", s, i, "defer",
                                        "released=" + std::to_string(released));
                    }
                } else {
                    nodes[i].overheard_rb(s, obr[i]);
                }
            }
            auto obd = resolve(bursts, topo);
            std::vector<char> sent(n, 0);
            for (const auto& b : bursts) sent[b.sender] = 1;

            std::vector<Transmission<ControlMessage>> acks;
            for (int i = 0; i < n; ++i) {
                if (nodes[i].table().state(s) != SlotState::RR) continue;
                NodeId peer = nodes[i].table().at(s).peer;
                if (peer >= 0 && sent[peer] && obd[i].kind == ObsKind::Collision) {
                    m.data_collisions += 1;
                    if (trace) trace->emit(f, "data", s, i, "col", "peer=" + std::to_string(peer));
                    if (enforce)
                        throw ProtocolViolation("data collision at intended receiver " +
                                                std::to_string(i) + ", " + detail::slot_tag(f, s));
                }
                if (auto a = nodes[i].ack_phase(s, obd[i])) {
                    acks.push_back({i, ControlMessage{*a}});
                    if (trace) trace->emit(f, "ack", s, i, "tx", serialize(acks.back().message));
                }
            }
            auto oba = resolve(acks, topo);
            for (int i = 0; i < n; ++i) {
                if (nodes[i].table().state(s) != SlotState::RT) continue;
                if (auto done = nodes[i].transmitter_on_ack(s, oba[i])) {
                    double t_ack = f * T + sig + (s + 1) * block;
                    m.delivered_packets += 1;
                    m.delivered_by_flow[{done->src, done->dst}] += 1;
                    if (f >= m.warmup_frames) {
                        m.measured_deliveries += 1;
                        m.delivered_bits += 8.0 * done->payload_bytes;
                        m.delay_sum_s += t_ack - done->arrival_time_s;
                    }
                    if (trace) {
                        char d[64];
                        std::snprintf(d, sizeof(d), "pkt=%llu delay=%.9g",
                                      static_cast<unsigned long long>(done->id),
                                      t_ack - done->arrival_time_s);
                        trace->emit(f, "ack", s, i, "deliver", d);
                    }
                    nodes[i].remove_packet(done->id);
                }
            }
        }

        m.queued_packets = detail::queued_total(nodes);
        if (m.arrived_packets != m.delivered_packets + m.queued_packets)
            throw ProtocolViolation("packet conservation violated at frame " + std::to_string(f));
        for (int i = 0; i < n; ++i) nodes[i].end_of_frame();
        m.dropped_packets += traffic.generate(f, topo);
        step_mobility(topo, cfg.mobility, waypoints, T, mob_rng);
    }

    m.duration_s = static_cast<double>(cfg.frames - m.warmup_frames) * T;
    m.offered_load_bps = generated_bits / (static_cast<double>(cfg.frames) * T);
    return m;
}

// Pair-based baseline: one request/grant exchange per data slot, no
// confirmation, jamming, or receive beacon, so bad grants surface as data
// collisions instead of being repaired.
inline Metrics run_cata(const SimConfig& cfg, Topology& topo, TraceSink* trace) {
    const int n = topo.size();
    const int N = cfg.frame.data_slots_N;
    const double T = cata_frame_duration_s(cfg.frame);
    const double sig = cata_signaling_duration_s(cfg.frame);
    const double block = cata_data_slot_block_s(cfg.frame);

    Rng master(cfg.seed);
    std::vector<Rng> node_rng;
    node_rng.reserve(n);
    for (int i = 0; i < n; ++i) node_rng.push_back(master.fork(1000 + i));
    TrafficSource traffic(cfg.traffic, cfg.frame, master.fork(1));
    Rng mob_rng = master.fork(2);
    std::vector<WaypointState> waypoints(n);

    std::vector<CataNode> nodes;
    nodes.reserve(n);
    for (int i = 0; i < n; ++i) nodes.emplace_back(i, N, cfg.options);

    Metrics m;
    m.frames = cfg.frames;
    m.warmup_frames = static_cast<long>(std::floor(cfg.frames * cfg.warmup_fraction));
    double generated_bits = 0.0;

    for (long f = 0; f < cfg.frames; ++f) {
        for (const Packet& p : traffic.admissions(f)) {
            nodes[p.src].enqueue(p);
            m.arrived_packets += 1;
            generated_bits += 8.0 * p.payload_bytes;
            if (trace)
                trace->emit(f, "admit", -1, p.src,
                            "arrive", "pkt=" + std::to_string(p.id) + " dst=" +
                                          std::to_string(p.dst) + " slots=" +
                                          std::to_string(p.length_slots));
        }

        for (int s = 0; s < N; ++s) {
            std::vector<Transmission<ControlMessage>> rts;
            for (int i = 0; i < n; ++i)
                if (auto r = nodes[i].choose_request(s, node_rng[i])) {
                    rts.push_back({i, ControlMessage{*r}});
                    if (trace) trace->emit(f, "rts", s, i, "tx", serialize(rts.back().message));
                }
            auto ob1 = resolve(rts, topo);

            std::vector<Transmission<ControlMessage>> replies;
            for (int i = 0; i < n; ++i)
                if (!nodes[i].sent_rts_this_pair())
                    if (auto rep = nodes[i].on_rts_minislot(s, ob1[i])) {
                        replies.push_back({i, ControlMessage{*rep}});
                        if (trace)
                            trace->emit(f, "cts", s, i, "tx", serialize(replies.back().message));
                    }
            auto ob2 = resolve(replies, topo);
            std::vector<char> replied(n, 0);
            for (const auto& t : replies) replied[t.sender] = 1;
            for (int i = 0; i < n; ++i)
                if (!replied[i]) nodes[i].on_cts_minislot(s, ob2[i]);
            for (int i = 0; i < n; ++i) nodes[i].end_of_pair();
        }

        for (int s = 0; s < N; ++s) {
            std::vector<Transmission<DataBurst>> bursts;
            for (int i = 0; i < n; ++i)
                if (auto b = nodes[i].data_burst(s)) {
                    bursts.push_back({i, *b});
                    if (trace)
                        trace->emit(f, "data", s, i, "tx",
                                    "pkt=" + std::to_string(b->packet_id));
                }
            auto obd = resolve(bursts, topo);
            std::vector<char> sent(n, 0);
            for (const auto& b : bursts) sent[b.sender] = 1;

            std::vector<Transmission<ControlMessage>> acks;
            for (int i = 0; i < n; ++i) {
                if (!nodes[i].expecting(s)) continue;
                NodeId peer = nodes[i].expected_src(s);
                if (peer >= 0 && sent[peer] && obd[i].kind == ObsKind::Collision) {
                    m.data_collisions += 1;
                    if (trace) trace->emit(f, "data", s, i, "col", "peer=" + std::to_string(peer));
                }
                if (auto a = nodes[i].ack_phase(s, obd[i])) {
                    acks.push_back({i, ControlMessage{*a}});
                    if (trace) trace->emit(f, "ack", s, i, "tx", serialize(acks.back().message));
                }
            }
            auto oba = resolve(acks, topo);
            for (int i = 0; i < n; ++i) {
                if (auto done = nodes[i].transmitter_on_ack(s, oba[i])) {
                    double t_ack = f * T + sig + (s + 1) * block;
                    m.delivered_packets += 1;
                    m.delivered_by_flow[{done->src, done->dst}] += 1;
                    if (f >= m.warmup_frames) {
                        m.measured_deliveries += 1;
                        m.delivered_bits += 8.0 * done->payload_bytes;
                        m.delay_sum_s += t_ack - done->arrival_time_s;
                    }
                    if (trace) {
                        char d[64];
                        std::snprintf(d, sizeof(d), "pkt=%llu delay=%.9g",
                                      static_cast<unsigned long long>(done->id),
                                      t_ack - done->arrival_time_s);
                        trace->emit(f, "ack", s, i, "deliver", d);
                    }
                    nodes[i].remove_packet(done->id);
                }
            }
        }

        m.queued_packets = detail::queued_total(nodes);
        if (m.arrived_packets != m.delivered_packets + m.queued_packets)
            throw ProtocolViolation("packet conservation violated at frame " + std::to_string(f));
        for (int i = 0; i < n; ++i) nodes[i].end_of_frame();
        m.dropped_packets += traffic.generate(f, topo);
        step_mobility(topo, cfg.mobility, waypoints, T, mob_rng);
    }

    m.duration_s = static_cast<double>(cfg.frames - m.warmup_frames) * T;
    m.offered_load_bps = generated_bits / (static_cast<double>(cfg.frames) * T);
    return m;
}

inline Metrics run_simulation(const SimConfig& cfg, Topology topo, TraceSink* trace = nullptr) {
    cfg.frame.validate();
    if (cfg.frames < 1) throw ConfigError("frames must be >= 1");
    if (cfg.options.persistence_p <= 0.0 || cfg.options.persistence_p > 1.0)
        throw ConfigError("persistence probability must be in (0, 1]");
    if (cfg.warmup_fraction < 0.0 || cfg.warmup_fraction >= 1.0)
        throw ConfigError("warmup fraction must be in [0, 1)");
    if (topo.size() < 2) throw ConfigError("topology needs at least 2 nodes");

    Metrics m;
    if (cfg.protocol == "rsv") {
        m = run_rsv(cfg, topo, trace);
    } else if (cfg.protocol == "cata") {
        m = run_cata(cfg, topo, trace);
    } else {
        throw ConfigError("unknown protocol '" + cfg.protocol + "'");
    }
    m.scenario = cfg.scenario_name;
    m.protocol = cfg.protocol;
    m.seed = cfg.seed;
    return m;
}

}  // namespace macrsv
