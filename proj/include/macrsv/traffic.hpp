#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "macrsv/rng.hpp"
#include "macrsv/topology.hpp"
#include "macrsv/types.hpp"

namespace macrsv {

enum class TrafficKind { Flows, Random, Script };

struct Flow {
    NodeId src = 0;
    NodeId dst = 0;
};

struct ScriptedArrival {
    long frame = 0;
    NodeId src = 0;
    NodeId dst = 0;
    int bytes = 0;
};

struct TrafficConfig {
    TrafficKind kind = TrafficKind::Flows;
    int packet_bytes = 1044;
    double offered_load_bps = 0.0;  // aggregate over all sources
    std::vector<Flow> flows;
    std::vector<ScriptedArrival> script;
};

// Draws packet arrivals per frame. Poisson arrivals generated during frame n
// are admitted at the start of frame n+1; scripted arrivals are admitted at
// the start of their named frame.
class TrafficSource {
  public:
    TrafficSource(TrafficConfig cfg, const FrameConfig& frame, Rng rng)
        : cfg_(std::move(cfg)), frame_(frame), rng_(rng) {
        if (cfg_.kind == TrafficKind::Script) {
            script_ = cfg_.script;
            std::stable_sort(script_.begin(), script_.end(),
                             [](const ScriptedArrival& a, const ScriptedArrival& b) {
                                 return a.frame < b.frame;
                             });
        }
    }

    // Packets to admit at the start of `frame`.
    std::vector<Packet> admissions(long frame) {
        std::vector<Packet> out;
        if (cfg_.kind == TrafficKind::Script) {
            const double T = frame_duration_s(frame_);
            while (script_pos_ < script_.size() && script_[script_pos_].frame <= frame) {
                const auto& a = script_[script_pos_++];
                out.push_back(make_packet(++next_id_, a.src, a.dst, a.bytes, frame_,
                                          static_cast<double>(a.frame) * T));
            }
            return out;
        }
        out = std::move(pending_);
        pending_.clear();
        return out;
    }

    // Draw the Poisson arrivals occurring during `frame`; they surface from
    // admissions(frame + 1). Random-kind destinations are drawn uniformly
    // among current neighbors; a source with no neighbor drops the packet.
    // Returns the number of dropped packets.
    int generate(long frame, const Topology& topo) {
        if (cfg_.kind == TrafficKind::Script) return 0;
        if (cfg_.offered_load_bps <= 0.0) return 0;
        const double T = frame_duration_s(frame_);
        const double mean_pkts = cfg_.offered_load_bps * T / (8.0 * cfg_.packet_bytes);
        int dropped = 0;
        if (cfg_.kind == TrafficKind::Flows) {
            const double per_flow = mean_pkts / static_cast<double>(cfg_.flows.size());
            for (const Flow& f : cfg_.flows) {
                int n = rng_.poisson(per_flow);
                for (int i = 0; i < n; ++i) emit(frame, f.src, f.dst, T);
            }
        } else {
            const int nodes = topo.size();
            const double per_node = mean_pkts / static_cast<double>(nodes);
            for (NodeId src = 0; src < nodes; ++src) {
                int n = rng_.poisson(per_node);
                for (int i = 0; i < n; ++i) {
                    const auto& nb = topo.neighbors(src);
                    if (nb.empty()) {
                        ++dropped;
                        continue;
                    }
                    NodeId dst = nb[rng_.below(nb.size())];
                    emit(frame, src, dst, T);
                }
            }
        }
        return dropped;
    }

  private:
    void emit(long frame, NodeId src, NodeId dst, double T) {
        double t = (static_cast<double>(frame) + rng_.uniform01()) * T;
        pending_.push_back(make_packet(++next_id_, src, dst, cfg_.packet_bytes, frame_, t));
    }

    TrafficConfig cfg_;
    FrameConfig frame_;
    Rng rng_;
    std::vector<Packet> pending_;
    std::vector<ScriptedArrival> script_;
    std::size_t script_pos_ = 0;
    std::uint64_t next_id_ = 0;
};

}  // namespace macrsv
