#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "macrsv/types.hpp"

namespace macrsv {

struct Metrics {
    std::string scenario;
    std::string protocol;
    std::uint64_t seed = 0;

    long frames = 0;
    long warmup_frames = 0;
    double duration_s = 0.0;          // post-warmup wall time covered
    double offered_load_bps = 0.0;    // generated payload bits per second, full run

    long arrived_packets = 0;
    long delivered_packets = 0;       // full run, for conservation
    long dropped_packets = 0;
    long queued_packets = 0;          // at end of run

    long measured_deliveries = 0;     // post-warmup
    double delivered_bits = 0.0;      // post-warmup payload bits acknowledged
    double delay_sum_s = 0.0;         // post-warmup, arrival to final ACK
    long data_collisions = 0;         // at the intended receiver, full run
    long deadlock_deferrals = 0;      // receive-beacon triggered releases, full run

    std::map<std::pair<NodeId, NodeId>, long> delivered_by_flow;

    double throughput_bps() const {
        return duration_s > 0.0 ? delivered_bits / duration_s : 0.0;
    }
    double mean_delay_s() const {
        return measured_deliveries > 0 ? delay_sum_s / measured_deliveries : 0.0;
    }

    // Every admitted packet is delivered or still queued; generation-time
    // drops never enter a queue and are counted separately.
    bool conserved() const {
        return arrived_packets == delivered_packets + queued_packets;
    }
};

inline std::string csv_header() {
    return "scenario,protocol,seed,offered_load_bps,throughput_bps,mean_delay_s,"
           "data_collisions,deadlock_deferrals";
}

inline std::string csv_row(const Metrics& m) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%s,%llu,%.17g,%.17g,%.17g,%ld,%ld",
                  m.scenario.c_str(), m.protocol.c_str(),
                  static_cast<unsigned long long>(m.seed), m.offered_load_bps,
                  m.throughput_bps(), m.mean_delay_s(), m.data_collisions,
                  m.deadlock_deferrals);
    return buf;
}

}  // namespace macrsv
