#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "macrsv/errors.hpp"

namespace macrsv {

using NodeId = int;

// Sorted set of data-slot indices; kept as a vector for cheap iteration and
// deterministic ordering in traces.
using SlotSet = std::vector<int>;

inline void normalize(SlotSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool contains(const SlotSet& s, int slot) {
    return std::binary_search(s.begin(), s.end(), slot);
}

inline SlotSet intersect(const SlotSet& a, const SlotSet& b) {
    SlotSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool is_subset(const SlotSet& sub, const SlotSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

struct FrameConfig {
    int triples_K = 14;
    int data_slots_N = 25;
    int control_bytes = 20;
    int data_payload_bytes = 1044;
    long long channel_rate_bps = 2'000'000;

    void validate() const {
        if (triples_K < 1) throw ConfigError("triples_K must be >= 1");
        if (data_slots_N < 1) throw ConfigError("data_slots_N must be >= 1");
        if (control_bytes < 1) throw ConfigError("control_bytes must be >= 1");
        if (data_payload_bytes < 1) throw ConfigError("data_payload_bytes must be >= 1");
        if (channel_rate_bps <= 0) throw ConfigError("channel_rate_bps must be > 0");
    }
};

// Whole-frame air time: K signaling triples of three control mini-slots, then
// N data slots each bracketed by one leading and one trailing control
// mini-slot (beacon and acknowledgement).
inline double frame_duration_s(const FrameConfig& cfg) {
    cfg.validate();
    double control_bits = 8.0 * cfg.control_bytes;
    double data_bits = 8.0 * cfg.data_payload_bytes;
    double bits = 3.0 * cfg.triples_K * control_bits +
                  cfg.data_slots_N * (2.0 * control_bits + data_bits);
    return bits / static_cast<double>(cfg.channel_rate_bps);
}

// Signaling-phase air time; data slot s ends at
// signaling + (s+1) * per-slot block.
inline double signaling_duration_s(const FrameConfig& cfg) {
    return 3.0 * cfg.triples_K * 8.0 * cfg.control_bytes /
           static_cast<double>(cfg.channel_rate_bps);
}

inline double data_slot_block_s(const FrameConfig& cfg) {
    return (2.0 * 8.0 * cfg.control_bytes + 8.0 * cfg.data_payload_bytes) /
           static_cast<double>(cfg.channel_rate_bps);
}

inline int packet_from_bytes(long long bytes, const FrameConfig& cfg) {
    cfg.validate();
    if (bytes < 1) throw ConfigError("packet bytes must be >= 1");
    long long slots = (bytes + cfg.data_payload_bytes - 1) / cfg.data_payload_bytes;
    if (slots > cfg.data_slots_N)
        throw OversizePacket("packet of " + std::to_string(bytes) + " bytes needs " +
                             std::to_string(slots) + " slots, frame has " +
                             std::to_string(cfg.data_slots_N));
    return static_cast<int>(slots);
}

struct Packet {
    std::uint64_t id = 0;
    NodeId src = -1;
    NodeId dst = -1;
    int length_slots = 1;
    int payload_bytes = 0;
    double arrival_time_s = 0.0;
    int remaining_slots = 1;
};

inline Packet make_packet(std::uint64_t id, NodeId src, NodeId dst, long long bytes,
                          const FrameConfig& cfg, double arrival_time_s) {
    Packet p;
    p.id = id;
    p.src = src;
    p.dst = dst;
    p.length_slots = packet_from_bytes(bytes, cfg);
    p.payload_bytes = static_cast<int>(bytes);
    p.arrival_time_s = arrival_time_s;
    p.remaining_slots = p.length_slots;
    return p;
}

}  // namespace macrsv
