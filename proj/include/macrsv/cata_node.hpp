#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "macrsv/messages.hpp"
#include "macrsv/rng.hpp"
#include "macrsv/rsv_node.hpp"
#include "macrsv/types.hpp"

namespace macrsv {

// Per-slot channel knowledge in the pair-based baseline: free, a nearby
// transmitter is expected (overheard request), or a nearby receiver is
// expected (overheard grant). Either busy state conservatively blocks both
// contending for and granting the slot; there is no jamming, confirmation, or
// receive-beacon stage to repair bad grants.
enum class CataSlotState { Free, BusyTx, BusyRx };

class CataNode {
  public:
    CataNode(NodeId id, int data_slots, ProtocolOptions opts)
        : id_(id), opts_(opts), table_(data_slots, CataSlotState::Free),
          own_tx_(data_slots, 0), own_rx_(data_slots, -1) {}

    NodeId id() const { return id_; }
    std::deque<QueuedPacket>& queue() { return queue_; }
    const std::deque<QueuedPacket>& queue() const { return queue_; }
    bool sent_rts_this_pair() const { return sent_rts_; }
    CataSlotState table(int slot) const { return table_[slot]; }
    NodeId expected_src(int slot) const { return own_rx_[slot]; }

    void enqueue(Packet pkt) { queue_.push_back({pkt, 0}); }

    void inject_state(int slot, CataSlotState st) { table_[slot] = st; }

    // Contend for this pair's slot with probability p when the slot looks
    // free locally and a queued packet still needs slots.
    std::optional<Rts> choose_request(int slot, Rng& rng) {
        sent_rts_ = false;
        if (table_[slot] != CataSlotState::Free || own_tx_[slot] != 0 || own_rx_[slot] >= 0)
            return std::nullopt;
        QueuedPacket* active = next_contending_packet();
        if (!active) return std::nullopt;
        if (!rng.bernoulli(opts_.persistence_p)) return std::nullopt;
        sent_rts_ = true;
        rts_packet_ = active->pkt.id;
        rts_dst_ = active->pkt.dst;
        return Rts{id_, active->pkt.dst, {slot}};
    }

    // Request mini-slot at a non-contender: grant if addressed here and the
    // slot looks free, otherwise remember the foreign transmitter.
    std::optional<Cts> on_rts_minislot(int slot, const Observation<ControlMessage>& obs) {
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        const Rts* rts = std::get_if<Rts>(&*obs.message);
        if (!rts) return std::nullopt;
        if (rts->dst == id_) {
            if (table_[slot] != CataSlotState::Free || own_tx_[slot] != 0 ||
                own_rx_[slot] >= 0)
                return std::nullopt;
            own_rx_[slot] = rts->src;
            return Cts{id_, rts->src, {slot}};
        }
        if (table_[slot] == CataSlotState::Free) table_[slot] = CataSlotState::BusyTx;
        return std::nullopt;
    }

    // Grant mini-slot at the contender: a clean grant addressed here wins the
    // slot for the head packet.
    void on_cts_minislot(int slot, const Observation<ControlMessage>& obs) {
        if (obs.kind != ObsKind::Clean) return;
        const Cts* cts = std::get_if<Cts>(&*obs.message);
        if (!cts) return;
        if (sent_rts_ && cts->dst == id_ && cts->src == rts_dst_) {
            own_tx_[slot] = rts_packet_;
            if (QueuedPacket* qp = find_packet(rts_packet_)) qp->granted_this_frame += 1;
            return;
        }
        if (table_[slot] == CataSlotState::Free) table_[slot] = CataSlotState::BusyRx;
    }

    void end_of_pair() { sent_rts_ = false; }

    std::optional<DataBurst> data_burst(int slot) {
        if (own_tx_[slot] == 0) return std::nullopt;
        QueuedPacket* qp = find_packet(own_tx_[slot]);
        if (!qp) return std::nullopt;
        return DataBurst{id_, qp->pkt.dst, own_tx_[slot], slot, slot};
    }

    bool expecting(int slot) const { return own_rx_[slot] >= 0; }

    std::optional<Ack> ack_phase(int slot, const Observation<DataBurst>& obs) {
        if (own_rx_[slot] < 0) return std::nullopt;
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        if (obs.message->dst != id_ || obs.message->src != own_rx_[slot]) return std::nullopt;
        return Ack{id_, obs.message->src, slot};
    }

    std::optional<Packet> transmitter_on_ack(int slot, const Observation<ControlMessage>& obs) {
        if (own_tx_[slot] == 0) return std::nullopt;
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        const Ack* ack = std::get_if<Ack>(&*obs.message);
        if (!ack || ack->transmitter != id_ || ack->slot != slot) return std::nullopt;
        QueuedPacket* qp = find_packet(own_tx_[slot]);
        if (!qp) return std::nullopt;
        qp->pkt.remaining_slots -= 1;
        if (qp->pkt.remaining_slots == 0) return qp->pkt;
        return std::nullopt;
    }

    void remove_packet(std::uint64_t packet_id) {
        for (auto it = queue_.begin(); it != queue_.end(); ++it)
            if (it->pkt.id == packet_id) {
                queue_.erase(it);
                return;
            }
    }

    void end_of_frame() {
        std::fill(table_.begin(), table_.end(), CataSlotState::Free);
        std::fill(own_tx_.begin(), own_tx_.end(), 0);
        std::fill(own_rx_.begin(), own_rx_.end(), -1);
        sent_rts_ = false;
        for (auto& qp : queue_) qp.granted_this_frame = 0;
    }

  private:
    QueuedPacket* next_contending_packet() {
        for (auto& qp : queue_)
            if (qp.pkt.remaining_slots > qp.granted_this_frame) return &qp;
        return nullptr;
    }

    QueuedPacket* find_packet(std::uint64_t packet_id) {
        for (auto& qp : queue_)
            if (qp.pkt.id == packet_id) return &qp;
        return nullptr;
    }

    NodeId id_;
    ProtocolOptions opts_;
    std::vector<CataSlotState> table_;
    std::vector<std::uint64_t> own_tx_;  // slot -> packet id granted for transmit
    std::vector<NodeId> own_rx_;         // slot -> expected transmitter, -1 if none
    std::deque<QueuedPacket> queue_;
    bool sent_rts_ = false;
    std::uint64_t rts_packet_ = 0;
    NodeId rts_dst_ = -1;
};

// Pair-based frame: N request/grant pairs, then N data slots each with a
// trailing acknowledgement mini-slot.
inline double cata_frame_duration_s(const FrameConfig& cfg) {
    cfg.validate();
    double control_bits = 8.0 * cfg.control_bytes;
    double data_bits = 8.0 * cfg.data_payload_bytes;
    double bits = cfg.data_slots_N * 2.0 * control_bits +
                  cfg.data_slots_N * (control_bits + data_bits);
    return bits / static_cast<double>(cfg.channel_rate_bps);
}

inline double cata_signaling_duration_s(const FrameConfig& cfg) {
    return cfg.data_slots_N * 2.0 * 8.0 * cfg.control_bytes /
           static_cast<double>(cfg.channel_rate_bps);
}

inline double cata_data_slot_block_s(const FrameConfig& cfg) {
    return (8.0 * cfg.control_bytes + 8.0 * cfg.data_payload_bytes) /
           static_cast<double>(cfg.channel_rate_bps);
}

}  // namespace macrsv
