#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "macrsv/messages.hpp"
#include "macrsv/rng.hpp"
#include "macrsv/slot_table.hpp"
#include "macrsv/types.hpp"

namespace macrsv {

enum class GrantPolicy { Partial, AllOrNothing };

struct ProtocolOptions {
    double persistence_p = 0.175;
    GrantPolicy grant_policy = GrantPolicy::Partial;
    bool paranoid_ncts = false;
    bool rb_ablation = false;
};

enum class RbAction { Transmit, DeferAndRelease };

struct QueuedPacket {
    Packet pkt;
    int granted_this_frame = 0;
};

// Per-node reservation MAC state machine. The engine advances every node in
// lock step through the signaling triples and data slots of each frame and
// routes channel observations to the handlers below.
class RsvNode {
  public:
    RsvNode(NodeId id, int data_slots, ProtocolOptions opts)
        : id_(id), opts_(opts), table_(data_slots) {}

    NodeId id() const { return id_; }
    const SlotTable& table() const { return table_; }
    SlotTable& table() { return table_; }
    std::deque<QueuedPacket>& queue() { return queue_; }
    const std::deque<QueuedPacket>& queue() const { return queue_; }
    bool sent_rts_this_triple() const { return sent_rts_; }
    bool withdrawn() const { return withdrawn_; }

    void enqueue(Packet pkt) { queue_.push_back({pkt, 0}); }

    SlotSet rr_slots() const {
        SlotSet out;
        for (int s = 0; s < table_.size(); ++s)
            if (table_.state(s) == SlotState::RR) out.push_back(s);
        return out;
    }

    // Start-of-triple contention: with probability p, request the unreserved
    // remainder of the first incompletely granted queued packet, drawing the
    // slots fresh from the current free set. A packet too large for the
    // remaining free slots withdraws the node for the rest of this frame.
    std::optional<Rts> choose_request(Rng& rng) {
        sent_rts_ = false;
        rts_slots_.clear();
        if (withdrawn_) return std::nullopt;
        QueuedPacket* active = next_contending_packet();
        if (!active) return std::nullopt;
        if (!rng.bernoulli(opts_.persistence_p)) return std::nullopt;
        int needed = active->pkt.remaining_slots - active->granted_this_frame;
        SlotSet free = table_.free_tx_set();
        if (static_cast<int>(free.size()) < needed) {
            withdrawn_ = true;
            return std::nullopt;
        }
        SlotSet slots = rng.sample(free, static_cast<std::size_t>(needed));
        normalize(slots);
        sent_rts_ = true;
        rts_slots_ = slots;
        rts_packet_ = active->pkt.id;
        return Rts{id_, active->pkt.dst, slots};
    }

    // Non-transmitting nodes answer the RTS mini-slot: grant, jam, or record.
    std::optional<ControlMessage> on_rts_minislot(const Observation<ControlMessage>& obs) {
        sent_cts_.reset();
        if (obs.kind == ObsKind::Collision) {
            if (opts_.paranoid_ncts || !rr_slots().empty()) return Ncts{id_};
            return std::nullopt;
        }
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        const Rts* rts = std::get_if<Rts>(&*obs.message);
        if (!rts) return std::nullopt;
        if (rts->dst == id_) {
            SlotSet grant;
            for (int s : rts->slots)
                if (table_.receivable(s)) grant.push_back(s);
            if (opts_.grant_policy == GrantPolicy::AllOrNothing &&
                grant.size() != rts->slots.size())
                return std::nullopt;
            if (grant.empty()) return std::nullopt;
            sent_cts_ = Cts{id_, rts->src, grant};
            return ControlMessage{*sent_cts_};
        }
        if (!intersect(rts->slots, rr_slots()).empty()) return Ncts{id_};
        provisional_.emplace_back(rts->src, rts->slots);
        return std::nullopt;
    }

    // The RTS sender processes the (N)CTS mini-slot; a clean grant from its
    // receiver locks the slots and is confirmed, anything else leaves the
    // request pending for later triples.
    std::optional<Conf> on_ncts_minislot(const Observation<ControlMessage>& obs) {
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        const Cts* cts = std::get_if<Cts>(&*obs.message);
        if (!cts) return std::nullopt;
        if (cts->dst != id_) {
            mark_fr(cts->slots);
            return std::nullopt;
        }
        if (!is_subset(cts->slots, rts_slots_))
            throw ProtocolViolation("CTS grants slots outside the RTS request");
        for (int s : cts->slots) table_.set_rt(s, cts->src, rts_packet_);
        if (QueuedPacket* qp = find_packet(rts_packet_))
            qp->granted_this_frame += static_cast<int>(cts->slots.size());
        return Conf{id_, cts->src, cts->slots};
    }

    // Bystanders in the (N)CTS mini-slot learn of reservations near the
    // granting receiver.
    void overheard_cts(const Observation<ControlMessage>& obs) {
        if (obs.kind != ObsKind::Clean) return;
        if (const Cts* cts = std::get_if<Cts>(&*obs.message)) mark_fr(cts->slots);
    }

    // CONF mini-slot: the granting receiver commits to receive; bystanders
    // that overheard the original RTS mark the confirmed slots
    // transmitter-busy.
    void on_conf_minislot(const Observation<ControlMessage>& obs) {
        if (obs.kind == ObsKind::Clean) {
            if (const Conf* conf = std::get_if<Conf>(&*obs.message)) {
                if (sent_cts_ && conf->src == sent_cts_->dst && conf->dst == id_ &&
                    conf->slots == sent_cts_->slots) {
                    for (int s : conf->slots) table_.set_rr(s, conf->src);
                } else {
                    for (const auto& [src, slots] : provisional_)
                        if (src == conf->src)
                            for (int s : conf->slots) table_.observe_ft(s);
                }
            }
        }
        sent_cts_.reset();
        provisional_.clear();
    }

    void end_of_triple() {
        sent_rts_ = false;
        rts_slots_.clear();
        sent_cts_.reset();
        provisional_.clear();
    }

    std::optional<Rb> receive_beacon(int slot) const {
        const auto& e = table_.at(slot);
        if (e.state != SlotState::RR) return std::nullopt;
        return Rb{id_, e.peer, slot};
    }

    // A reserved transmitter goes ahead only on a clean beacon naming it; a
    // colliding, absent, or foreign beacon releases this and every later slot
    // of the same reservation for next-frame recontention.
    RbAction rb_decision(int slot, const Observation<ControlMessage>& obs) {
        if (opts_.rb_ablation) return RbAction::Transmit;
        if (obs.kind == ObsKind::Clean) {
            if (const Rb* rb = std::get_if<Rb>(&*obs.message))
                if (rb->transmitter == id_ && rb->slot == slot) return RbAction::Transmit;
        }
        return RbAction::DeferAndRelease;
    }

    // Returns how many slots were released (this one plus later same-packet
    // slots).
    int defer_and_release(int slot) {
        std::uint64_t pkt = table_.at(slot).packet_id;
        int released = 0;
        for (int s = slot; s < table_.size(); ++s) {
            if (table_.state(s) == SlotState::RT && table_.at(s).packet_id == pkt) {
                table_.release(s);
                ++released;
            }
        }
        return released;
    }

    void overheard_rb(int slot, const Observation<ControlMessage>& obs) {
        const auto st = table_.state(slot);
        if (st == SlotState::RT || st == SlotState::RR) return;
        if (obs.kind != ObsKind::Clean) return;
        if (std::get_if<Rb>(&*obs.message)) table_.observe_fr(slot);
    }

    std::optional<DataBurst> data_burst(int slot, int slice) const {
        const auto& e = table_.at(slot);
        if (e.state != SlotState::RT) return std::nullopt;
        return DataBurst{id_, e.peer, e.packet_id, slot, slice};
    }

    // Receiver side of a data slot: acknowledge a clean burst addressed here.
    std::optional<Ack> ack_phase(int slot, const Observation<DataBurst>& obs) {
        const auto& e = table_.at(slot);
        if (e.state != SlotState::RR) return std::nullopt;
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        if (obs.message->dst != id_) return std::nullopt;
        return Ack{id_, obs.message->src, slot};
    }

    // Transmitter bookkeeping on the ACK mini-slot; returns the packet when
    // this acknowledgement completed it.
    std::optional<Packet> transmitter_on_ack(int slot, const Observation<ControlMessage>& obs) {
        const auto& e = table_.at(slot);
        if (e.state != SlotState::RT) return std::nullopt;
        if (obs.kind != ObsKind::Clean) return std::nullopt;
        const Ack* ack = std::get_if<Ack>(&*obs.message);
        if (!ack || ack->transmitter != id_ || ack->slot != slot) return std::nullopt;
        QueuedPacket* qp = find_packet(e.packet_id);
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
        table_.reset();
        withdrawn_ = false;
        sent_rts_ = false;
        rts_slots_.clear();
        sent_cts_.reset();
        provisional_.clear();
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

    void mark_fr(const SlotSet& slots) {
        for (int s : slots) table_.observe_fr(s);
    }

    NodeId id_;
    ProtocolOptions opts_;
    SlotTable table_;
    std::deque<QueuedPacket> queue_;
    bool withdrawn_ = false;
    bool sent_rts_ = false;
    SlotSet rts_slots_;
    std::uint64_t rts_packet_ = 0;
    std::optional<Cts> sent_cts_;
    std::vector<std::pair<NodeId, SlotSet>> provisional_;
};

}  // namespace macrsv
