#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macrsv/types.hpp"

namespace macrsv {

// RT: this node transmits in the slot.  RR: this node receives.
// FT: a neighbor transmits, so the slot is usable for transmission only.
// FR: a neighbor receives, so the slot is usable for reception only.
// FTR: unconstrained.
enum class SlotState { RT, RR, FT, FR, FTR };

inline const char* to_string(SlotState s) {
    switch (s) {
        case SlotState::RT: return "RT";
        case SlotState::RR: return "RR";
        case SlotState::FT: return "FT";
        case SlotState::FR: return "FR";
        case SlotState::FTR: return "FTR";
    }
    return "?";
}

struct SlotEntry {
    SlotState state = SlotState::FTR;
    NodeId peer = -1;
    std::uint64_t packet_id = 0;
};

class SlotTable {
  public:
    explicit SlotTable(int slots = 0) : entries_(slots) {}

    int size() const { return static_cast<int>(entries_.size()); }
    const SlotEntry& at(int slot) const { return entries_[slot]; }
    SlotState state(int slot) const { return entries_[slot].state; }

    SlotSet free_tx_set() const {
        SlotSet out;
        for (int s = 0; s < size(); ++s)
            if (entries_[s].state == SlotState::FT || entries_[s].state == SlotState::FTR)
                out.push_back(s);
        return out;
    }

    bool receivable(int slot) const {
        auto st = entries_[slot].state;
        return st == SlotState::FR || st == SlotState::FTR;
    }

    void set_rt(int slot, NodeId peer, std::uint64_t packet_id) {
        entries_[slot] = {SlotState::RT, peer, packet_id};
    }

    void set_rr(int slot, NodeId peer) { entries_[slot] = {SlotState::RR, peer, 0}; }

    // Overheard evidence never overrides a reservation or earlier evidence:
    // only an unconstrained slot picks up FT or FR.
    bool observe_ft(int slot) {
        if (entries_[slot].state != SlotState::FTR) return false;
        entries_[slot] = {SlotState::FT, -1, 0};
        return true;
    }

    bool observe_fr(int slot) {
        if (entries_[slot].state != SlotState::FTR) return false;
        entries_[slot] = {SlotState::FR, -1, 0};
        return true;
    }

    void release(int slot) { entries_[slot] = {SlotState::FTR, -1, 0}; }

    void reset() {
        for (auto& e : entries_) e = SlotEntry{};
    }

  private:
    std::vector<SlotEntry> entries_;
};

}  // namespace macrsv
