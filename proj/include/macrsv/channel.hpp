#pragma once

#include <vector>

#include "macrsv/errors.hpp"
#include "macrsv/messages.hpp"
#include "macrsv/topology.hpp"

namespace macrsv {

// Resolve simultaneous transmissions into what each node's radio perceives:
// zero audible neighbors is silence, one is a clean message, two or more is a
// collision. Transmitters are half-duplex and hear nothing.
template <typename M>
std::vector<Observation<M>> resolve(const std::vector<Transmission<M>>& transmissions,
                                    const Topology& topo) {
    int n = topo.size();
    std::vector<Observation<M>> obs(n);
    std::vector<int> heard(n, 0);
    std::vector<const M*> last(n, nullptr);
    std::vector<char> is_sender(n, 0);

    for (const auto& t : transmissions) {
        if (t.sender < 0 || t.sender >= n) throw ConfigError("sender id out of range");
        if (is_sender[t.sender]) throw DuplicateSender("node " + std::to_string(t.sender) +
                                                       " transmits twice in one mini-slot");
        is_sender[t.sender] = 1;
    }
    for (const auto& t : transmissions) {
        for (NodeId v : topo.neighbors(t.sender)) {
            ++heard[v];
            last[v] = &t.message;
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        if (is_sender[v] || heard[v] == 0)
            obs[v] = Observation<M>::silence();
        else if (heard[v] == 1)
            obs[v] = Observation<M>::clean(*last[v]);
        else
            obs[v] = Observation<M>::collision();
    }
    return obs;
}

}  // namespace macrsv
