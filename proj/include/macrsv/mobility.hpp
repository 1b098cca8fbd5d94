#pragma once

#include <cmath>
#include <vector>

#include "macrsv/rng.hpp"
#include "macrsv/topology.hpp"

namespace macrsv {

enum class MobilityKind { Static, RandomWaypoint };

struct MobilityModel {
    MobilityKind kind = MobilityKind::Static;
    double area_w = 0.0;
    double area_h = 0.0;
    double speed_mps = 0.0;
    double pause_s = 0.0;
};

// Per-node waypoint progress, owned by the engine across frames.
struct WaypointState {
    Vec2 target;
    double pause_left = 0.0;
    bool has_target = false;
};

inline void step_mobility(Topology& topo, const MobilityModel& model,
                          std::vector<WaypointState>& state, double dt, Rng& rng) {
    if (model.kind == MobilityKind::Static) return;
    state.resize(topo.size());
    for (NodeId v = 0; v < topo.size(); ++v) {
        auto& ws = state[v];
        double budget = dt;
        Vec2 p = topo.position(v);
        while (budget > 0.0) {
            if (ws.pause_left > 0.0) {
                double spent = std::min(ws.pause_left, budget);
                ws.pause_left -= spent;
                budget -= spent;
                continue;
            }
            if (!ws.has_target) {
                ws.target = {rng.uniform01() * model.area_w, rng.uniform01() * model.area_h};
                ws.has_target = true;
            }
            double dist = distance(p, ws.target);
            double reach = model.speed_mps * budget;
            if (model.speed_mps <= 0.0) break;
            if (reach >= dist) {
                p = ws.target;
                budget -= dist / model.speed_mps;
                ws.has_target = false;
                ws.pause_left = model.pause_s;
            } else {
                double f = reach / dist;
                p = {p.x + (ws.target.x - p.x) * f, p.y + (ws.target.y - p.y) * f};
                budget = 0.0;
            }
        }
        topo.move_to(v, p);
    }
    topo.rebuild();
}

}  // namespace macrsv
