#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "macrsv/errors.hpp"
#include "macrsv/rng.hpp"
#include "macrsv/types.hpp"

namespace macrsv {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Unit-disk graph over node positions; node ids are dense indices 0..n-1.
class Topology {
  public:
    Topology() = default;
    Topology(std::vector<Vec2> positions, double range_m)
        : pos_(std::move(positions)), range_(range_m) {
        rebuild();
    }

    int size() const { return static_cast<int>(pos_.size()); }
    double range_m() const { return range_; }
    const Vec2& position(NodeId v) const { return pos_[v]; }
    const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }

    bool adjacent(NodeId a, NodeId b) const {
        if (a == b) return false;
        return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
    }

    void move_to(NodeId v, Vec2 p) { pos_[v] = p; }

    void rebuild() {
        int n = size();
        adj_.assign(n, {});
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (distance(pos_[a], pos_[b]) <= range_) {
                    adj_[a].push_back(b);
                    adj_[b].push_back(a);
                }
    }

    // Plain-text form: header with count and range, then one "id x y" per line.
    std::string to_text() const {
        char buf[96];
        std::snprintf(buf, sizeof buf, "nodes %d range %.17g\n", size(), range_);
        std::string out = buf;
        for (int v = 0; v < size(); ++v) {
            std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", v, pos_[v].x, pos_[v].y);
            out += buf;
        }
        return out;
    }

    static Topology from_text(const std::string& text) {
        std::istringstream in(text);
        std::string word;
        int n = 0;
        double range = 0.0;
        if (!(in >> word >> n) || word != "nodes") throw ConfigError("bad topology header");
        if (!(in >> word >> range) || word != "range") throw ConfigError("bad topology header");
        std::vector<Vec2> pos(n);
        for (int i = 0; i < n; ++i) {
            int id;
            Vec2 p;
            if (!(in >> id >> p.x >> p.y) || id != i) throw ConfigError("bad topology row");
            pos[i] = p;
        }
        return Topology(std::move(pos), range);
    }

  private:
    std::vector<Vec2> pos_;
    double range_ = 0.0;
    std::vector<std::vector<NodeId>> adj_;
};

inline Topology build_grid_mesh(int rows, int cols, double spacing_m, double range_m) {
    if (rows < 1 || cols < 1) throw ConfigError("grid needs rows, cols >= 1");
    std::vector<Vec2> pos;
    pos.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) pos.push_back({c * spacing_m, r * spacing_m});
    return Topology(std::move(pos), range_m);
}

inline Topology build_random(int n, double width_m, double height_m, double range_m,
                             std::uint64_t seed) {
    if (n < 1) throw ConfigError("random topology needs n >= 1");
    if (width_m <= 0 || height_m <= 0) throw ConfigError("area must be positive");
    Rng rng(seed);
    std::vector<Vec2> pos;
    pos.reserve(n);
    for (int i = 0; i < n; ++i) pos.push_back({rng.uniform01() * width_m, rng.uniform01() * height_m});
    return Topology(std::move(pos), range_m);
}

}  // namespace macrsv
