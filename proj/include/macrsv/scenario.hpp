#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "macrsv/analysis.hpp"
#include "macrsv/engine.hpp"
#include "macrsv/topology.hpp"

namespace macrsv {

enum class TopoKind { Grid, Random, Points };

struct TopoSpec {
    TopoKind kind = TopoKind::Grid;
    int rows = 1, cols = 2;
    double spacing_m = 200.0;
    double range_m = 250.0;
    int nodes = 2;
    double area_w_m = 500.0, area_h_m = 500.0;
    std::uint64_t placement_seed = 1;
    std::vector<Vec2> points;
};

struct Scenario {
    SimConfig sim;
    TopoSpec topo;
    bool has_analysis = false;
    AnalysisParams analysis;
    std::vector<double> analysis_loads;
};

inline Topology build_topology(const TopoSpec& ts) {
    switch (ts.kind) {
        case TopoKind::Grid:
            return build_grid_mesh(ts.rows, ts.cols, ts.spacing_m, ts.range_m);
        case TopoKind::Random:
            return build_random(ts.nodes, ts.area_w_m, ts.area_h_m, ts.range_m,
                                ts.placement_seed);
        case TopoKind::Points:
            return Topology(ts.points, ts.range_m);
    }
    throw ConfigError("unknown topology kind");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad number for '" + key + "': " + v);
    }
}

inline long long to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for '" + key + "': " + v);
    }
}

inline bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for '" + key + "': " + v);
}

inline std::vector<std::string> split_ws(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace detail

// Line-based scenario format: [section] headers, key = value pairs, '#' or
// ';' comments. Repeatable keys: flow, arrival, point, loads.
inline Scenario parse_scenario(const std::string& text) {
    using detail::split_ws;
    using detail::to_bool;
    using detail::to_double;
    using detail::to_int;

    Scenario sc;
    std::string section;
    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));

        if (section == "scenario") {
            if (key == "name") sc.sim.scenario_name = val;
            else if (key == "protocol") sc.sim.protocol = val;
            else if (key == "frames") sc.sim.frames = to_int(val, key);
            else if (key == "seed") sc.sim.seed = static_cast<std::uint64_t>(to_int(val, key));
            else if (key == "warmup_fraction") sc.sim.warmup_fraction = to_double(val, key);
            else throw ConfigError("unknown key '" + key + "' in [scenario]");
        } else if (section == "frame") {
            if (key == "triples") sc.sim.frame.triples_K = static_cast<int>(to_int(val, key));
            else if (key == "data_slots")
                sc.sim.frame.data_slots_N = static_cast<int>(to_int(val, key));
            else if (key == "control_bytes")
                sc.sim.frame.control_bytes = static_cast<int>(to_int(val, key));
            else if (key == "data_bytes")
                sc.sim.frame.data_payload_bytes = static_cast<int>(to_int(val, key));
            else if (key == "rate_bps") sc.sim.frame.channel_rate_bps = to_int(val, key);
            else throw ConfigError("unknown key '" + key + "' in [frame]");
        } else if (section == "protocol") {
            if (key == "persistence") sc.sim.options.persistence_p = to_double(val, key);
            else if (key == "grant_policy") {
                if (val == "partial") sc.sim.options.grant_policy = GrantPolicy::Partial;
                else if (val == "all_or_nothing")
                    sc.sim.options.grant_policy = GrantPolicy::AllOrNothing;
                else throw ConfigError("grant_policy must be partial or all_or_nothing");
            } else if (key == "paranoid_ncts") sc.sim.options.paranoid_ncts = to_bool(val, key);
            else throw ConfigError("unknown key '" + key + "' in [protocol]");
        } else if (section == "topology") {
            if (key == "kind") {
                if (val == "grid") sc.topo.kind = TopoKind::Grid;
                else if (val == "random") sc.topo.kind = TopoKind::Random;
                else if (val == "points") sc.topo.kind = TopoKind::Points;
                else throw ConfigError("topology kind must be grid, random, or points");
            } else if (key == "rows") sc.topo.rows = static_cast<int>(to_int(val, key));
            else if (key == "cols") sc.topo.cols = static_cast<int>(to_int(val, key));
            else if (key == "spacing_m") sc.topo.spacing_m = to_double(val, key);
            else if (key == "range_m") sc.topo.range_m = to_double(val, key);
            else if (key == "nodes") sc.topo.nodes = static_cast<int>(to_int(val, key));
            else if (key == "area_w_m") sc.topo.area_w_m = to_double(val, key);
            else if (key == "area_h_m") sc.topo.area_h_m = to_double(val, key);
            else if (key == "placement_seed")
                sc.topo.placement_seed = static_cast<std::uint64_t>(to_int(val, key));
            else if (key == "point") {
                auto xy = split_ws(val);
                if (xy.size() != 2) throw ConfigError("point needs 'x y'");
                sc.topo.points.push_back({to_double(xy[0], key), to_double(xy[1], key)});
            } else throw ConfigError("unknown key '" + key + "' in [topology]");
        } else if (section == "mobility") {
            if (key == "kind") {
                if (val == "static") sc.sim.mobility.kind = MobilityKind::Static;
                else if (val == "rwp") sc.sim.mobility.kind = MobilityKind::RandomWaypoint;
                else throw ConfigError("mobility kind must be static or rwp");
            } else if (key == "speed_mps") sc.sim.mobility.speed_mps = to_double(val, key);
            else if (key == "pause_s") sc.sim.mobility.pause_s = to_double(val, key);
            else if (key == "area_w_m") sc.sim.mobility.area_w = to_double(val, key);
            else if (key == "area_h_m") sc.sim.mobility.area_h = to_double(val, key);
            else throw ConfigError("unknown key '" + key + "' in [mobility]");
        } else if (section == "traffic") {
            if (key == "kind") {
                if (val == "flows") sc.sim.traffic.kind = TrafficKind::Flows;
                else if (val == "random") sc.sim.traffic.kind = TrafficKind::Random;
                else if (val == "script") sc.sim.traffic.kind = TrafficKind::Script;
                else throw ConfigError("traffic kind must be flows, random, or script");
            } else if (key == "packet_bytes")
                sc.sim.traffic.packet_bytes = static_cast<int>(to_int(val, key));
            else if (key == "offered_load_bps")
                sc.sim.traffic.offered_load_bps = to_double(val, key);
            else if (key == "flow") {
                auto f = split_ws(val);
                if (f.size() != 2) throw ConfigError("flow needs 'src dst'");
                sc.sim.traffic.flows.push_back({static_cast<NodeId>(to_int(f[0], key)),
                                                static_cast<NodeId>(to_int(f[1], key))});
            } else if (key == "arrival") {
                auto a = split_ws(val);
                if (a.size() != 4) throw ConfigError("arrival needs 'frame src dst bytes'");
                sc.sim.traffic.script.push_back({to_int(a[0], key),
                                                 static_cast<NodeId>(to_int(a[1], key)),
                                                 static_cast<NodeId>(to_int(a[2], key)),
                                                 static_cast<int>(to_int(a[3], key))});
            } else throw ConfigError("unknown key '" + key + "' in [traffic]");
        } else if (section == "analysis") {
            sc.has_analysis = true;
            if (key == "q") sc.analysis.q = to_double(val, key);
            else if (key == "p") sc.analysis.p = to_double(val, key);
            else if (key == "triples") sc.analysis.triples_K = static_cast<int>(to_int(val, key));
            else if (key == "data_slots")
                sc.analysis.data_slots_N = static_cast<int>(to_int(val, key));
            else if (key == "n_max") sc.analysis.n_max = static_cast<int>(to_int(val, key));
            else if (key == "loads") {
                sc.analysis_loads.clear();
                for (const auto& tok : split_ws(val))
                    sc.analysis_loads.push_back(to_double(tok, key));
            } else throw ConfigError("unknown key '" + key + "' in [analysis]");
        } else if (section.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

inline std::string dump_scenario(const Scenario& sc) {
    char buf[256];
    std::string out;
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out += "[scenario]\n";
    out += "name = " + sc.sim.scenario_name + "\n";
    out += "protocol = " + sc.sim.protocol + "\n";
    out += "frames = " + std::to_string(sc.sim.frames) + "\n";
    out += "seed = " + std::to_string(sc.sim.seed) + "\n";
    out += "warmup_fraction = " + num(sc.sim.warmup_fraction) + "\n";
    out += "\n[frame]\n";
    out += "triples = " + std::to_string(sc.sim.frame.triples_K) + "\n";
    out += "data_slots = " + std::to_string(sc.sim.frame.data_slots_N) + "\n";
    out += "control_bytes = " + std::to_string(sc.sim.frame.control_bytes) + "\n";
    out += "data_bytes = " + std::to_string(sc.sim.frame.data_payload_bytes) + "\n";
    out += "rate_bps = " + std::to_string(sc.sim.frame.channel_rate_bps) + "\n";
    out += "\n[protocol]\n";
    out += "persistence = " + num(sc.sim.options.persistence_p) + "\n";
    out += std::string("grant_policy = ") +
           (sc.sim.options.grant_policy == GrantPolicy::Partial ? "partial" : "all_or_nothing") +
           "\n";
    out += std::string("paranoid_ncts = ") + (sc.sim.options.paranoid_ncts ? "true" : "false") +
           "\n";
    out += "\n[topology]\n";
    switch (sc.topo.kind) {
        case TopoKind::Grid:
            out += "kind = grid\n";
            out += "rows = " + std::to_string(sc.topo.rows) + "\n";
            out += "cols = " + std::to_string(sc.topo.cols) + "\n";
            out += "spacing_m = " + num(sc.topo.spacing_m) + "\n";
            break;
        case TopoKind::Random:
            out += "kind = random\n";
            out += "nodes = " + std::to_string(sc.topo.nodes) + "\n";
            out += "area_w_m = " + num(sc.topo.area_w_m) + "\n";
            out += "area_h_m = " + num(sc.topo.area_h_m) + "\n";
            out += "placement_seed = " + std::to_string(sc.topo.placement_seed) + "\n";
            break;
        case TopoKind::Points:
            out += "kind = points\n";
            for (const auto& p : sc.topo.points)
                out += "point = " + num(p.x) + " " + num(p.y) + "\n";
            break;
    }
    out += "range_m = " + num(sc.topo.range_m) + "\n";
    out += "\n[mobility]\n";
    out += std::string("kind = ") +
           (sc.sim.mobility.kind == MobilityKind::Static ? "static" : "rwp") + "\n";
    if (sc.sim.mobility.kind != MobilityKind::Static) {
        out += "speed_mps = " + num(sc.sim.mobility.speed_mps) + "\n";
        out += "pause_s = " + num(sc.sim.mobility.pause_s) + "\n";
        out += "area_w_m = " + num(sc.sim.mobility.area_w) + "\n";
        out += "area_h_m = " + num(sc.sim.mobility.area_h) + "\n";
    }
    out += "\n[traffic]\n";
    switch (sc.sim.traffic.kind) {
        case TrafficKind::Flows: out += "kind = flows\n"; break;
        case TrafficKind::Random: out += "kind = random\n"; break;
        case TrafficKind::Script: out += "kind = script\n"; break;
    }
    out += "packet_bytes = " + std::to_string(sc.sim.traffic.packet_bytes) + "\n";
    out += "offered_load_bps = " + num(sc.sim.traffic.offered_load_bps) + "\n";
    for (const auto& f : sc.sim.traffic.flows)
        out += "flow = " + std::to_string(f.src) + " " + std::to_string(f.dst) + "\n";
    for (const auto& a : sc.sim.traffic.script)
        out += "arrival = " + std::to_string(a.frame) + " " + std::to_string(a.src) + " " +
               std::to_string(a.dst) + " " + std::to_string(a.bytes) + "\n";
    if (sc.has_analysis) {
        out += "\n[analysis]\n";
        out += "q = " + num(sc.analysis.q) + "\n";
        out += "p = " + num(sc.analysis.p) + "\n";
        out += "triples = " + std::to_string(sc.analysis.triples_K) + "\n";
        out += "data_slots = " + std::to_string(sc.analysis.data_slots_N) + "\n";
        if (sc.analysis.n_max > 0) out += "n_max = " + std::to_string(sc.analysis.n_max) + "\n";
        if (!sc.analysis_loads.empty()) {
            out += "loads =";
            for (double l : sc.analysis_loads) out += " " + num(l);
            out += "\n";
        }
    }
    return out;
}

}  // namespace macrsv
