#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "macrsv/errors.hpp"
#include "macrsv/types.hpp"

namespace macrsv {

struct Rts {
    NodeId src;
    NodeId dst;
    SlotSet slots;
};

struct Cts {
    NodeId src;
    NodeId dst;
    SlotSet slots;
};

struct Ncts {
    NodeId src;
};

struct Conf {
    NodeId src;
    NodeId dst;
    SlotSet slots;
};

struct Rb {
    NodeId receiver;
    NodeId transmitter;
    int slot;
};

struct Ack {
    NodeId receiver;
    NodeId transmitter;
    int slot;
};

using ControlMessage = std::variant<Rts, Cts, Ncts, Conf, Rb, Ack>;

// One data-slot burst: a single slot's worth of payload from one packet.
struct DataBurst {
    NodeId src;
    NodeId dst;
    std::uint64_t packet_id;
    int slot;
    int slice;
};

inline std::string slots_to_string(const SlotSet& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(s[i]);
    }
    return out;
}

inline SlotSet slots_from_string(const std::string& text) {
    SlotSet out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ';')) {
        if (!token.empty()) out.push_back(std::stoi(token));
    }
    normalize(out);
    return out;
}

inline std::string serialize(const ControlMessage& msg) {
    struct Visitor {
        std::string operator()(const Rts& m) const {
            return "RTS src=" + std::to_string(m.src) + " dst=" + std::to_string(m.dst) +
                   " slots=" + slots_to_string(m.slots);
        }
        std::string operator()(const Cts& m) const {
            return "CTS src=" + std::to_string(m.src) + " dst=" + std::to_string(m.dst) +
                   " slots=" + slots_to_string(m.slots);
        }
        std::string operator()(const Ncts& m) const {
            return "NCTS src=" + std::to_string(m.src);
        }
        std::string operator()(const Conf& m) const {
            return "CONF src=" + std::to_string(m.src) + " dst=" + std::to_string(m.dst) +
                   " slots=" + slots_to_string(m.slots);
        }
        std::string operator()(const Rb& m) const {
            return "RB rx=" + std::to_string(m.receiver) + " tx=" + std::to_string(m.transmitter) +
                   " slot=" + std::to_string(m.slot);
        }
        std::string operator()(const Ack& m) const {
            return "ACK rx=" + std::to_string(m.receiver) + " tx=" + std::to_string(m.transmitter) +
                   " slot=" + std::to_string(m.slot);
        }
    };
    return std::visit(Visitor{}, msg);
}

namespace detail {
inline int field_int(const std::string& text, const std::string& key) {
    auto pos = text.find(key + "=");
    if (pos == std::string::npos) throw ConfigError("missing field " + key + " in: " + text);
    return std::stoi(text.substr(pos + key.size() + 1));
}

inline std::string field_str(const std::string& text, const std::string& key) {
    auto pos = text.find(key + "=");
    if (pos == std::string::npos) throw ConfigError("missing field " + key + " in: " + text);
    auto start = pos + key.size() + 1;
    auto end = text.find(' ', start);
    return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
}
}  // namespace detail

inline ControlMessage parse_control_message(const std::string& text) {
    using detail::field_int;
    using detail::field_str;
    auto space = text.find(' ');
    std::string kind = text.substr(0, space);
    if (kind == "RTS")
        return Rts{field_int(text, "src"), field_int(text, "dst"),
                   slots_from_string(field_str(text, "slots"))};
    if (kind == "CTS")
        return Cts{field_int(text, "src"), field_int(text, "dst"),
                   slots_from_string(field_str(text, "slots"))};
    if (kind == "NCTS") return Ncts{field_int(text, "src")};
    if (kind == "CONF")
        return Conf{field_int(text, "src"), field_int(text, "dst"),
                    slots_from_string(field_str(text, "slots"))};
    if (kind == "RB")
        return Rb{field_int(text, "rx"), field_int(text, "tx"), field_int(text, "slot")};
    if (kind == "ACK")
        return Ack{field_int(text, "rx"), field_int(text, "tx"), field_int(text, "slot")};
    throw ConfigError("unknown control message: " + text);
}

enum class ObsKind { Silence, Clean, Collision };

template <typename M>
struct Observation {
    ObsKind kind = ObsKind::Silence;
    std::optional<M> message;

    static Observation silence() { return {ObsKind::Silence, std::nullopt}; }
    static Observation clean(M msg) { return {ObsKind::Clean, std::move(msg)}; }
    static Observation collision() { return {ObsKind::Collision, std::nullopt}; }
};

template <typename M>
struct Transmission {
    NodeId sender;
    M message;
};

}  // namespace macrsv
