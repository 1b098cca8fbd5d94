#include <catch2/catch_amalgamated.hpp>

#include "macrsv/channel.hpp"
#include "macrsv/messages.hpp"

using namespace macrsv;

namespace {
Topology line4() { return Topology({{0, 0}, {200, 0}, {400, 0}, {600, 0}}, 250.0); }
}  // namespace

TEST_CASE("single sender is heard cleanly by neighbors only") {
    Topology t = line4();
    std::vector<Transmission<Rts>> tx = {{1, Rts{1, 2, {0}}}};
    auto obs = resolve(tx, t);
    REQUIRE(obs.size() == 4);
    REQUIRE(obs[0].kind == ObsKind::Clean);
    REQUIRE(obs[0].message->dst == 2);
    REQUIRE(obs[1].kind == ObsKind::Silence);  // half duplex: senders hear nothing
    REQUIRE(obs[2].kind == ObsKind::Clean);
    REQUIRE(obs[3].kind == ObsKind::Silence);  // out of range
}

TEST_CASE("two senders collide where coverage overlaps") {
    Topology t = line4();
    std::vector<Transmission<Rts>> tx = {{0, Rts{0, 1, {0}}}, {2, Rts{2, 1, {0}}}};
    auto obs = resolve(tx, t);
    REQUIRE(obs[1].kind == ObsKind::Collision);
    REQUIRE_FALSE(obs[1].message.has_value());
    REQUIRE(obs[3].kind == ObsKind::Clean);  // node 3 hears only node 2
    REQUIRE(obs[3].message->src == 2);
    REQUIRE(obs[0].kind == ObsKind::Silence);
    REQUIRE(obs[2].kind == ObsKind::Silence);
}

TEST_CASE("no senders means silence everywhere") {
    Topology t = line4();
    auto obs = resolve(std::vector<Transmission<Rb>>{}, t);
    for (const auto& o : obs) REQUIRE(o.kind == ObsKind::Silence);
}

TEST_CASE("duplicate sender is a protocol bug") {
    Topology t = line4();
    std::vector<Transmission<Ncts>> tx = {{1, Ncts{1}}, {1, Ncts{1}}};
    REQUIRE_THROWS_AS(resolve(tx, t), DuplicateSender);
}

TEST_CASE("disjoint components never interfere") {
    Topology t({{0, 0}, {100, 0}, {5000, 0}, {5100, 0}}, 250.0);
    std::vector<Transmission<DataBurst>> tx = {{0, DataBurst{0, 1, 7, 0, 0}},
                                               {2, DataBurst{2, 3, 8, 0, 0}}};
    auto obs = resolve(tx, t);
    REQUIRE(obs[1].kind == ObsKind::Clean);
    REQUIRE(obs[1].message->packet_id == 7);
    REQUIRE(obs[3].kind == ObsKind::Clean);
    REQUIRE(obs[3].message->packet_id == 8);
}
