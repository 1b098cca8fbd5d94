#include <catch2/catch_amalgamated.hpp>

#include "macrsv/rsv_node.hpp"

using namespace macrsv;

namespace {

Packet pkt(std::uint64_t id, NodeId src, NodeId dst, int slots) {
    Packet p;
    p.id = id;
    p.src = src;
    p.dst = dst;
    p.length_slots = slots;
    p.payload_bytes = slots * 1044LL;
    p.arrival_time_s = 0.0;
    p.remaining_slots = slots;
    return p;
}

using CObs = Observation<ControlMessage>;

CObs clean(ControlMessage m) { return CObs::clean(std::move(m)); }

ProtocolOptions opts(double p = 1.0) {
    ProtocolOptions o;
    o.persistence_p = p;
    return o;
}

}  // namespace

TEST_CASE("idle node never contends") {
    RsvNode n(1, 4, opts());
    Rng rng(1);
    for (int i = 0; i < 8; ++i) REQUIRE_FALSE(n.choose_request(rng).has_value());
}

TEST_CASE("persistence coin gates contention") {
    RsvNode n(1, 4, opts(0.0));
    n.enqueue(pkt(1, 1, 2, 1));
    Rng rng(1);
    // p == 0 would never fire; use a tiny p and many triples to see both sides
    RsvNode n2(1, 4, opts(1.0));
    n2.enqueue(pkt(1, 1, 2, 1));
    auto req = n2.choose_request(rng);
    REQUIRE(req.has_value());
    REQUIRE(req->src == 1);
    REQUIRE(req->dst == 2);
    REQUIRE(req->slots.size() == 1);
    REQUIRE(n2.sent_rts_this_triple());
}

TEST_CASE("request asks for the ungranted remainder from the free set") {
    RsvNode n(1, 4, opts());
    n.enqueue(pkt(7, 1, 2, 3));
    Rng rng(5);
    auto req = n.choose_request(rng);
    REQUIRE(req.has_value());
    REQUIRE(req->slots.size() == 3);
    for (int s : req->slots) REQUIRE(contains(n.table().free_tx_set(), s));

    // grant two of the three, then the next triple asks for exactly one
    SlotSet granted = {req->slots[0], req->slots[1]};
    auto conf = n.on_ncts_minislot(clean(Cts{2, 1, granted}));
    REQUIRE(conf.has_value());
    REQUIRE(conf->slots == granted);
    n.end_of_triple();
    auto req2 = n.choose_request(rng);
    REQUIRE(req2.has_value());
    REQUIRE(req2->slots.size() == 1);
    for (int s : req2->slots) REQUIRE_FALSE(contains(granted, s));
}

TEST_CASE("fully granted packet stops contending for the frame") {
    RsvNode n(1, 4, opts());
    n.enqueue(pkt(7, 1, 2, 2));
    Rng rng(5);
    auto req = n.choose_request(rng);
    REQUIRE(req.has_value());
    auto conf = n.on_ncts_minislot(clean(Cts{2, 1, req->slots}));
    REQUIRE(conf.has_value());
    n.end_of_triple();
    REQUIRE_FALSE(n.choose_request(rng).has_value());
    // the grant expires with the frame, so contention resumes afterwards
    n.end_of_frame();
    REQUIRE(n.choose_request(rng).has_value());
}

TEST_CASE("packet larger than the free set withdraws the node for the frame") {
    RsvNode n(1, 3, opts());
    n.enqueue(pkt(7, 1, 2, 3));
    n.table().observe_fr(0);  // a neighbor's receiver owns slot 0
    Rng rng(5);
    REQUIRE_FALSE(n.choose_request(rng).has_value());
    REQUIRE(n.withdrawn());
    REQUIRE_FALSE(n.choose_request(rng).has_value());
    n.end_of_frame();
    n.table().observe_fr(0);
    REQUIRE(n.withdrawn() == false);
}

TEST_CASE("receiver grants the receivable subset under the partial policy") {
    RsvNode n(2, 4, opts());
    n.table().observe_ft(1);  // transmit-only slots cannot be granted
    auto reply = n.on_rts_minislot(clean(Rts{1, 2, {0, 1, 3}}));
    REQUIRE(reply.has_value());
    const Cts* cts = std::get_if<Cts>(&*reply);
    REQUIRE(cts != nullptr);
    REQUIRE(cts->src == 2);
    REQUIRE(cts->dst == 1);
    REQUIRE(cts->slots == SlotSet{0, 3});
}

TEST_CASE("all-or-nothing policy refuses partial grants") {
    ProtocolOptions o = opts();
    o.grant_policy = GrantPolicy::AllOrNothing;
    RsvNode n(2, 4, o);
    n.table().observe_ft(1);
    REQUIRE_FALSE(n.on_rts_minislot(clean(Rts{1, 2, {0, 1}})).has_value());
    auto reply = n.on_rts_minislot(clean(Rts{1, 2, {0, 3}}));
    REQUIRE(reply.has_value());
    REQUIRE(std::get_if<Cts>(&*reply)->slots == SlotSet{0, 3});
}

TEST_CASE("receiver with nothing grantable stays silent") {
    RsvNode n(2, 2, opts());
    n.table().observe_ft(0);
    n.table().observe_ft(1);
    REQUIRE_FALSE(n.on_rts_minislot(clean(Rts{1, 2, {0, 1}})).has_value());
}

TEST_CASE("rts collisions are jammed only by active receivers") {
    RsvNode quiet(2, 4, opts());
    REQUIRE_FALSE(quiet.on_rts_minislot(CObs::collision()).has_value());

    RsvNode busy(2, 4, opts());
    busy.table().set_rr(1, 9);
    auto reply = busy.on_rts_minislot(CObs::collision());
    REQUIRE(reply.has_value());
    REQUIRE(std::get_if<Ncts>(&*reply) != nullptr);

    ProtocolOptions o = opts();
    o.paranoid_ncts = true;
    RsvNode paranoid(2, 4, o);
    auto reply2 = paranoid.on_rts_minislot(CObs::collision());
    REQUIRE(reply2.has_value());
    REQUIRE(std::get_if<Ncts>(&*reply2) != nullptr);
}

TEST_CASE("foreign rts touching a receive reservation draws a jam") {
    RsvNode n(5, 4, opts());
    n.table().set_rr(2, 9);
    auto reply = n.on_rts_minislot(clean(Rts{1, 2, {2, 3}}));
    REQUIRE(reply.has_value());
    REQUIRE(std::get_if<Ncts>(&*reply) != nullptr);

    // disjoint foreign request passes silently and is remembered
    auto none = n.on_rts_minislot(clean(Rts{1, 2, {0, 3}}));
    REQUIRE_FALSE(none.has_value());
}

TEST_CASE("clean grant locks slots and is confirmed") {
    RsvNode n(1, 4, opts());
    n.enqueue(pkt(7, 1, 2, 2));
    Rng rng(5);
    auto req = n.choose_request(rng);
    REQUIRE(req.has_value());
    auto conf = n.on_ncts_minislot(clean(Cts{2, 1, req->slots}));
    REQUIRE(conf.has_value());
    REQUIRE(conf->src == 1);
    REQUIRE(conf->dst == 2);
    REQUIRE(conf->slots == req->slots);
    for (int s : req->slots) {
        REQUIRE(n.table().state(s) == SlotState::RT);
        REQUIRE(n.table().at(s).peer == 2);
        REQUIRE(n.table().at(s).packet_id == 7);
    }
}

TEST_CASE("grant outside the request is a protocol violation") {
    RsvNode n(1, 4, opts());
    n.enqueue(pkt(7, 1, 2, 1));
    Rng rng(5);
    auto req = n.choose_request(rng);
    REQUIRE(req.has_value());
    SlotSet bogus = {0, 1, 2, 3};
    REQUIRE_THROWS_AS(n.on_ncts_minislot(clean(Cts{2, 1, bogus})), ProtocolViolation);
}

TEST_CASE("foreign grant marks receive-only slots") {
    RsvNode n(1, 4, opts());
    n.enqueue(pkt(7, 1, 2, 1));
    Rng rng(5);
    auto req = n.choose_request(rng);
    REQUIRE(req.has_value());
    REQUIRE_FALSE(n.on_ncts_minislot(clean(Cts{5, 6, {0, 1, 2, 3}})).has_value());
    // own requested slot may coincide; FR only applies to untouched slots
    for (int s = 0; s < 4; ++s)
        REQUIRE((n.table().state(s) == SlotState::FR || contains(req->slots, s)));

    RsvNode bystander(9, 4, opts());
    bystander.overheard_cts(clean(Cts{5, 6, {1, 3}}));
    REQUIRE(bystander.table().state(1) == SlotState::FR);
    REQUIRE(bystander.table().state(3) == SlotState::FR);
    REQUIRE(bystander.table().state(0) == SlotState::FTR);
}

TEST_CASE("matching conf commits the receiver") {
    RsvNode n(2, 4, opts());
    auto reply = n.on_rts_minislot(clean(Rts{1, 2, {0, 3}}));
    REQUIRE(reply.has_value());
    n.on_conf_minislot(clean(Conf{1, 2, {0, 3}}));
    REQUIRE(n.table().state(0) == SlotState::RR);
    REQUIRE(n.table().at(0).peer == 1);
    REQUIRE(n.table().state(3) == SlotState::RR);
    REQUIRE(n.rr_slots() == SlotSet{0, 3});
}

TEST_CASE("mismatched conf leaves the pending grant uncommitted") {
    RsvNode n(2, 4, opts());
    REQUIRE(n.on_rts_minislot(clean(Rts{1, 2, {0, 3}})).has_value());
    n.on_conf_minislot(clean(Conf{1, 2, {0}}));  // subset, not the full grant
    REQUIRE(n.rr_slots().empty());
    n.end_of_triple();
    REQUIRE(n.table().state(0) == SlotState::FTR);
}

TEST_CASE("third-party conf blocks slots only for overheard requesters") {
    RsvNode n(9, 4, opts());
    REQUIRE_FALSE(n.on_rts_minislot(clean(Rts{1, 2, {0, 1, 2}})).has_value());
    // the confirmed subset, not the requested set, becomes transmit-only
    n.on_conf_minislot(clean(Conf{1, 2, {0, 2}}));
    REQUIRE(n.table().state(0) == SlotState::FT);
    REQUIRE(n.table().state(1) == SlotState::FTR);
    REQUIRE(n.table().state(2) == SlotState::FT);

    RsvNode fresh(9, 4, opts());
    // no overheard request on file: an unpaired conf is ignored
    fresh.on_conf_minislot(clean(Conf{1, 2, {0, 2}}));
    for (int s = 0; s < 4; ++s) REQUIRE(fresh.table().state(s) == SlotState::FTR);
}

TEST_CASE("beacons come from receive reservations only") {
    RsvNode n(2, 4, opts());
    n.table().set_rr(1, 7);
    auto rb = n.receive_beacon(1);
    REQUIRE(rb.has_value());
    REQUIRE(rb->receiver == 2);
    REQUIRE(rb->transmitter == 7);
    REQUIRE(rb->slot == 1);
    REQUIRE_FALSE(n.receive_beacon(0).has_value());
}

TEST_CASE("transmitter defers unless its own beacon arrives clean") {
    RsvNode n(7, 4, opts());
    n.table().set_rt(1, 2, 11);
    REQUIRE(n.rb_decision(1, clean(Rb{2, 7, 1})) == RbAction::Transmit);
    REQUIRE(n.rb_decision(1, clean(Rb{2, 8, 1})) == RbAction::DeferAndRelease);
    REQUIRE(n.rb_decision(1, CObs::collision()) == RbAction::DeferAndRelease);
    REQUIRE(n.rb_decision(1, CObs::silence()) == RbAction::DeferAndRelease);

    ProtocolOptions o = opts();
    o.rb_ablation = true;
    RsvNode blind(7, 4, o);
    blind.table().set_rt(1, 2, 11);
    REQUIRE(blind.rb_decision(1, CObs::collision()) == RbAction::Transmit);
}

TEST_CASE("deferral releases this and later slots of the same packet") {
    RsvNode n(7, 5, opts());
    n.table().set_rt(0, 2, 11);
    n.table().set_rt(1, 3, 12);
    n.table().set_rt(2, 2, 11);
    n.table().set_rt(4, 2, 11);
    REQUIRE(n.defer_and_release(2) == 2);
    REQUIRE(n.table().state(0) == SlotState::RT);  // earlier slot already used
    REQUIRE(n.table().state(1) == SlotState::RT);  // different packet untouched
    REQUIRE(n.table().state(2) == SlotState::FTR);
    REQUIRE(n.table().state(4) == SlotState::FTR);
}

TEST_CASE("bystanders learn receiver activity from overheard beacons") {
    RsvNode n(9, 4, opts());
    n.overheard_rb(2, clean(Rb{1, 5, 2}));
    REQUIRE(n.table().state(2) == SlotState::FR);
    n.overheard_rb(3, CObs::collision());
    REQUIRE(n.table().state(3) == SlotState::FTR);
    // own reservations are never downgraded
    n.table().set_rt(0, 2, 1);
    n.overheard_rb(0, clean(Rb{1, 5, 0}));
    REQUIRE(n.table().state(0) == SlotState::RT);
}

TEST_CASE("data, ack, and completion round trip") {
    RsvNode tx(1, 4, opts());
    RsvNode rx(2, 4, opts());
    tx.enqueue(pkt(7, 1, 2, 2));
    Rng rng(5);
    auto req = tx.choose_request(rng);
    REQUIRE(req.has_value());
    auto reply = rx.on_rts_minislot(clean(*req));
    REQUIRE(reply.has_value());
    auto conf = tx.on_ncts_minislot(clean(*reply));
    REQUIRE(conf.has_value());
    rx.on_conf_minislot(clean(*conf));

    int completed = 0;
    for (int s = 0; s < 4; ++s) {
        auto burst = tx.data_burst(s, 0);
        if (tx.table().state(s) != SlotState::RT) {
            REQUIRE_FALSE(burst.has_value());
            continue;
        }
        REQUIRE(burst.has_value());
        REQUIRE(burst->dst == 2);
        auto ack = rx.ack_phase(s, Observation<DataBurst>::clean(*burst));
        REQUIRE(ack.has_value());
        REQUIRE(ack->transmitter == 1);
        auto done = tx.transmitter_on_ack(s, clean(*ack));
        if (done.has_value()) {
            ++completed;
            REQUIRE(done->id == 7);
            REQUIRE(done->remaining_slots == 0);
            tx.remove_packet(7);
        }
    }
    REQUIRE(completed == 1);
    REQUIRE(tx.queue().empty());
}

TEST_CASE("receiver only acks clean bursts addressed to it") {
    RsvNode rx(2, 4, opts());
    rx.table().set_rr(1, 7);
    REQUIRE_FALSE(rx.ack_phase(1, Observation<DataBurst>::collision()).has_value());
    REQUIRE_FALSE(rx.ack_phase(1, Observation<DataBurst>::silence()).has_value());
    REQUIRE_FALSE(
        rx.ack_phase(1, Observation<DataBurst>::clean(DataBurst{7, 9, 1, 1, 0})).has_value());
    REQUIRE(rx.ack_phase(1, Observation<DataBurst>::clean(DataBurst{7, 2, 1, 1, 0})).has_value());
    REQUIRE_FALSE(
        rx.ack_phase(0, Observation<DataBurst>::clean(DataBurst{7, 2, 1, 0, 0})).has_value());
}

TEST_CASE("missing ack leaves the packet in flight") {
    RsvNode tx(1, 2, opts());
    tx.enqueue(pkt(7, 1, 2, 1));
    Rng rng(5);
    auto req = tx.choose_request(rng);
    REQUIRE(req.has_value());
    REQUIRE(tx.on_ncts_minislot(clean(Cts{2, 1, req->slots})).has_value());
    int slot = req->slots[0];
    REQUIRE_FALSE(tx.transmitter_on_ack(slot, CObs::silence()).has_value());
    REQUIRE_FALSE(tx.transmitter_on_ack(slot, clean(Ack{2, 9, slot})).has_value());
    REQUIRE(tx.queue().front().pkt.remaining_slots == 1);
    auto done = tx.transmitter_on_ack(slot, clean(Ack{2, 1, slot}));
    REQUIRE(done.has_value());
}

TEST_CASE("end of frame clears reservations but keeps the queue") {
    RsvNode n(1, 4, opts());
    n.enqueue(pkt(7, 1, 2, 2));
    n.table().set_rt(0, 2, 7);
    n.table().observe_fr(1);
    n.end_of_frame();
    for (int s = 0; s < 4; ++s) REQUIRE(n.table().state(s) == SlotState::FTR);
    REQUIRE(n.queue().size() == 1);
    REQUIRE(n.queue().front().granted_this_frame == 0);
}
