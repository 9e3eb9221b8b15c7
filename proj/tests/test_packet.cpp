#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "outfox/counters.hpp"
#include "outfox/packet.hpp"

using namespace outfox;

namespace {

struct Chain {
    PacketContext ctx;
    std::vector<KemKeyPair> keys; // per layer, 0..l (last one is the receiver)
    std::vector<RouteHop> route;  // hops 0..l-1
    RouteHop receiver_info;
};

Chain make_chain(KemId kem, size_t layers, size_t msg_len, RandomSource& rng,
                 bool with_reply_terminal = false) {
    Chain c{PacketContext::make(kem, 128, layers, msg_len, rng.bytes(16)), {}, {}, {}};
    size_t kb = c.ctx.profile.k_bytes();
    for (size_t i = 0; i + 1 < layers; ++i) {
        c.keys.push_back(kem_keygen(c.ctx.suite, rng));
        c.route.push_back({rng.bytes(kb), c.keys.back().public_key, NextHop{rng.bytes(kb)}});
    }
    c.keys.push_back(kem_keygen(c.ctx.suite, rng));
    RoutingInfo terminal = NoRoute{};
    if (with_reply_terminal) terminal = Terminal{rng.bytes(kb), rng.bytes(kb)};
    c.receiver_info = {rng.bytes(kb), c.keys.back().public_key, terminal};
    return c;
}

/// Processes through every hop; returns the terminal result, checking each
/// intermediate Forward routing against the route.
ProcessResult run_chain(const Chain& c, Packet packet) {
    size_t l = c.ctx.profile.l();
    for (size_t i = 0; i < l; ++i) {
        ProcessResult r = packet_process(c.ctx, c.keys[i], i, false, packet);
        if (!std::holds_alternative<Forward>(r)) return r;
        auto& f = std::get<Forward>(r);
        CHECK(std::get<NextHop>(f.routing) == std::get<NextHop>(c.route[i].routing));
        packet = f.packet;
    }
    return packet_process(c.ctx, c.keys[l], l, true, packet);
}

} // namespace

TEST_CASE("serialized lengths equal the size formulas at every layer") {
    SeededRandom rng(uint64_t{31});
    for (KemId kem : {KemId::X25519, KemId::MLKEM768, KemId::XWING, KemId::TESTKEM}) {
        for (size_t layers = 2; layers <= 6; ++layers) {
            size_t l = layers - 1;
            Chain c = make_chain(kem, layers, 128, rng);
            const SizeProfile& pr = c.ctx.profile;
            size_t k = pr.k_bits, p = pr.p_bits;

            CreateTrace trace;
            Packet pkt = packet_create(c.ctx, c.route, rng.bytes(128), c.receiver_info,
                                       std::nullopt, rng, &trace);
            REQUIRE(trace.layers.size() == layers);
            CHECK(pkt.to_bytes() == trace.layers[0].to_bytes());
            for (size_t i = 0; i <= l; ++i) {
                size_t header_bits = 4 * k + (l - i + 1) * p + 2 * (l - i) * k;
                size_t payload_bits = 6 * k + 128 * 8 + (l + 1) * p + 2 * l * k;
                CHECK(pr.header_len(i) == header_bits / 8);
                CHECK(pr.payload_len() == payload_bits / 8);
                Bytes wire = trace.layers[i].to_bytes();
                CHECK(wire.size() == (header_bits + payload_bits) / 8);
                CHECK(trace.layers[i].header.to_bytes().size() == header_bits / 8);
                CHECK(trace.layers[i].payload.size() == payload_bits / 8);
            }
            CHECK(pr.surb_len() == (5 * k + (l + 1) * p + 2 * l * k) / 8);
            // each processed layer removes exactly p + 2k bits of header
            for (size_t i = 0; i + 1 <= l; ++i)
                CHECK(pr.header_len(i) - pr.header_len(i + 1) == (p + 2 * k) / 8);
        }
    }
}

TEST_CASE("size spot values for the x25519 profile with four mix layers") {
    SizeProfile pr = SizeProfile::make(suite(KemId::X25519), 128, 5, 1024);
    CHECK(pr.header_len(0) == 352);
    CHECK(pr.header_len(4) == 96); // 4k + p at the innermost layer
    CHECK(pr.payload_len() == 1408);
    CHECK(pr.surb_len() == 368);
    auto rows = layer_sizes(pr);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].packet == 1760);
    CHECK(rows[4].packet == 1504);
}

TEST_CASE("packet creation uses L encapsulations and processing one decapsulation") {
    SeededRandom rng(uint64_t{32});
    Chain c = make_chain(KemId::X25519, 5, 256, rng);
    Bytes msg = rng.bytes(256);

    reset_op_counters();
    Packet pkt = packet_create(c.ctx, c.route, msg, c.receiver_info, std::nullopt, rng);
    CHECK(op_counters().kem_encap == 5);
    CHECK(op_counters().kem_decap == 0);

    reset_op_counters();
    ProcessResult r = packet_process(c.ctx, c.keys[0], 0, false, pkt);
    CHECK(std::holds_alternative<Forward>(r));
    CHECK(op_counters().kem_decap == 1);
    CHECK(op_counters().kem_encap == 0);
    CHECK(op_counters().packet_process == 1);
}

TEST_CASE("request roundtrips across two to six layers for every suite") {
    SeededRandom rng(uint64_t{33});
    for (KemId kem : {KemId::X25519, KemId::TESTKEM}) {
        for (size_t layers = 2; layers <= 6; ++layers) {
            Chain c = make_chain(kem, layers, 512, rng);
            Bytes msg = rng.bytes(512);
            Packet pkt = packet_create(c.ctx, c.route, msg, c.receiver_info, std::nullopt, rng);
            ProcessResult r = run_chain(c, pkt);
            REQUIRE(std::holds_alternative<Deliver>(r));
            auto& d = std::get<Deliver>(r);
            CHECK(d.msg == msg);
            CHECK_FALSE(d.surb);
            CHECK(std::holds_alternative<NoRoute>(d.routing));
        }
    }
}

TEST_CASE("degenerate single-layer packets roundtrip") {
    SeededRandom rng(uint64_t{34});
    Chain c = make_chain(KemId::X25519, 1, 64, rng);
    Bytes msg = rng.bytes(64);
    Packet pkt = packet_create(c.ctx, c.route, msg, c.receiver_info, std::nullopt, rng);
    ProcessResult r = packet_process(c.ctx, c.keys[0], 0, true, pkt);
    REQUIRE(std::holds_alternative<Deliver>(r));
    CHECK(std::get<Deliver>(r).msg == msg);
}

TEST_CASE("creation is byte-identical across runs with the deterministic suite") {
    auto build = [] {
        SeededRandom rng(uint64_t{35});
        Chain c = make_chain(KemId::TESTKEM, 5, 100, rng);
        return packet_create(c.ctx, c.route, Bytes(100, 0x42), c.receiver_info, std::nullopt,
                             rng)
            .to_bytes();
    };
    CHECK(build() == build());
}

TEST_CASE("create rejects wrong message or route lengths") {
    SeededRandom rng(uint64_t{36});
    Chain c = make_chain(KemId::X25519, 3, 50, rng);
    CHECK_THROWS_AS(
        packet_create(c.ctx, c.route, Bytes(49, 0), c.receiver_info, std::nullopt, rng), Error);
    std::vector<RouteHop> short_route(c.route.begin(), c.route.end() - 1);
    CHECK_THROWS_AS(
        packet_create(c.ctx, short_route, Bytes(50, 0), c.receiver_info, std::nullopt, rng),
        Error);
}

TEST_CASE("every single-bit header flip is caught by the next honest hop") {
    SeededRandom rng(uint64_t{37});
    Chain c = make_chain(KemId::X25519, 3, 64, rng);
    Packet pkt = packet_create(c.ctx, c.route, rng.bytes(64), c.receiver_info, std::nullopt,
                               rng);
    Bytes header = pkt.header.to_bytes();
    size_t fails = 0, total = 0;
    for (size_t byte = 0; byte < header.size(); ++byte)
        for (int bit = 0; bit < 8; ++bit) {
            Bytes mutated = header;
            mutated[byte] ^= uint8_t(1u << bit);
            Packet m{Header::parse(c.ctx.profile, 0, mutated), pkt.payload};
            ProcessResult r = packet_process(c.ctx, c.keys[0], 0, false, m);
            fails += std::holds_alternative<HeaderFail>(r);
            ++total;
        }
    CHECK(fails == total);
}

TEST_CASE("sampled header flips at deeper layers are caught as well") {
    SeededRandom rng(uint64_t{38});
    Chain c = make_chain(KemId::X25519, 4, 64, rng);
    CreateTrace trace;
    packet_create(c.ctx, c.route, rng.bytes(64), c.receiver_info, std::nullopt, rng, &trace);
    for (size_t layer = 1; layer < 4; ++layer) {
        const Packet& at = trace.layers[layer];
        Bytes header = at.header.to_bytes();
        size_t fails = 0;
        for (int i = 0; i < 256; ++i) {
            size_t pos = rng.bytes(2)[0] * 256 + rng.bytes(1)[0];
            size_t byte = pos % header.size();
            int bit = static_cast<int>(rng.bytes(1)[0] % 8);
            Bytes mutated = header;
            mutated[byte] ^= uint8_t(1u << bit);
            Packet m{Header::parse(c.ctx.profile, layer, mutated), at.payload};
            ProcessResult r = packet_process(c.ctx, c.keys[layer], layer, layer == 3, m);
            fails += std::holds_alternative<HeaderFail>(r);
        }
        CHECK(fails == 256);
    }
}

TEST_CASE("payload flips pass intermediate hops and fail at the terminal user") {
    SeededRandom rng(uint64_t{39});
    Chain c = make_chain(KemId::X25519, 4, 128, rng);
    Bytes msg = rng.bytes(128);
    size_t terminal_rejections = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Packet pkt = packet_create(c.ctx, c.route, msg, c.receiver_info, std::nullopt, rng);
        size_t hop = rng.bytes(1)[0] % 3;
        Packet cur = pkt;
        for (size_t i = 0; i < 3; ++i) {
            if (i == hop) {
                size_t byte = (rng.bytes(1)[0] * 256 + rng.bytes(1)[0]) % cur.payload.size();
                cur.payload[byte] ^= uint8_t(1u << (rng.bytes(1)[0] % 8));
            }
            ProcessResult r = packet_process(c.ctx, c.keys[i], i, false, cur);
            // payload-only tampering must never look like a header failure
            REQUIRE(std::holds_alternative<Forward>(r));
            cur = std::get<Forward>(r).packet;
        }
        ProcessResult r = packet_process(c.ctx, c.keys[3], 3, true, cur);
        terminal_rejections += std::holds_alternative<PayloadFail>(r);
    }
    CHECK(terminal_rejections == 200);
}

TEST_CASE("processing with another party's key is a header failure") {
    SeededRandom rng(uint64_t{40});
    Chain c = make_chain(KemId::X25519, 3, 64, rng);
    Packet pkt = packet_create(c.ctx, c.route, rng.bytes(64), c.receiver_info, std::nullopt,
                               rng);
    for (int i = 0; i < 20; ++i) {
        KemKeyPair other = kem_keygen(c.ctx.suite, rng);
        ProcessResult r = packet_process(c.ctx, other, 0, false, pkt);
        CHECK(std::holds_alternative<HeaderFail>(r));
    }
}

TEST_CASE("forwarded output is the creation-time inner layer and shares no bytes") {
    SeededRandom rng(uint64_t{41});
    for (int trial = 0; trial < 50; ++trial) {
        Chain c = make_chain(KemId::X25519, 4, 96, rng);
        CreateTrace trace;
        Packet pkt = packet_create(c.ctx, c.route, rng.bytes(96), c.receiver_info, std::nullopt,
                                   rng, &trace);
        ProcessResult r = packet_process(c.ctx, c.keys[0], 0, false, pkt);
        REQUIRE(std::holds_alternative<Forward>(r));
        Bytes inner = std::get<Forward>(r).packet.to_bytes();
        CHECK(inner == trace.layers[1].to_bytes());
        auto absent = [&](const Bytes& needle) {
            return std::search(inner.begin(), inner.end(), needle.begin(), needle.end()) ==
                   inner.end();
        };
        CHECK(absent(pkt.header.kem_ct));
        CHECK(absent(pkt.header.beta));
        CHECK(absent(pkt.header.gamma));
    }
}

TEST_CASE("surb sizes, identifiers and reply roundtrip") {
    SeededRandom rng(uint64_t{42});
    Chain c = make_chain(KemId::X25519, 5, 1024, rng);
    auto created = surb_create(c.ctx, c.route, c.receiver_info, rng);
    CHECK(created.surb.to_bytes().size() == c.ctx.profile.surb_len());
    CHECK(created.secrets.payload_keys.size() == 5);

    Bytes msg = rng.bytes(1024);
    Packet reply = surb_use(c.ctx, created.surb, msg);
    CHECK(reply.to_bytes().size() == c.ctx.profile.packet_len(0)); // same as a request

    // deterministic: no fresh randomness in surb_use
    CHECK(surb_use(c.ctx, created.surb, msg).to_bytes() == reply.to_bytes());

    Packet cur = reply;
    for (size_t i = 0; i < 4; ++i) {
        ProcessResult r = packet_process(c.ctx, c.keys[i], i, false, cur);
        REQUIRE(std::holds_alternative<Forward>(r));
        cur = std::get<Forward>(r).packet;
    }
    CHECK(surb_check(cur, created.id));
    auto recovered = surb_recover(c.ctx, cur, created.secrets);
    REQUIRE(recovered);
    CHECK(*recovered == msg);
}

TEST_CASE("surb_check matches only the generating pair and ignores the payload") {
    SeededRandom rng(uint64_t{43});
    Chain c = make_chain(KemId::TESTKEM, 3, 64, rng);
    std::vector<SurbCreateResult> surbs;
    for (int i = 0; i < 50; ++i) surbs.push_back(surb_create(c.ctx, c.route, c.receiver_info, rng));
    std::set<Bytes> ids;
    for (auto& s : surbs) ids.insert(s.id.digest);
    CHECK(ids.size() == surbs.size()); // fresh randomness, distinct identifiers

    for (size_t a = 0; a < surbs.size(); ++a) {
        Packet reply = surb_use(c.ctx, surbs[a].surb, Bytes(64, 1));
        Packet cur = reply;
        for (size_t i = 0; i < 2; ++i)
            cur = std::get<Forward>(packet_process(c.ctx, c.keys[i], i, false, cur)).packet;
        for (size_t b = 0; b < surbs.size(); ++b)
            CHECK(surb_check(cur, surbs[b].id) == (a == b));
        cur.payload[7] ^= 0x10;
        CHECK(surb_check(cur, surbs[a].id)); // header-only check
    }
}

TEST_CASE("surb_recover rejects tampered payloads and foreign secrets") {
    SeededRandom rng(uint64_t{44});
    Chain c = make_chain(KemId::X25519, 3, 128, rng);
    size_t rejects = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto s = surb_create(c.ctx, c.route, c.receiver_info, rng);
        Packet cur = surb_use(c.ctx, s.surb, rng.bytes(128));
        size_t flip_at = rng.bytes(1)[0] % 3; // before hop 0, 1 or after both
        for (size_t i = 0; i < 2; ++i) {
            if (i == flip_at) cur.payload[rng.bytes(1)[0] % cur.payload.size()] ^= 1;
            cur = std::get<Forward>(packet_process(c.ctx, c.keys[i], i, false, cur)).packet;
        }
        if (flip_at == 2) cur.payload[rng.bytes(1)[0] % cur.payload.size()] ^= 1;
        rejects += !surb_recover(c.ctx, cur, s.secrets);
    }
    CHECK(rejects == 100);

    auto s1 = surb_create(c.ctx, c.route, c.receiver_info, rng);
    auto s2 = surb_create(c.ctx, c.route, c.receiver_info, rng);
    Packet cur = surb_use(c.ctx, s1.surb, Bytes(128, 3));
    for (size_t i = 0; i < 2; ++i)
        cur = std::get<Forward>(packet_process(c.ctx, c.keys[i], i, false, cur)).packet;
    CHECK_FALSE(surb_recover(c.ctx, cur, s2.secrets));
}

TEST_CASE("surb secrets are consumed by a successful recover") {
    SeededRandom rng(uint64_t{45});
    Chain c = make_chain(KemId::X25519, 2, 64, rng);
    auto s = surb_create(c.ctx, c.route, c.receiver_info, rng);
    Packet cur = surb_use(c.ctx, s.surb, Bytes(64, 9));
    cur = std::get<Forward>(packet_process(c.ctx, c.keys[0], 0, false, cur)).packet;
    REQUIRE(surb_recover(c.ctx, cur, s.secrets));
    CHECK(s.secrets.payload_keys.empty());
}

TEST_CASE("request packets carrying a reply block deliver both message and block") {
    SeededRandom rng(uint64_t{46});
    Chain fwd = make_chain(KemId::X25519, 4, 256, rng, /*with_reply_terminal=*/true);
    Chain rev = make_chain(KemId::X25519, 4, 256, rng);
    auto s = surb_create(rev.ctx, rev.route, rev.receiver_info, rng);
    Bytes msg = rng.bytes(256);
    Packet pkt = packet_create(fwd.ctx, fwd.route, msg, fwd.receiver_info, s.surb, rng);
    ProcessResult r = run_chain(fwd, pkt);
    REQUIRE(std::holds_alternative<Deliver>(r));
    auto& d = std::get<Deliver>(r);
    CHECK(d.msg == msg);
    REQUIRE(d.surb);
    CHECK(d.surb->to_bytes() == s.surb.to_bytes());
    CHECK(std::get<Terminal>(d.routing) == std::get<Terminal>(fwd.receiver_info.routing));
}

TEST_CASE("request and reply packets are structurally indistinguishable per layer") {
    SeededRandom rng(uint64_t{47});
    Chain c = make_chain(KemId::X25519, 4, 512, rng);
    Packet request = packet_create(c.ctx, c.route, rng.bytes(512), c.receiver_info,
                                   std::nullopt, rng);
    auto s = surb_create(c.ctx, c.route, c.receiver_info, rng);
    Packet reply = surb_use(c.ctx, s.surb, rng.bytes(512));

    reset_op_counters();
    Packet rq = request, rp = reply;
    for (size_t i = 0; i < 3; ++i) {
        CHECK(rq.to_bytes().size() == rp.to_bytes().size());
        rq = std::get<Forward>(packet_process(c.ctx, c.keys[i], i, false, rq)).packet;
        rp = std::get<Forward>(packet_process(c.ctx, c.keys[i], i, false, rp)).packet;
    }
    CHECK(rq.to_bytes().size() == rp.to_bytes().size());
    // both directions went through the one shared processing routine
    CHECK(op_counters().packet_process == 6);
}

TEST_CASE("routing info encodings are fixed width and strict") {
    SizeProfile pr = SizeProfile::make(suite(KemId::X25519), 128, 4, 64);
    SeededRandom rng(uint64_t{48});
    Bytes id1 = rng.bytes(16), id2 = rng.bytes(16);

    Bytes hop = encode_next_hop(pr, NextHop{id1});
    CHECK(hop.size() == 16);
    auto back = decode_next_hop(pr, hop);
    REQUIRE(back);
    CHECK(std::get<NextHop>(*back).party == id1);

    Bytes term = encode_terminal(pr, Terminal{id1, id2});
    CHECK(term.size() == 48);
    auto t = decode_terminal(pr, term);
    REQUIRE(t);
    CHECK(std::get<Terminal>(*t) == Terminal{id1, id2});

    Bytes none = encode_terminal(pr, NoRoute{});
    CHECK(all_zero(none));
    auto n = decode_terminal(pr, none);
    REQUIRE(n);
    CHECK(std::holds_alternative<NoRoute>(*n));

    term[40] ^= 0x04; // stray bit in the flag block
    CHECK_FALSE(decode_terminal(pr, term));
}

TEST_CASE("packet and header parsers reject wrong lengths") {
    SizeProfile pr = SizeProfile::make(suite(KemId::X25519), 128, 3, 64);
    Bytes too_short(pr.packet_len(0) - 1, 0);
    CHECK_THROWS_AS(Packet::parse(pr, 0, too_short), Error);
    Bytes exact(pr.packet_len(1), 0);
    CHECK_THROWS_AS(Packet::parse(pr, 0, exact), Error); // layer mismatch
    CHECK(Packet::parse(pr, 1, exact).to_bytes() == exact);
}
