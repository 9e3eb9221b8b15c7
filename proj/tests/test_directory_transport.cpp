#include <doctest.h>

#include <algorithm>
#include <cstdio>

#include "outfox/directory.hpp"
#include "outfox/keyfile.hpp"
#include "outfox/rng.hpp"
#include "outfox/transport.hpp"

using namespace outfox;

TEST_CASE("directory records are write-once") {
    SeededRandom rng(uint64_t{50});
    Directory dir;
    Bytes party = rng.bytes(16), pk = rng.bytes(32);
    dir.register_key(party, KemId::X25519, pk, Privacy::Public);
    CHECK(dir.has(party));
    CHECK_THROWS_AS(dir.register_key(party, KemId::X25519, pk, Privacy::Public), Error);
    CHECK_THROWS_AS(dir.register_key(rng.bytes(16), KemId::X25519, rng.bytes(31),
                                     Privacy::Public),
                    Error); // length must match the suite
    auto got = dir.retrieve(rng.bytes(16), party);
    REQUIRE(got);
    CHECK(*got == pk);
}

TEST_CASE("private registration is open to any party and unknown targets are absent") {
    SeededRandom rng(uint64_t{51});
    Directory dir;
    dir.register_key(rng.bytes(16), KemId::TESTKEM, rng.bytes(32), Privacy::Private);
    CHECK_FALSE(dir.retrieve(rng.bytes(16), rng.bytes(16)));
}

TEST_CASE("the audit log names public targets and never private ones") {
    SeededRandom rng(uint64_t{52});
    Directory dir;
    std::vector<Bytes> pub, priv;
    for (int i = 0; i < 20; ++i) {
        pub.push_back(rng.bytes(16));
        dir.register_key(pub.back(), KemId::X25519, rng.bytes(32), Privacy::Public);
        priv.push_back(rng.bytes(16));
        dir.register_key(priv.back(), KemId::X25519, rng.bytes(32), Privacy::Private);
    }
    Bytes requester = rng.bytes(16);
    for (int i = 0; i < 1000; ++i) {
        CHECK(dir.retrieve(requester, priv[i % priv.size()]));
        CHECK(dir.retrieve(requester, pub[i % pub.size()]));
    }
    size_t named_private = 0, named_public = 0;
    for (const auto& e : dir.audit_log()) {
        if (!e.target) continue;
        named_private += std::count(priv.begin(), priv.end(), *e.target);
        named_public += std::count(pub.begin(), pub.end(), *e.target);
    }
    CHECK(named_private == 0);
    CHECK(named_public == 1000);
    // probing an unknown party looks exactly like a private retrieval
    dir.retrieve(requester, rng.bytes(16));
    CHECK_FALSE(dir.audit_log().back().target);
}

TEST_CASE("directory exports roundtrip through json") {
    SeededRandom rng(uint64_t{53});
    Directory dir;
    Bytes a = rng.bytes(16), b = rng.bytes(16);
    dir.register_key(a, KemId::X25519, rng.bytes(32), Privacy::Public);
    dir.register_key(b, KemId::MLKEM768, rng.bytes(1184), Privacy::Private);
    Directory other;
    other.import_json(dir.export_json());
    CHECK(other.has(a));
    CHECK(other.has(b));
    CHECK(other.export_json() == dir.export_json());
    CHECK_THROWS_AS(other.import_json("{}"), Error);
}

TEST_CASE("transport delivers bytes exactly and leaks only lengths") {
    SeededRandom rng(uint64_t{54});
    Transport t;
    Bytes a = rng.bytes(16), b = rng.bytes(16);
    Bytes got_from, got_payload;
    t.attach(a, [](const Bytes&, const Bytes&) {});
    t.attach(b, [&](const Bytes& from, const Bytes& payload) {
        got_from = from;
        got_payload = payload;
    });
    Bytes msg = rng.bytes(300);
    t.send(a, b, msg);
    CHECK(got_from == a);
    CHECK(got_payload == msg);
    REQUIRE(t.events().size() == 1);
    CHECK(t.events()[0].length == 300);
    CHECK(t.events()[0].action == ChannelAction::Delivered);
    CHECK_THROWS_AS(t.send(a, rng.bytes(16), msg), Error);
}

TEST_CASE("drop, tamper and duplicate hooks act at the recipient boundary") {
    SeededRandom rng(uint64_t{55});
    Transport t;
    Bytes a = rng.bytes(16), b = rng.bytes(16);
    std::vector<Bytes> received;
    t.attach(a, [](const Bytes&, const Bytes&) {});
    t.attach(b, [&](const Bytes&, const Bytes& payload) { received.push_back(payload); });
    Bytes msg = rng.bytes(64);

    t.install_hook({b, ChannelAction::Dropped});
    t.send(a, b, msg);
    CHECK(received.empty()); // dropped, and the hook was one-shot

    AdversaryHook tamper{b, ChannelAction::Tampered};
    tamper.byte_index = 3;
    tamper.xor_mask = 0x80;
    t.install_hook(tamper);
    t.send(a, b, msg);
    REQUIRE(received.size() == 1);
    CHECK(received[0][3] == (msg[3] ^ 0x80));

    t.install_hook({b, ChannelAction::Duplicated});
    t.send(a, b, msg);
    CHECK(received.size() == 3);
    CHECK(received[1] == received[2]);

    uint64_t id = t.install_hook({b, ChannelAction::Dropped});
    t.remove_hook(id);
    t.send(a, b, msg);
    CHECK(received.size() == 4);
}

TEST_CASE("key files roundtrip and reject corruption") {
    SeededRandom rng(uint64_t{56});
    KeyRecord rec{KemId::MLKEM768, false, rng.bytes(1184)};
    Bytes wire = encode_key(rec);
    CHECK(wire.size() == 4 + 1 + 2 + 1184);
    KeyRecord back = decode_key(wire);
    CHECK(back.id == rec.id);
    CHECK_FALSE(back.is_secret);
    CHECK(back.key == rec.key);

    Bytes bad_magic = wire;
    bad_magic[0] ^= 1;
    CHECK_THROWS_AS(decode_key(bad_magic), Error);
    Bytes truncated(wire.begin(), wire.end() - 1);
    CHECK_THROWS_AS(decode_key(truncated), Error);

    std::string path = "/tmp/outfox-test-key.sk";
    KeyRecord sec{KemId::X25519, true, rng.bytes(32)};
    write_key_file(path, sec);
    KeyRecord loaded = read_key_file(path);
    CHECK(loaded.is_secret);
    CHECK(loaded.key == sec.key);
    std::remove(path.c_str());
}

TEST_CASE("seeded randomness is reproducible and system randomness fills") {
    SeededRandom a(uint64_t{57}), b(uint64_t{57}), c(uint64_t{58});
    CHECK(a.bytes(64) == b.bytes(64));
    CHECK(a.bytes(64) == b.bytes(64)); // stays in lockstep
    CHECK(a.bytes(32) != c.bytes(32));
    SystemRandom sys;
    CHECK(sys.bytes(32) != sys.bytes(32));
}
