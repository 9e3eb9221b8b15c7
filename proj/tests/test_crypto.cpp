#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "outfox/aead.hpp"
#include "outfox/counters.hpp"
#include "outfox/kdf.hpp"
#include "outfox/kem.hpp"
#include "outfox/lioness.hpp"

#include "crypto_oracle.inc"

using namespace outfox;
using outfox::testing::FixedRandom;

namespace {
Bytes hx(const char* s) { return from_hex(s); }
} // namespace

TEST_CASE("kdf matches an independently computed hkdf-sha256 vector") {
    KdfContext ctx{hx(kHkdfInfoCt), hx(kHkdfInfoPk), hx(kHkdfInfoSid)};
    CHECK(kdf_derive(hx(kHkdfShk), ctx, 48) == hx(kHkdfOkm48));
}

TEST_CASE("kdf is a pure function of its inputs") {
    KdfContext ctx{hx(kHkdfInfoCt), hx(kHkdfInfoPk), hx(kHkdfInfoSid)};
    Bytes shk = hx(kHkdfShk);
    CHECK(kdf_derive(shk, ctx, 64) == kdf_derive(shk, ctx, 64));

    KdfContext other = ctx;
    other.session_id[0] ^= 1;
    CHECK(kdf_derive(shk, ctx, 64) != kdf_derive(shk, other, 64));

    LayerKeys keys = derive_layer_keys(shk, ctx, 32, 16);
    Bytes full = kdf_derive(shk, ctx, 48);
    CHECK(keys.header_key == Bytes(full.begin(), full.begin() + 32));
    CHECK(keys.payload_key == Bytes(full.begin() + 32, full.end()));
}

TEST_CASE("kdf output length bounds") {
    KdfContext ctx{{}, {}, {}};
    CHECK(kdf_derive(hx(kHkdfShk), ctx, kdf_max_output).size() == kdf_max_output);
    CHECK_THROWS_AS(kdf_derive(hx(kHkdfShk), ctx, kdf_max_output + 1), Error);
}

TEST_CASE("aead matches an independently computed encrypt-then-mac vector") {
    Sealed s = aead_seal(hx(kAeadKey), hx(kAeadPt), 16);
    CHECK(s.ciphertext == hx(kAeadBeta));
    CHECK(s.tag == hx(kAeadGamma16));
    auto pt = aead_open(hx(kAeadKey), s.ciphertext, s.tag);
    REQUIRE(pt);
    CHECK(*pt == hx(kAeadPt));
}

TEST_CASE("aead tag has the configured length and ciphertext the plaintext length") {
    SeededRandom rng(uint64_t{11});
    Bytes key = rng.bytes(aead_key_len);
    Bytes pt = rng.bytes(200);
    for (size_t tl : {size_t{16}, size_t{32}}) {
        Sealed s = aead_seal(key, pt, tl);
        CHECK(s.tag.size() == tl);
        CHECK(s.ciphertext.size() == pt.size());
    }
    CHECK_THROWS_AS(aead_seal(key, pt, 8), Error);
    CHECK_THROWS_AS(aead_seal(rng.bytes(16), pt, 16), Error);
}

TEST_CASE("aead rejects every single-bit flip of ciphertext or tag") {
    SeededRandom rng(uint64_t{12});
    Bytes key = rng.bytes(aead_key_len);
    Bytes pt = rng.bytes(64);
    Sealed s = aead_seal(key, pt, 16);
    for (size_t byte = 0; byte < s.ciphertext.size(); ++byte)
        for (int bit = 0; bit < 8; ++bit) {
            Bytes c = s.ciphertext;
            c[byte] ^= uint8_t(1u << bit);
            CHECK_FALSE(aead_open(key, c, s.tag));
        }
    for (size_t byte = 0; byte < s.tag.size(); ++byte)
        for (int bit = 0; bit < 8; ++bit) {
            Bytes t = s.tag;
            t[byte] ^= uint8_t(1u << bit);
            CHECK_FALSE(aead_open(key, s.ciphertext, t));
        }
}

TEST_CASE("aead rejects under any key other than the sealing key") {
    SeededRandom rng(uint64_t{13});
    Bytes key = rng.bytes(aead_key_len);
    Sealed s = aead_seal(key, rng.bytes(64), 16);
    size_t accepted = 0;
    for (int i = 0; i < 256; ++i)
        if (aead_open(rng.bytes(aead_key_len), s.ciphertext, s.tag)) ++accepted;
    CHECK(accepted == 0);
}

TEST_CASE("lioness matches an independently computed four-round vector") {
    CHECK(se_encrypt(hx(kLionessKey), hx(kLionessPt)) == hx(kLionessCt));
    CHECK(se_decrypt(hx(kLionessKey), hx(kLionessCt)) == hx(kLionessPt));
}

TEST_CASE("lioness is a two-sided permutation that preserves length") {
    SeededRandom rng(uint64_t{14});
    for (size_t len : {size_t{33}, size_t{100}, size_t{1024}, size_t{4096}}) {
        Bytes key = rng.bytes(16);
        Bytes m = rng.bytes(len);
        Bytes c = se_encrypt(key, m);
        CHECK(c.size() == len);
        CHECK(se_decrypt(key, c) == m);
        CHECK(se_encrypt(key, se_decrypt(key, m)) == m); // enc of a decryption
    }
    CHECK_THROWS_AS(se_encrypt(Bytes(16, 1), Bytes(32, 0)), Error);
}

TEST_CASE("lioness decryption under a wrong key never leaves a zero prefix") {
    SeededRandom rng(uint64_t{15});
    Bytes key = rng.bytes(16);
    size_t zero_hits = 0;
    for (int i = 0; i < 1000; ++i) {
        Bytes c = se_encrypt(key, concat({Bytes(16, 0), rng.bytes(112)}));
        Bytes wrong = se_decrypt(rng.bytes(16), c);
        if (all_zero(ByteView(wrong.data(), 16))) ++zero_hits;
    }
    CHECK(zero_hits == 0);
}

TEST_CASE("x25519 kem matches an independently computed dh vector") {
    FixedRandom rng;
    rng.push(hx(kXSk));
    KemKeyPair kp = kem_keygen(suite(KemId::X25519), rng);
    CHECK(kp.public_key == hx(kXPk));

    rng.push(hx(kXEsk));
    Encapsulation e = kem_encap(suite(KemId::X25519), kp.public_key, rng);
    CHECK(e.ciphertext == hx(kXCt));
    CHECK(e.shared_key == hx(kXSs));

    auto d = kem_decap(suite(KemId::X25519), kp.secret, e.ciphertext);
    REQUIRE(d);
    CHECK(*d == hx(kXSs));
}

TEST_CASE("every suite roundtrips over 100 random keypairs") {
    SeededRandom rng(uint64_t{16});
    for (KemId id : {KemId::X25519, KemId::MLKEM768, KemId::XWING, KemId::TESTKEM}) {
        const KemSuite& s = suite(id);
        for (int i = 0; i < 100; ++i) {
            KemKeyPair kp = kem_keygen(s, rng);
            CHECK(kp.public_key.size() == s.public_key_len);
            Encapsulation e = kem_encap(s, kp.public_key, rng);
            CHECK(e.ciphertext.size() == s.ciphertext_len);
            CHECK(e.shared_key.size() == s.shared_key_len);
            auto d = kem_decap(s, kp.secret, e.ciphertext);
            REQUIRE(d);
            CHECK(*d == e.shared_key);
        }
    }
}

TEST_CASE("testkem is deterministic under a fixed seed") {
    SeededRandom a(uint64_t{17}), b(uint64_t{17});
    KemKeyPair ka = kem_keygen(suite(KemId::TESTKEM), a);
    KemKeyPair kb = kem_keygen(suite(KemId::TESTKEM), b);
    CHECK(ka.secret == kb.secret);
    CHECK(ka.public_key == kb.public_key);
    Encapsulation ea = kem_encap(suite(KemId::TESTKEM), ka.public_key, a);
    Encapsulation eb = kem_encap(suite(KemId::TESTKEM), kb.public_key, b);
    CHECK(ea.ciphertext == eb.ciphertext);
    CHECK(ea.shared_key == eb.shared_key);
}

TEST_CASE("ciphertexts from distinct randomness never collide") {
    SeededRandom rng(uint64_t{18});
    KemKeyPair kp = kem_keygen(suite(KemId::X25519), rng);
    std::set<Bytes> seen;
    for (int i = 0; i < 10000; ++i)
        seen.insert(kem_encap(suite(KemId::X25519), kp.public_key, rng).ciphertext);
    CHECK(seen.size() == 10000);
}

TEST_CASE("decap with the wrong secret key never opens the aead downstream") {
    SeededRandom rng(uint64_t{19});
    for (KemId id : {KemId::X25519, KemId::MLKEM768}) {
        const KemSuite& s = suite(id);
        KemKeyPair right = kem_keygen(s, rng);
        size_t accepted = 0;
        for (int i = 0; i < 256; ++i) {
            KemKeyPair wrong = kem_keygen(s, rng);
            Encapsulation e = kem_encap(s, right.public_key, rng);
            Sealed sealed = aead_seal(sha256(e.shared_key), Bytes(40, 0xab), 16);
            auto d = kem_decap(s, wrong.secret, e.ciphertext);
            if (d && aead_open(sha256(*d), sealed.ciphertext, sealed.tag)) ++accepted;
        }
        CHECK(accepted == 0);
    }
}

TEST_CASE("malformed kem inputs are rejected structurally") {
    SeededRandom rng(uint64_t{20});
    const KemSuite& x = suite(KemId::X25519);
    KemKeyPair kp = kem_keygen(x, rng);
    Encapsulation e = kem_encap(x, kp.public_key, rng);
    Bytes truncated(e.ciphertext.begin(), e.ciphertext.end() - 1);
    CHECK_FALSE(kem_decap(x, kp.secret, truncated));
    CHECK_THROWS_AS(kem_encap(x, Bytes(31, 1), rng), Error);
    CHECK_THROWS_AS(kem_encap(suite(KemId::MLKEM768), Bytes(1184, 0xff), rng), Error);
}

TEST_CASE("op counters track keygen, encap and decap") {
    reset_op_counters();
    SeededRandom rng(uint64_t{21});
    KemKeyPair kp = kem_keygen(suite(KemId::X25519), rng);
    Encapsulation e = kem_encap(suite(KemId::X25519), kp.public_key, rng);
    (void)kem_decap(suite(KemId::X25519), kp.secret, e.ciphertext);
    CHECK(op_counters().kem_keygen == 1);
    CHECK(op_counters().kem_encap == 1);
    CHECK(op_counters().kem_decap == 1);
    reset_op_counters();
    CHECK(op_counters().kem_encap == 0);
}
