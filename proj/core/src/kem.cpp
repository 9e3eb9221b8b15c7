#include "outfox/kem.hpp"

#include <sodium.h>

#include "mlkem768.hpp"
#include "outfox/counters.hpp"

namespace outfox {

namespace {

const KemSuite kSuites[] = {
    {KemId::X25519, "x25519", 32, 32, 32},
    {KemId::MLKEM768, "mlkem768", 1184, 1088, 32},
    {KemId::XWING, "xwing", 1216, 1120, 32},
    {KemId::TESTKEM, "testkem", 32, 32, 32},
};

constexpr char kTestkemPk[] = "outfox-testkem-pk";
constexpr char kTestkemSs[] = "outfox-testkem-ss";

// X-Wing combiner label, draft-connolly-cfrg-xwing-kem-02: the 6 ASCII
// bytes of the string \.//^\ .
const uint8_t kXWingLabel[6] = {0x5c, 0x2e, 0x2f, 0x2f, 0x5e, 0x5c};

Bytes label_bytes(const char* s) {
    return Bytes(reinterpret_cast<const uint8_t*>(s),
                 reinterpret_cast<const uint8_t*>(s) + std::char_traits<char>::length(s));
}

Bytes x25519_base(ByteView sk) {
    Bytes pk(crypto_scalarmult_BYTES);
    crypto_scalarmult_base(pk.data(), sk.data());
    return pk;
}

std::optional<Bytes> x25519_dh(ByteView sk, ByteView pk) {
    Bytes out(crypto_scalarmult_BYTES);
    if (crypto_scalarmult(out.data(), sk.data(), pk.data()) != 0) return std::nullopt;
    return out;
}

// DHKEM-style: shared key = SHA-256(dh || ct || pk), ct = ephemeral public key.
Bytes x25519_shared(ByteView dh, ByteView ct, ByteView pk) {
    return sha256(concat({dh, ct, pk}));
}

Encapsulation x25519_encap(ByteView public_key, RandomSource& rng) {
    Bytes eph_sk = rng.bytes(32);
    Bytes eph_pk = x25519_base(eph_sk);
    auto dh = x25519_dh(eph_sk, public_key);
    zeroize(eph_sk);
    if (!dh) throw Error("x25519 encapsulation to a low-order key");
    Encapsulation out;
    out.shared_key = x25519_shared(*dh, eph_pk, public_key);
    out.ciphertext = std::move(eph_pk);
    zeroize(*dh);
    return out;
}

std::optional<Bytes> x25519_decap(ByteView sk, ByteView ct) {
    auto dh = x25519_dh(sk, ct);
    if (!dh) return std::nullopt;
    Bytes pk = x25519_base(sk);
    Bytes key = x25519_shared(*dh, ct, pk);
    zeroize(*dh);
    return key;
}

Encapsulation testkem_encap(ByteView public_key, RandomSource& rng) {
    Encapsulation out;
    out.ciphertext = rng.bytes(32);
    out.shared_key = sha256(concat({label_bytes(kTestkemSs), public_key, out.ciphertext}));
    return out;
}

Bytes testkem_pk(ByteView sk) {
    return sha256(concat({label_bytes(kTestkemPk), sk}));
}

Bytes xwing_combine(ByteView ss_m, ByteView ss_x, ByteView ct_x, ByteView pk_x);

} // namespace

const KemSuite& suite(KemId id) {
    for (const auto& s : kSuites)
        if (s.id == id) return s;
    throw Error("unsupported KEM suite");
}

std::optional<KemId> suite_by_name(const std::string& name) {
    for (const auto& s : kSuites)
        if (name == s.name) return s.id;
    return std::nullopt;
}

KemKeyPair kem_keygen(const KemSuite& s, RandomSource& rng) {
    ++op_counters().kem_keygen;
    switch (s.id) {
        case KemId::X25519: {
            Bytes sk = rng.bytes(32);
            Bytes pk = x25519_base(sk);
            return {s.id, std::move(sk), std::move(pk)};
        }
        case KemId::MLKEM768: {
            Bytes seed = rng.bytes(mlkem768::keygen_seed_len);
            auto kp = mlkem768::keygen(seed);
            zeroize(seed);
            return {s.id, std::move(kp.secret_key), std::move(kp.public_key)};
        }
        case KemId::XWING: {
            Bytes mseed = rng.bytes(mlkem768::keygen_seed_len);
            auto m = mlkem768::keygen(mseed);
            zeroize(mseed);
            Bytes sk_x = rng.bytes(32);
            Bytes pk_x = x25519_base(sk_x);
            Bytes sk = concat({m.secret_key, sk_x, pk_x});
            Bytes pk = concat({m.public_key, pk_x});
            zeroize(m.secret_key);
            zeroize(sk_x);
            return {s.id, std::move(sk), std::move(pk)};
        }
        case KemId::TESTKEM: {
            Bytes sk = rng.bytes(32);
            Bytes pk = testkem_pk(sk);
            return {s.id, std::move(sk), std::move(pk)};
        }
    }
    throw Error("unsupported KEM suite");
}

Encapsulation kem_encap(const KemSuite& s, ByteView public_key, RandomSource& rng) {
    if (public_key.size() != s.public_key_len) throw Error("public key length mismatch");
    ++op_counters().kem_encap;
    switch (s.id) {
        case KemId::X25519:
            return x25519_encap(public_key, rng);
        case KemId::MLKEM768: {
            Bytes m = rng.bytes(mlkem768::encap_seed_len);
            auto e = mlkem768::encap(public_key, m);
            zeroize(m);
            return {std::move(e.shared_key), std::move(e.ciphertext)};
        }
        case KemId::XWING: {
            ByteView pk_m = public_key.subspan(0, mlkem768::public_key_len);
            ByteView pk_x = public_key.subspan(mlkem768::public_key_len, 32);
            Bytes m = rng.bytes(mlkem768::encap_seed_len);
            auto em = mlkem768::encap(pk_m, m);
            zeroize(m);
            Bytes ek_x = rng.bytes(32);
            Bytes ct_x = x25519_base(ek_x);
            auto ss_x = x25519_dh(ek_x, pk_x);
            zeroize(ek_x);
            if (!ss_x) throw Error("x-wing encapsulation to a low-order key");
            Encapsulation out;
            out.shared_key = xwing_combine(em.shared_key, *ss_x, ct_x, pk_x);
            out.ciphertext = concat({em.ciphertext, ct_x});
            zeroize(*ss_x);
            zeroize(em.shared_key);
            return out;
        }
        case KemId::TESTKEM:
            return testkem_encap(public_key, rng);
    }
    throw Error("unsupported KEM suite");
}

std::optional<Bytes> kem_decap(const KemSuite& s, ByteView secret_key, ByteView ciphertext) {
    if (ciphertext.size() != s.ciphertext_len) return std::nullopt;
    ++op_counters().kem_decap;
    switch (s.id) {
        case KemId::X25519:
            if (secret_key.size() != 32) return std::nullopt;
            return x25519_decap(secret_key, ciphertext);
        case KemId::MLKEM768:
            if (secret_key.size() != mlkem768::secret_key_len) return std::nullopt;
            return mlkem768::decap(secret_key, ciphertext);
        case KemId::XWING: {
            if (secret_key.size() != mlkem768::secret_key_len + 64) return std::nullopt;
            ByteView sk_m = secret_key.subspan(0, mlkem768::secret_key_len);
            ByteView sk_x = secret_key.subspan(mlkem768::secret_key_len, 32);
            ByteView pk_x = secret_key.subspan(mlkem768::secret_key_len + 32, 32);
            ByteView ct_m = ciphertext.subspan(0, mlkem768::ciphertext_len);
            ByteView ct_x = ciphertext.subspan(mlkem768::ciphertext_len, 32);
            Bytes ss_m = mlkem768::decap(sk_m, ct_m);
            auto ss_x = x25519_dh(sk_x, ct_x);
            if (!ss_x) return std::nullopt;
            Bytes key = xwing_combine(ss_m, *ss_x, ct_x, pk_x);
            zeroize(ss_m);
            zeroize(*ss_x);
            return key;
        }
        case KemId::TESTKEM: {
            if (secret_key.size() != 32) return std::nullopt;
            Bytes pk = testkem_pk(secret_key);
            return sha256(concat({label_bytes(kTestkemSs), pk, ciphertext}));
        }
    }
    return std::nullopt;
}

namespace {

Bytes xwing_combine(ByteView ss_m, ByteView ss_x, ByteView ct_x, ByteView pk_x) {
    Bytes input = concat({ByteView(kXWingLabel, 6), ss_m, ss_x, ct_x, pk_x});
    Bytes out = mlkem768::sha3_256(input);
    zeroize(input);
    return out;
}

} // namespace

} // namespace outfox
