#ifndef OUTFOX_KEM_HPP
#define OUTFOX_KEM_HPP

#include <optional>
#include <string>

#include "outfox/bytes.hpp"
#include "outfox/rng.hpp"

namespace outfox {

enum class KemId : uint8_t {
    X25519 = 1,
    MLKEM768 = 2,
    XWING = 3,
    TESTKEM = 4,
};

struct KemSuite {
    KemId id;
    const char* name;
    size_t public_key_len;
    size_t ciphertext_len;
    size_t shared_key_len;
};

const KemSuite& suite(KemId id);
std::optional<KemId> suite_by_name(const std::string& name);

struct KemKeyPair {
    KemId id;
    Bytes secret; // zeroized on destruction
    Bytes public_key;

    KemKeyPair() = default;
    KemKeyPair(KemId i, Bytes sk, Bytes pk)
        : id(i), secret(std::move(sk)), public_key(std::move(pk)) {}
    KemKeyPair(KemKeyPair&&) = default;
    KemKeyPair& operator=(KemKeyPair&&) = default;
    KemKeyPair(const KemKeyPair&) = delete;
    KemKeyPair& operator=(const KemKeyPair&) = delete;
    ~KemKeyPair() { zeroize(secret); }
};

struct Encapsulation {
    Bytes shared_key;
    Bytes ciphertext;
};

KemKeyPair kem_keygen(const KemSuite& s, RandomSource& rng);

/// Throws Error on a malformed public key.
Encapsulation kem_encap(const KemSuite& s, ByteView public_key, RandomSource& rng);

/// Explicit rejection only for structural failures (bad lengths, the
/// all-zero x25519 output). Implicit-rejection suites return a pseudorandom
/// key; header-failure detection is the committing AEAD's job.
std::optional<Bytes> kem_decap(const KemSuite& s, ByteView secret_key, ByteView ciphertext);

} // namespace outfox

#endif
