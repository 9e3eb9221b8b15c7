#ifndef OUTFOX_MLKEM768_INTERNAL_HPP
#define OUTFOX_MLKEM768_INTERNAL_HPP

#include "outfox/bytes.hpp"

// ML-KEM-768 (FIPS 203). Internal to the kem module; the public surface
// is outfox/kem.hpp.
namespace outfox::mlkem768 {

constexpr size_t public_key_len = 1184;
constexpr size_t secret_key_len = 2400;
constexpr size_t ciphertext_len = 1088;
constexpr size_t shared_key_len = 32;
constexpr size_t keygen_seed_len = 64; // d || z
constexpr size_t encap_seed_len = 32;  // m

struct KeyPair {
    Bytes public_key;
    Bytes secret_key;
};

KeyPair keygen(ByteView seed);

// Throws on a malformed public key (wrong length or non-canonical encoding).
struct Encapsulated {
    Bytes shared_key;
    Bytes ciphertext;
};
Encapsulated encap(ByteView public_key, ByteView m_seed);

// Implicit rejection: always returns 32 bytes for a well-formed ciphertext
// length; throws only on a length mismatch.
Bytes decap(ByteView secret_key, ByteView ciphertext);

Bytes sha3_256(ByteView data);

} // namespace outfox::mlkem768

#endif
