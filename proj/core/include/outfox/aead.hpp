#ifndef OUTFOX_AEAD_HPP
#define OUTFOX_AEAD_HPP

#include <optional>

#include "outfox/bytes.hpp"

namespace outfox {

/// Committing AEAD used on packet headers. Encrypt-then-MAC:
/// ChaCha20 with a fixed zero nonce (every header key is single-use)
/// and an HMAC-SHA256 tag truncated to tag_len bytes carried as the
/// associated data gamma. The tag binds the MAC key, which is derived
/// from the header key, so decryption under any other key rejects.
struct Sealed {
    Bytes ciphertext; // beta, same length as the plaintext
    Bytes tag;        // gamma, tag_len bytes
};

constexpr size_t aead_key_len = 32;

Sealed aead_seal(ByteView key, ByteView plaintext, size_t tag_len);

std::optional<Bytes> aead_open(ByteView key, ByteView ciphertext, ByteView tag);

} // namespace outfox

#endif
