#ifndef OUTFOX_KDF_HPP
#define OUTFOX_KDF_HPP

#include "outfox/bytes.hpp"

namespace outfox {

/// Context bound into every key derivation: the KEM ciphertext and public
/// key of the layer plus the protocol session identifier. Serialized as
/// the plain concatenation kem_ciphertext || public_key || session_id.
struct KdfContext {
    Bytes kem_ciphertext;
    Bytes public_key;
    Bytes session_id;

    Bytes info() const { return concat({kem_ciphertext, public_key, session_id}); }
};

/// Per-layer keys split out of a single KDF call.
struct LayerKeys {
    Bytes header_key;  // s^h, AEAD key
    Bytes payload_key; // s^p, wide-block-cipher key, k bits
};

constexpr size_t kdf_max_output = 255 * 32;

/// HKDF-SHA256 without salt (extract-then-expand).
Bytes kdf_derive(ByteView shared_key, const KdfContext& ctx, size_t out_len);

/// One derivation of |s^h| + |s^p| bytes, split at a fixed offset.
LayerKeys derive_layer_keys(ByteView shared_key, const KdfContext& ctx,
                            size_t header_key_len, size_t payload_key_len);

} // namespace outfox

#endif
