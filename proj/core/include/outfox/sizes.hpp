#ifndef OUTFOX_SIZES_HPP
#define OUTFOX_SIZES_HPP

#include <vector>

#include "outfox/bytes.hpp"
#include "outfox/kem.hpp"

namespace outfox {

/// Every length in the packet format follows from these four parameters.
/// Layer indices count 0 = outermost .. l = innermost; L = l + 1.
struct SizeProfile {
    size_t k_bits;      // security parameter
    size_t p_bits;      // KEM ciphertext bit length
    size_t layers;      // L = l + 1
    size_t msg_len;     // fixed message length in bytes

    static SizeProfile make(const KemSuite& s, size_t k_bits, size_t layers, size_t msg_len);

    size_t k_bytes() const { return k_bits / 8; }
    size_t p_bytes() const { return p_bits / 8; }
    size_t l() const { return layers - 1; }

    // routing info: k bits per hop, 3k at the innermost layer
    size_t routing_len(size_t layer) const;
    // AEAD ciphertext beta at a given layer
    size_t beta_len(size_t layer) const;
    // header = kem ct || beta || gamma; layer 0 is 4k + (l+1)p + 2lk bits
    size_t header_len(size_t layer) const;
    // 6k + |m| + (l+1)p + 2lk bits, constant across layers
    size_t payload_len() const;
    // 5k + (l+1)p + 2lk bits
    size_t surb_len() const;
    size_t packet_len(size_t layer) const { return header_len(layer) + payload_len(); }

    size_t header_key_len() const { return 32; }     // s^h
    size_t payload_key_len() const { return k_bytes(); } // s^p, on the wire in a surb
    size_t tag_len() const { return k_bytes(); }     // gamma
};

struct LayerSizes {
    size_t layer;
    size_t header;
    size_t payload;
    size_t packet;
};

std::vector<LayerSizes> layer_sizes(const SizeProfile& profile);

} // namespace outfox

#endif
