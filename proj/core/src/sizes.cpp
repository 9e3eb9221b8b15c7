#include "outfox/sizes.hpp"

namespace outfox {

SizeProfile SizeProfile::make(const KemSuite& s, size_t k_bits, size_t layers, size_t msg_len) {
    if (k_bits != 128 && k_bits != 256) throw Error("k must be 128 or 256");
    if (layers < 1) throw Error("at least one layer required");
    if (msg_len == 0) throw Error("message length must be positive");
    return SizeProfile{k_bits, s.ciphertext_len * 8, layers, msg_len};
}

size_t SizeProfile::routing_len(size_t layer) const {
    if (layer >= layers) throw Error("layer index out of range");
    return layer == l() ? 3 * k_bytes() : k_bytes();
}

size_t SizeProfile::beta_len(size_t layer) const {
    // AEAD plaintext is routing info plus, below the innermost layer,
    // the next header; the stream cipher preserves length.
    if (layer == l()) return routing_len(layer);
    return routing_len(layer) + header_len(layer + 1);
}

size_t SizeProfile::header_len(size_t layer) const {
    return p_bytes() + beta_len(layer) + tag_len();
}

size_t SizeProfile::payload_len() const {
    return k_bytes() + surb_len() + msg_len;
}

size_t SizeProfile::surb_len() const {
    return header_len(0) + payload_key_len();
}

std::vector<LayerSizes> layer_sizes(const SizeProfile& profile) {
    std::vector<LayerSizes> out;
    out.reserve(profile.layers);
    for (size_t i = 0; i < profile.layers; ++i)
        out.push_back({i, profile.header_len(i), profile.payload_len(), profile.packet_len(i)});
    return out;
}

} // namespace outfox
