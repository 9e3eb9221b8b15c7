#include "outfox/kdf.hpp"

namespace outfox {

Bytes kdf_derive(ByteView shared_key, const KdfContext& ctx, size_t out_len) {
    if (out_len == 0 || out_len > kdf_max_output) throw Error("kdf output length out of range");
    // Extract with an empty salt, then expand with info = c || pk || sid.
    Bytes prk = hmac_sha256(ByteView{}, shared_key);
    Bytes info = ctx.info();
    Bytes out;
    out.reserve(out_len);
    Bytes block;
    uint8_t i = 0;
    while (out.size() < out_len) {
        ++i;
        Bytes input = concat({block, info, ByteView(&i, 1)});
        block = hmac_sha256(prk, input);
        size_t take = std::min(block.size(), out_len - out.size());
        out.insert(out.end(), block.begin(), block.begin() + take);
    }
    zeroize(prk);
    return out;
}

LayerKeys derive_layer_keys(ByteView shared_key, const KdfContext& ctx,
                            size_t header_key_len, size_t payload_key_len) {
    Bytes raw = kdf_derive(shared_key, ctx, header_key_len + payload_key_len);
    LayerKeys keys;
    keys.header_key.assign(raw.begin(), raw.begin() + header_key_len);
    keys.payload_key.assign(raw.begin() + header_key_len, raw.end());
    zeroize(raw);
    return keys;
}

} // namespace outfox
