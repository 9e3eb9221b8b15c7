#include "outfox/aead.hpp"

#include <cstring>
#include <sodium.h>

namespace outfox {

namespace {

constexpr char kEncLabel[] = "outfox-aead-enc";
constexpr char kMacLabel[] = "outfox-aead-mac";

Bytes subkey(ByteView key, const char* label) {
    return hmac_sha256(key, ByteView(reinterpret_cast<const uint8_t*>(label), std::strlen(label)));
}

void check_key(ByteView key) {
    if (key.size() != aead_key_len) throw Error("aead key must be 32 bytes");
}

Bytes stream_xor(ByteView key, ByteView data) {
    static const uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
    Bytes out(data.begin(), data.end());
    if (!out.empty())
        crypto_stream_chacha20_xor(out.data(), out.data(), out.size(), nonce, key.data());
    return out;
}

} // namespace

Sealed aead_seal(ByteView key, ByteView plaintext, size_t tag_len) {
    check_key(key);
    if (tag_len < 16 || tag_len > 32) throw Error("aead tag length out of range");
    Bytes ek = subkey(key, kEncLabel);
    Bytes mk = subkey(key, kMacLabel);
    Sealed out;
    out.ciphertext = stream_xor(ek, plaintext);
    Bytes mac = hmac_sha256(mk, out.ciphertext);
    out.tag.assign(mac.begin(), mac.begin() + tag_len);
    zeroize(ek);
    zeroize(mk);
    return out;
}

std::optional<Bytes> aead_open(ByteView key, ByteView ciphertext, ByteView tag) {
    check_key(key);
    if (tag.size() < 16 || tag.size() > 32) return std::nullopt;
    Bytes mk = subkey(key, kMacLabel);
    Bytes mac = hmac_sha256(mk, ciphertext);
    zeroize(mk);
    bool ok = ct_equal(ByteView(mac.data(), tag.size()), tag);
    if (!ok) return std::nullopt;
    Bytes ek = subkey(key, kEncLabel);
    Bytes pt = stream_xor(ek, ciphertext);
    zeroize(ek);
    return pt;
}

} // namespace outfox
