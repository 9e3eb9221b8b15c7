#include "outfox/lioness.hpp"

#include <array>
#include <sodium.h>

namespace outfox {

namespace {

constexpr size_t kLeft = 32;

std::array<Bytes, 4> round_keys(ByteView key) {
    std::array<Bytes, 4> ks;
    for (uint8_t i = 0; i < 4; ++i) {
        uint8_t tag = static_cast<uint8_t>(i + 1);
        ks[i] = hmac_sha256(key, ByteView(&tag, 1));
    }
    return ks;
}

// R ^= ChaCha20(L xor k)
void stream_round(std::span<uint8_t> right, ByteView left, ByteView k) {
    uint8_t sk[kLeft];
    for (size_t i = 0; i < kLeft; ++i) sk[i] = left[i] ^ k[i];
    static const uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
    crypto_stream_chacha20_xor(right.data(), right.data(), right.size(), nonce, sk);
    sodium_memzero(sk, sizeof sk);
}

// L ^= HMAC(k, R)
void hash_round(std::span<uint8_t> left, ByteView right, ByteView k) {
    Bytes h = hmac_sha256(k, right);
    for (size_t i = 0; i < kLeft; ++i) left[i] ^= h[i];
}

Bytes permute(ByteView key, ByteView block, bool forward) {
    if (block.size() < lioness_min_block) throw Error("lioness block too short");
    auto ks = round_keys(key);
    Bytes out(block.begin(), block.end());
    std::span<uint8_t> left(out.data(), kLeft);
    std::span<uint8_t> right(out.data() + kLeft, out.size() - kLeft);
    if (forward) {
        stream_round(right, left, ks[0]);
        hash_round(left, right, ks[1]);
        stream_round(right, left, ks[2]);
        hash_round(left, right, ks[3]);
    } else {
        hash_round(left, right, ks[3]);
        stream_round(right, left, ks[2]);
        hash_round(left, right, ks[1]);
        stream_round(right, left, ks[0]);
    }
    for (auto& k : ks) zeroize(k);
    return out;
}

} // namespace

Bytes se_encrypt(ByteView key, ByteView block) { return permute(key, block, true); }
Bytes se_decrypt(ByteView key, ByteView block) { return permute(key, block, false); }

} // namespace outfox
