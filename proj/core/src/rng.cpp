#include "outfox/rng.hpp"

#include <cstring>
#include <sodium.h>

namespace outfox {

void SystemRandom::fill(std::span<uint8_t> out) {
    randombytes_buf(out.data(), out.size());
}

SeededRandom::SeededRandom(ByteView seed) {
    key_ = sha256(seed);
}

SeededRandom::SeededRandom(uint64_t seed) {
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
    key_ = sha256(ByteView(buf, 8));
}

void SeededRandom::fill(std::span<uint8_t> out) {
    // One chacha20 block range per request, nonce = request counter.
    uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
    for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter_ >> (56 - 8 * i));
    ++counter_;
    std::memset(out.data(), 0, out.size());
    crypto_stream_chacha20_xor(out.data(), out.data(), out.size(), nonce, key_.data());
}

} // namespace outfox
