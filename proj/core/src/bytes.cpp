#include "outfox/bytes.hpp"

#include <sodium.h>

namespace outfox {

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw Error("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error("invalid hex digit");
        out[i] = static_cast<uint8_t>(hi << 4 | lo);
    }
    return out;
}

Bytes operator"" _hex(const char* s, size_t n) { return from_hex(std::string(s, n)); }

std::string to_hex(ByteView b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (uint8_t x : b) {
        out.push_back(digits[x >> 4]);
        out.push_back(digits[x & 0xf]);
    }
    return out;
}

Bytes concat(std::initializer_list<ByteView> parts) {
    size_t total = 0;
    for (const auto& p : parts) total += p.size();
    Bytes out;
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool ct_equal(ByteView a, ByteView b) {
    if (a.size() != b.size()) return false;
    return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

void zeroize(Bytes& b) {
    if (!b.empty()) sodium_memzero(b.data(), b.size());
    b.clear();
}

Bytes sha256(ByteView data) {
    Bytes out(crypto_hash_sha256_BYTES);
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

Bytes hmac_sha256(ByteView key, ByteView data) {
    Bytes out(crypto_auth_hmacsha256_BYTES);
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, data.data(), data.size());
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

} // namespace outfox
