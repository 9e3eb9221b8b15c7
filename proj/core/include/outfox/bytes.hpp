#ifndef OUTFOX_BYTES_HPP
#define OUTFOX_BYTES_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace outfox {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Bytes operator"" _hex(const char* s, size_t n);

std::string to_hex(ByteView b);
Bytes from_hex(const std::string& hex);

Bytes concat(std::initializer_list<ByteView> parts);

/// Constant-time comparison; false on length mismatch.
bool ct_equal(ByteView a, ByteView b);

void zeroize(Bytes& b);

inline Bytes zeros(size_t n) { return Bytes(n, 0); }

inline bool all_zero(ByteView b) {
    uint8_t acc = 0;
    for (uint8_t x : b) acc |= x;
    return acc == 0;
}

Bytes sha256(ByteView data);
Bytes hmac_sha256(ByteView key, ByteView data);

} // namespace outfox

#endif
