#ifndef OUTFOX_LIONESS_HPP
#define OUTFOX_LIONESS_HPP

#include "outfox/bytes.hpp"

namespace outfox {

/// Four-round Lioness wide-block cipher: a length-preserving permutation
/// over the whole payload, built from ChaCha20 and HMAC-SHA256. The four
/// round keys are derived from the (short) payload key, so the key can be
/// as small as the security parameter. Blocks must be longer than the
/// 32-byte left half.
constexpr size_t lioness_min_block = 33;

Bytes se_encrypt(ByteView key, ByteView block);
Bytes se_decrypt(ByteView key, ByteView block);

} // namespace outfox

#endif
