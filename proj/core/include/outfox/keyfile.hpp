#ifndef OUTFOX_KEYFILE_HPP
#define OUTFOX_KEYFILE_HPP

#include <string>

#include "outfox/kem.hpp"

namespace outfox {

/// Key file format: 4-byte magic ("OFK1" public / "OFS1" secret),
/// 1-byte suite id, 2-byte big-endian key length, raw key bytes.
struct KeyRecord {
    KemId id;
    bool is_secret;
    Bytes key;
};

Bytes encode_key(const KeyRecord& rec);
KeyRecord decode_key(ByteView data);

void write_key_file(const std::string& path, const KeyRecord& rec);
KeyRecord read_key_file(const std::string& path);

} // namespace outfox

#endif
