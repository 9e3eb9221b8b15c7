#include "outfox/keyfile.hpp"

#include <fstream>

namespace outfox {

namespace {
constexpr char kPublicMagic[4] = {'O', 'F', 'K', '1'};
constexpr char kSecretMagic[4] = {'O', 'F', 'S', '1'};
} // namespace

Bytes encode_key(const KeyRecord& rec) {
    const KemSuite& s = suite(rec.id);
    size_t expect = rec.is_secret ? 0 : s.public_key_len;
    if (expect && rec.key.size() != expect) throw Error("key length does not match suite");
    if (rec.key.size() > 0xffff) throw Error("key too long for the file format");
    const char* magic = rec.is_secret ? kSecretMagic : kPublicMagic;
    Bytes out(reinterpret_cast<const uint8_t*>(magic), reinterpret_cast<const uint8_t*>(magic) + 4);
    out.push_back(static_cast<uint8_t>(rec.id));
    out.push_back(static_cast<uint8_t>(rec.key.size() >> 8));
    out.push_back(static_cast<uint8_t>(rec.key.size() & 0xff));
    out.insert(out.end(), rec.key.begin(), rec.key.end());
    return out;
}

KeyRecord decode_key(ByteView data) {
    if (data.size() < 7) throw Error("key file truncated");
    KeyRecord rec;
    if (std::equal(data.begin(), data.begin() + 4, kPublicMagic))
        rec.is_secret = false;
    else if (std::equal(data.begin(), data.begin() + 4, kSecretMagic))
        rec.is_secret = true;
    else
        throw Error("bad key file magic");
    rec.id = static_cast<KemId>(data[4]);
    suite(rec.id); // validates the id
    size_t len = static_cast<size_t>(data[5]) << 8 | data[6];
    if (data.size() != 7 + len) throw Error("key file length mismatch");
    rec.key.assign(data.begin() + 7, data.end());
    return rec;
}

void write_key_file(const std::string& path, const KeyRecord& rec) {
    Bytes data = encode_key(rec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("write failed: " + path);
}

KeyRecord read_key_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_key(data);
}

} // namespace outfox
