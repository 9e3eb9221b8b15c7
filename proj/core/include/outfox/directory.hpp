#ifndef OUTFOX_DIRECTORY_HPP
#define OUTFOX_DIRECTORY_HPP

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "outfox/bytes.hpp"
#include "outfox/kem.hpp"

namespace outfox {

enum class Privacy { Public, Private };

struct DirectoryRecord {
    Bytes party;
    KemId suite_id;
    Bytes public_key;
    Privacy privacy;
};

/// Who asked for what. Private retrievals never record the target:
/// the audit log is the leakage model.
struct AuditEntry {
    Bytes requester;
    std::optional<Bytes> target; // present only for Public records
};

/// In-process key registration service. Records are write-once.
class Directory {
  public:
    /// Throws on duplicate registration.
    void register_key(const Bytes& party, KemId suite_id, const Bytes& public_key,
                      Privacy privacy);

    std::optional<Bytes> retrieve(const Bytes& requester, const Bytes& target);

    bool has(const Bytes& party) const;

    const std::vector<AuditEntry>& audit_log() const { return audit_; }

    std::string export_json() const;
    void import_json(const std::string& json);

  private:
    std::map<Bytes, DirectoryRecord> records_;
    std::vector<AuditEntry> audit_;
    mutable std::mutex mutex_;
};

} // namespace outfox

#endif
