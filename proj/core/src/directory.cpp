#include "outfox/directory.hpp"

#include <json.hpp>

namespace outfox {

void Directory::register_key(const Bytes& party, KemId suite_id, const Bytes& public_key,
                             Privacy privacy) {
    std::lock_guard lock(mutex_);
    if (records_.count(party)) throw Error("party already registered");
    if (public_key.size() != suite(suite_id).public_key_len)
        throw Error("public key length does not match suite");
    records_[party] = DirectoryRecord{party, suite_id, public_key, privacy};
}

std::optional<Bytes> Directory::retrieve(const Bytes& requester, const Bytes& target) {
    std::lock_guard lock(mutex_);
    auto it = records_.find(target);
    if (it == records_.end()) {
        // Unknown targets are not leaked either; a probe for a private
        // party must look like any other private retrieval.
        audit_.push_back(AuditEntry{requester, std::nullopt});
        return std::nullopt;
    }
    if (it->second.privacy == Privacy::Public)
        audit_.push_back(AuditEntry{requester, target});
    else
        audit_.push_back(AuditEntry{requester, std::nullopt});
    return it->second.public_key;
}

bool Directory::has(const Bytes& party) const {
    std::lock_guard lock(mutex_);
    return records_.count(party) != 0;
}

std::string Directory::export_json() const {
    std::lock_guard lock(mutex_);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [party, rec] : records_) {
        arr.push_back({{"party_hex", to_hex(party)},
                       {"suite", suite(rec.suite_id).name},
                       {"pk_hex", to_hex(rec.public_key)},
                       {"privacy", rec.privacy == Privacy::Public ? "public" : "private"}});
    }
    return arr.dump(2);
}

void Directory::import_json(const std::string& json) {
    nlohmann::json arr = nlohmann::json::parse(json);
    if (!arr.is_array()) throw Error("directory export must be a JSON array");
    for (const auto& item : arr) {
        auto id = suite_by_name(item.at("suite").get<std::string>());
        if (!id) throw Error("unknown suite in directory export");
        Privacy privacy = item.at("privacy").get<std::string>() == "public" ? Privacy::Public
                                                                            : Privacy::Private;
        register_key(from_hex(item.at("party_hex").get<std::string>()), *id,
                     from_hex(item.at("pk_hex").get<std::string>()), privacy);
    }
}

} // namespace outfox
