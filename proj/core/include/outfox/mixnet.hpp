#ifndef OUTFOX_MIXNET_HPP
#define OUTFOX_MIXNET_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "outfox/directory.hpp"
#include "outfox/packet.hpp"
#include "outfox/transport.hpp"

namespace outfox {

enum class Role { User, Gateway, Node };

struct TopologyParty {
    std::string name;
    Bytes id; // k bits, derived from the name
    Role role;
    size_t node_layer = 0; // 1-based, nodes only
};

/// Simulation topology: one gateway set, N node layers (three in the
/// protocol, parameterized here), one user set. All sets disjoint.
struct Topology {
    Bytes session_id;
    std::vector<std::string> gateways;
    std::vector<std::vector<std::string>> node_layers;
    std::vector<std::string> users;

    static Topology from_json(const std::string& json, size_t k_bits);
    std::string to_json() const;

    size_t mix_layers() const { return node_layers.size(); }
    const TopologyParty& party(const std::string& name) const;
    const TopologyParty* find(const std::string& name) const;

  private:
    friend class MixnetSim;
    std::map<std::string, TopologyParty> parties_;
    void index(size_t k_bits);
};

struct RunEvent {
    std::string kind; // setup, register, stored, forwarded, deliver,
                      // reply_deliver, header_fail, payload_fail, abort,
                      // error, hook, reply_reuse
    std::string party;
    std::string detail;
};

struct RunLog {
    std::vector<RunEvent> events;
    bool aborted = false;

    size_t count(const std::string& kind) const;
    std::string to_jsonl() const;
};

/// Request path [T, We, N1..Nn, Wx, R] and optional reply path
/// [Wx^, N1^..Nn^, We^, T^].
struct RouteSpec {
    std::vector<std::string> request_path;
    std::vector<std::string> reply_path;
};

class MixnetSim {
  public:
    MixnetSim(Topology topology, KemId kem, size_t k_bits, size_t msg_len, uint64_t seed);

    void setup(const std::string& party);
    void register_user(const std::string& user);
    void send_request(const std::string& sender, const RouteSpec& route, ByteView msg);
    void send_reply(const std::string& receiver, ByteView msg); // most recent reply ctx
    bool forward(const std::string& party);                     // oldest pending; false if none
    void flush();                                               // forward until quiescent

    uint64_t install_drop(const std::string& to);
    uint64_t install_tamper(const std::string& to, size_t byte_index, uint8_t mask);

    const RunLog& log() const { return log_; }
    RunLog& log() { return log_; }
    const Transport& transport() const { return transport_; }
    const Directory& directory() const { return directory_; }
    const PacketContext& context() const { return ctx_; }
    const Topology& topology() const { return topology_; }

    /// Delivered payloads, in order, for assertions.
    struct Delivered {
        std::string party;
        Bytes msg;
        bool is_reply;
    };
    const std::vector<Delivered>& deliveries() const { return deliveries_; }

    size_t surb_count(const std::string& user) const;    // reply blocks a sender holds
    size_t pending_count(const std::string& party) const; // stored, unforwarded packets

  private:
    struct SurbEntry {
        SurbId id;
        SurbSecrets secrets;
        Bytes expected_entry_gateway;
        bool used = false;
    };
    struct ReplyCtx {
        uint64_t lpid;
        Surb surb;
        Bytes exit_gateway;
        Bytes first_node;
    };
    struct Pending {
        uint64_t lpid;
        Bytes packet; // serialized at the layer the next party processes
        Bytes next;
    };
    struct Party {
        TopologyParty info;
        std::optional<KemKeyPair> keys;
        bool registered = false;
        std::map<Bytes, Bytes> key_cache; // party id -> public key
        std::vector<Pending> pending;
        std::vector<SurbEntry> surb_table; // users (senders)
        std::vector<ReplyCtx> reply_ctx;   // users (receivers)
    };

    Party& party(const std::string& name);
    Party& party_by_id(const Bytes& id);
    size_t gateway_layer() const { return topology_.mix_layers(); } // = l - 1
    size_t terminal_layer() const { return ctx_.profile.l(); }
    uint64_t fresh_lpid();
    void ingress(Party& self, const Bytes& from, const Bytes& payload);
    void ingress_user(Party& self, const Bytes& from, const Packet& packet);
    void store_pending(Party& self, Bytes packet, const Bytes& next);
    RouteHop hop_for(const Party& viewer, const std::string& name, RoutingInfo routing);
    void check_role(const std::string& name, Role role, std::optional<size_t> layer = {});

    Topology topology_;
    PacketContext ctx_;
    Directory directory_;
    Transport transport_;
    SeededRandom rng_;
    std::map<std::string, Party> parties_;
    std::map<Bytes, std::string> names_;
    RunLog log_;
    std::vector<Delivered> deliveries_;
};

/// Scenario script: JSON-lines of actions
/// {setup|register|request|reply|forward|drop|tamper}; party "*" fans a
/// setup/register/forward out to every eligible party.
RunLog run_scenario(const Topology& topology, const std::string& script_jsonl, KemId kem,
                    size_t k_bits, size_t msg_len, uint64_t seed);

} // namespace outfox

#endif
