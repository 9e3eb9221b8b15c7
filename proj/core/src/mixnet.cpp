#include "outfox/mixnet.hpp"

#include <json.hpp>
#include <sstream>

namespace outfox {

using nlohmann::json;

namespace {

Bytes party_id_for(const std::string& name, size_t k_bits) {
    std::string label = "outfox-party:" + name;
    Bytes digest = sha256(ByteView(reinterpret_cast<const uint8_t*>(label.data()), label.size()));
    digest.resize(k_bits / 8);
    return digest;
}

constexpr uint8_t kTagProcess = 0x00;   // bare packet, recipient processes
constexpr uint8_t kTagStoreHint = 0x01; // packet || next-hop id, gateway stores

} // namespace

// ---- Topology ----

void Topology::index(size_t k_bits) {
    parties_.clear();
    auto add = [&](const std::string& name, Role role, size_t layer) {
        if (name.empty()) throw Error("empty party name");
        if (parties_.count(name)) throw Error("party sets are not disjoint: " + name);
        parties_[name] = TopologyParty{name, party_id_for(name, k_bits), role, layer};
    };
    if (gateways.empty() || users.empty() || node_layers.empty())
        throw Error("topology needs gateways, node layers and users");
    for (const auto& g : gateways) add(g, Role::Gateway, 0);
    for (size_t i = 0; i < node_layers.size(); ++i) {
        if (node_layers[i].empty()) throw Error("empty node layer");
        for (const auto& n : node_layers[i]) add(n, Role::Node, i + 1);
    }
    for (const auto& u : users) add(u, Role::User, 0);
    std::map<Bytes, std::string> ids;
    for (const auto& [name, p] : parties_)
        if (!ids.emplace(p.id, name).second) throw Error("party id collision");
}

Topology Topology::from_json(const std::string& text, size_t k_bits) {
    json j = json::parse(text);
    Topology t;
    t.session_id = from_hex(j.at("session_id").get<std::string>());
    t.gateways = j.at("gateways").get<std::vector<std::string>>();
    for (size_t i = 1;; ++i) {
        std::string key = "layer" + std::to_string(i);
        if (!j.contains(key)) break;
        t.node_layers.push_back(j.at(key).get<std::vector<std::string>>());
    }
    t.users = j.at("users").get<std::vector<std::string>>();
    t.index(k_bits);
    return t;
}

std::string Topology::to_json() const {
    json j;
    j["session_id"] = to_hex(session_id);
    j["gateways"] = gateways;
    for (size_t i = 0; i < node_layers.size(); ++i)
        j["layer" + std::to_string(i + 1)] = node_layers[i];
    j["users"] = users;
    return j.dump(2);
}

const TopologyParty& Topology::party(const std::string& name) const {
    auto it = parties_.find(name);
    if (it == parties_.end()) throw Error("unknown party: " + name);
    return it->second;
}

const TopologyParty* Topology::find(const std::string& name) const {
    auto it = parties_.find(name);
    return it == parties_.end() ? nullptr : &it->second;
}

// ---- RunLog ----

size_t RunLog::count(const std::string& kind) const {
    size_t n = 0;
    for (const auto& e : events)
        if (e.kind == kind) ++n;
    return n;
}

std::string RunLog::to_jsonl() const {
    std::ostringstream out;
    for (const auto& e : events) {
        json j{{"kind", e.kind}, {"party", e.party}};
        if (!e.detail.empty()) j["detail"] = e.detail;
        out << j.dump() << "\n";
    }
    return out.str();
}

// ---- MixnetSim ----

MixnetSim::MixnetSim(Topology topology, KemId kem, size_t k_bits, size_t msg_len, uint64_t seed)
    : topology_(std::move(topology)),
      ctx_(PacketContext::make(kem, k_bits, topology_.mix_layers() + 2, msg_len, {})),
      rng_(seed) {
    if (topology_.parties_.empty()) topology_.index(k_bits);
    ctx_.session_id = topology_.session_id;
    for (const auto& [name, info] : topology_.parties_) {
        Party p;
        p.info = info;
        names_[info.id] = name;
        parties_.emplace(name, std::move(p));
        transport_.attach(info.id, [this, id = info.id](const Bytes& from, const Bytes& payload) {
            ingress(party_by_id(id), from, payload);
        });
    }
}

MixnetSim::Party& MixnetSim::party(const std::string& name) {
    auto it = parties_.find(name);
    if (it == parties_.end()) throw Error("unknown party: " + name);
    return it->second;
}

MixnetSim::Party& MixnetSim::party_by_id(const Bytes& id) {
    auto it = names_.find(id);
    if (it == names_.end()) throw Error("unknown party id");
    return party(it->second);
}

size_t MixnetSim::surb_count(const std::string& user) const {
    auto it = parties_.find(user);
    if (it == parties_.end()) throw Error("unknown party: " + user);
    return it->second.surb_table.size();
}

size_t MixnetSim::pending_count(const std::string& name) const {
    auto it = parties_.find(name);
    if (it == parties_.end()) throw Error("unknown party: " + name);
    return it->second.pending.size();
}

uint64_t MixnetSim::fresh_lpid() {
    uint64_t v = 0;
    Bytes b = rng_.bytes(8);
    for (uint8_t x : b) v = v << 8 | x;
    return v;
}

void MixnetSim::check_role(const std::string& name, Role role, std::optional<size_t> layer) {
    const TopologyParty& p = topology_.party(name);
    if (p.role != role) throw Error("role mismatch for " + name);
    if (layer && p.node_layer != *layer) throw Error(name + " is not in node layer");
}

void MixnetSim::setup(const std::string& name) {
    Party& p = party(name);
    if (p.info.role == Role::User) throw Error("users do not run setup");
    if (p.keys) throw Error("duplicate setup for " + name);
    p.keys = kem_keygen(ctx_.suite, rng_);
    directory_.register_key(p.info.id, ctx_.suite.id, p.keys->public_key, Privacy::Public);
    log_.events.push_back({"setup", name, ""});
}

void MixnetSim::register_user(const std::string& name) {
    Party& p = party(name);
    if (p.info.role != Role::User) throw Error("only users register");
    if (p.registered) throw Error("duplicate registration for " + name);
    for (const auto& [other, info] : topology_.parties_) {
        if (info.role == Role::User) continue;
        auto pk = directory_.retrieve(p.info.id, info.id);
        if (!pk) throw Error("registration abort: no key for " + other);
        p.key_cache[info.id] = *pk;
    }
    p.keys = kem_keygen(ctx_.suite, rng_);
    directory_.register_key(p.info.id, ctx_.suite.id, p.keys->public_key, Privacy::Private);
    p.registered = true;
    log_.events.push_back({"register", name, ""});
}

RouteHop MixnetSim::hop_for(const Party& viewer, const std::string& name, RoutingInfo routing) {
    const TopologyParty& info = topology_.party(name);
    auto it = viewer.key_cache.find(info.id);
    if (it == viewer.key_cache.end()) throw Error("no cached key for " + name);
    return RouteHop{info.id, it->second, std::move(routing)};
}

void MixnetSim::send_request(const std::string& sender, const RouteSpec& route, ByteView msg) {
    Party& t = party(sender);
    if (!t.registered) throw Error("sender not registered");
    size_t n = topology_.mix_layers();
    const auto& path = route.request_path;
    if (path.size() != n + 4) throw Error("request path length mismatch");
    if (path.front() != sender) throw Error("request path must start at the sender");
    check_role(path[0], Role::User);
    check_role(path[1], Role::Gateway);
    for (size_t i = 0; i < n; ++i) check_role(path[2 + i], Role::Node, i + 1);
    check_role(path[n + 2], Role::Gateway);
    check_role(path[n + 3], Role::User);

    const std::string& entry_gw = path[1];
    const std::string& exit_gw = path[n + 2];
    const std::string& receiver = path[n + 3];

    bool reply = !route.reply_path.empty();
    std::optional<Surb> surb;
    if (reply) {
        const auto& rp = route.reply_path;
        if (rp.size() != n + 3) throw Error("reply path length mismatch");
        check_role(rp[0], Role::Gateway); // exit gateway for the reply
        for (size_t i = 0; i < n; ++i) check_role(rp[1 + i], Role::Node, i + 1);
        check_role(rp[n + 1], Role::Gateway);
        if (rp[n + 2] != sender) throw Error("reply terminal must be the sender");

        std::vector<RouteHop> rt;
        for (size_t i = 0; i < n; ++i) {
            const std::string& next = i + 1 < n ? rp[2 + i] : rp[n + 1];
            rt.push_back(hop_for(t, rp[1 + i], NextHop{topology_.party(next).id}));
        }
        rt.push_back(hop_for(t, rp[n + 1], NextHop{t.info.id}));
        RouteHop sender_info{t.info.id, t.keys->public_key, NoRoute{}};
        auto created = surb_create(ctx_, rt, sender_info, rng_);
        surb = std::move(created.surb);
        t.surb_table.push_back(SurbEntry{std::move(created.id), std::move(created.secrets),
                                         topology_.party(rp[n + 1]).id});
    }

    std::vector<RouteHop> rt;
    for (size_t i = 0; i < n; ++i) {
        const std::string& next = i + 1 < n ? path[3 + i] : exit_gw;
        rt.push_back(hop_for(t, path[2 + i], NextHop{topology_.party(next).id}));
    }
    rt.push_back(hop_for(t, exit_gw, NextHop{topology_.party(receiver).id}));

    auto receiver_pk = directory_.retrieve(t.info.id, topology_.party(receiver).id);
    if (!receiver_pk) throw Error("receiver key not registered");
    RoutingInfo receiver_routing = NoRoute{};
    if (reply)
        receiver_routing = Terminal{topology_.party(route.reply_path[0]).id,
                                    topology_.party(route.reply_path[1]).id};
    RouteHop receiver_info{topology_.party(receiver).id, *receiver_pk, receiver_routing};

    Packet packet = packet_create(ctx_, rt, msg, receiver_info, surb, rng_);

    uint8_t tag = kTagStoreHint;
    Bytes wire = concat({ByteView(&tag, 1), packet.to_bytes(), topology_.party(path[2]).id});
    transport_.send(t.info.id, topology_.party(entry_gw).id, wire);
}

void MixnetSim::send_reply(const std::string& receiver, ByteView msg) {
    Party& r = party(receiver);
    if (r.reply_ctx.empty()) throw Error("no reply context for " + receiver);
    ReplyCtx& rc = r.reply_ctx.back();
    Packet packet = surb_use(ctx_, rc.surb, msg);
    uint8_t tag = kTagStoreHint;
    Bytes wire = concat({ByteView(&tag, 1), packet.to_bytes(), rc.first_node});
    transport_.send(r.info.id, rc.exit_gateway, wire);
}

bool MixnetSim::forward(const std::string& name) {
    Party& p = party(name);
    if (p.pending.empty()) return false;
    Pending entry = std::move(p.pending.front());
    p.pending.erase(p.pending.begin());
    log_.events.push_back({"forwarded", name, std::to_string(entry.lpid)});
    uint8_t tag = kTagProcess;
    Bytes wire = concat({ByteView(&tag, 1), entry.packet});
    transport_.send(p.info.id, entry.next, wire);
    return true;
}

void MixnetSim::flush() {
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (auto& [name, p] : parties_)
            while (!p.pending.empty()) progressed |= forward(name);
    }
}

void MixnetSim::store_pending(Party& self, Bytes packet, const Bytes& next) {
    uint64_t lpid = fresh_lpid();
    self.pending.push_back(Pending{lpid, std::move(packet), next});
    log_.events.push_back({"stored", self.info.name, std::to_string(lpid)});
}

void MixnetSim::ingress(Party& self, const Bytes& from, const Bytes& payload) {
    if (payload.empty()) {
        log_.events.push_back({"abort", self.info.name, "empty message"});
        return;
    }
    size_t kb = ctx_.profile.k_bytes();
    if (payload[0] == kTagStoreHint) {
        // Entry gateways store requests and exit gateways store replies
        // without processing them.
        if (self.info.role != Role::Gateway || payload.size() < 1 + kb) {
            log_.events.push_back({"abort", self.info.name, "unexpected store message"});
            return;
        }
        Bytes packet(payload.begin() + 1, payload.end() - static_cast<long>(kb));
        Bytes next(payload.end() - static_cast<long>(kb), payload.end());
        store_pending(self, std::move(packet), next);
        return;
    }

    ByteView body(payload.data() + 1, payload.size() - 1);
    if (self.info.role == Role::User) {
        Packet packet;
        try {
            packet = Packet::parse(ctx_.profile, terminal_layer(), body);
        } catch (const Error&) {
            log_.events.push_back({"header_fail", self.info.name, "bad packet length"});
            return;
        }
        ingress_user(self, from, packet);
        return;
    }

    size_t layer = self.info.role == Role::Node ? self.info.node_layer - 1 : gateway_layer();
    Packet packet;
    try {
        packet = Packet::parse(ctx_.profile, layer, body);
    } catch (const Error&) {
        log_.events.push_back({"header_fail", self.info.name, "bad packet length"});
        return;
    }
    if (!self.keys) {
        log_.events.push_back({"abort", self.info.name, "no keys"});
        return;
    }
    ProcessResult result = packet_process(ctx_, *self.keys, layer, false, packet);
    if (std::holds_alternative<HeaderFail>(result)) {
        log_.events.push_back({"header_fail", self.info.name, ""});
        return;
    }
    auto& fwd = std::get<Forward>(result);
    const auto& hop = std::get<NextHop>(fwd.routing);
    store_pending(self, fwd.packet.to_bytes(), hop.party);
}

void MixnetSim::ingress_user(Party& self, const Bytes& from, const Packet& packet) {
    for (auto& entry : self.surb_table) {
        if (!surb_check(packet, entry.id)) continue;
        if (from != entry.expected_entry_gateway) {
            log_.events.push_back({"abort", self.info.name, "reply from unexpected gateway"});
            return;
        }
        if (entry.used) {
            log_.events.push_back({"reply_reuse", self.info.name, ""});
            return;
        }
        auto msg = surb_recover(ctx_, packet, entry.secrets);
        entry.used = true;
        if (!msg) {
            log_.events.push_back({"payload_fail", self.info.name, "reply"});
            return;
        }
        deliveries_.push_back({self.info.name, *msg, true});
        log_.events.push_back({"reply_deliver", self.info.name, ""});
        return;
    }

    if (!self.keys || !self.registered) {
        log_.events.push_back({"abort", self.info.name, "unregistered user"});
        return;
    }
    ProcessResult result = packet_process(ctx_, *self.keys, terminal_layer(), true, packet);
    if (std::holds_alternative<HeaderFail>(result)) {
        log_.events.push_back({"header_fail", self.info.name, ""});
        return;
    }
    if (std::holds_alternative<PayloadFail>(result)) {
        log_.events.push_back({"payload_fail", self.info.name, ""});
        return;
    }
    auto& del = std::get<Deliver>(result);
    deliveries_.push_back({self.info.name, del.msg, false});
    log_.events.push_back({"deliver", self.info.name, "request"});
    if (del.surb && std::holds_alternative<Terminal>(del.routing)) {
        const auto& term = std::get<Terminal>(del.routing);
        uint64_t lpid = fresh_lpid();
        self.reply_ctx.push_back(ReplyCtx{lpid, std::move(*del.surb), term.exit_gateway,
                                          term.first_node});
        log_.events.push_back({"stored", self.info.name, "reply-context " + std::to_string(lpid)});
    }
}

uint64_t MixnetSim::install_drop(const std::string& to) {
    log_.events.push_back({"hook", to, "drop"});
    return transport_.install_hook({topology_.party(to).id, ChannelAction::Dropped});
}

uint64_t MixnetSim::install_tamper(const std::string& to, size_t byte_index, uint8_t mask) {
    log_.events.push_back({"hook", to, "tamper"});
    AdversaryHook hook{topology_.party(to).id, ChannelAction::Tampered};
    hook.byte_index = byte_index;
    hook.xor_mask = mask;
    return transport_.install_hook(hook);
}

// ---- scenario runner ----

namespace {

Bytes scenario_msg(const json& j, size_t msg_len) {
    Bytes msg;
    if (j.contains("msg_hex"))
        msg = from_hex(j.at("msg_hex").get<std::string>());
    else if (j.contains("msg")) {
        std::string s = j.at("msg").get<std::string>();
        msg.assign(s.begin(), s.end());
    }
    if (msg.size() > msg_len) throw Error("message longer than the message space");
    msg.resize(msg_len, 0); // callers pad into the fixed message space
    return msg;
}

} // namespace

RunLog run_scenario(const Topology& topology, const std::string& script_jsonl, KemId kem,
                    size_t k_bits, size_t msg_len, uint64_t seed) {
    MixnetSim sim(topology, kem, k_bits, msg_len, seed);
    std::istringstream lines(script_jsonl);
    std::string line;
    size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        json j = json::parse(line);
        std::string action = j.at("action").get<std::string>();
        std::string who = j.value("party", "");
        try {
            if (action == "setup") {
                if (who == "*") {
                    for (const auto& g : sim.topology().gateways) sim.setup(g);
                    for (const auto& layer : sim.topology().node_layers)
                        for (const auto& n : layer) sim.setup(n);
                } else
                    sim.setup(who);
            } else if (action == "register") {
                if (who == "*")
                    for (const auto& u : sim.topology().users) sim.register_user(u);
                else
                    sim.register_user(who);
            } else if (action == "request") {
                RouteSpec route;
                route.request_path = j.at("path").get<std::vector<std::string>>();
                if (j.contains("reply_path"))
                    route.reply_path = j.at("reply_path").get<std::vector<std::string>>();
                sim.send_request(route.request_path.front(), route,
                                 scenario_msg(j, sim.context().profile.msg_len));
            } else if (action == "reply") {
                sim.send_reply(who, scenario_msg(j, sim.context().profile.msg_len));
            } else if (action == "forward") {
                if (who == "*")
                    sim.flush();
                else
                    sim.forward(who);
            } else if (action == "drop") {
                sim.install_drop(j.at("to").get<std::string>());
            } else if (action == "tamper") {
                sim.install_tamper(j.at("to").get<std::string>(),
                                   j.at("byte").get<size_t>(),
                                   static_cast<uint8_t>(j.at("mask").get<unsigned>()));
            } else {
                throw Error("unknown action: " + action);
            }
        } catch (const Error& e) {
            sim.log().events.push_back({"error", who, e.what()});
            sim.log().aborted = true;
        }
    }
    return std::move(sim.log());
}

} // namespace outfox
