#include "outfox/packet.hpp"

#include "outfox/aead.hpp"
#include "outfox/counters.hpp"
#include "outfox/kdf.hpp"
#include "outfox/lioness.hpp"

namespace outfox {

PacketContext PacketContext::make(KemId id, size_t k_bits, size_t layers, size_t msg_len,
                                  Bytes session_id) {
    const KemSuite& s = outfox::suite(id); // the free function, not the member
    return PacketContext{s, SizeProfile::make(s, k_bits, layers, msg_len),
                         std::move(session_id)};
}

Header Header::parse(const SizeProfile& profile, size_t layer, ByteView data) {
    if (data.size() != profile.header_len(layer)) throw Error("header length mismatch");
    size_t p = profile.p_bytes();
    size_t b = profile.beta_len(layer);
    Header h;
    h.kem_ct.assign(data.begin(), data.begin() + p);
    h.beta.assign(data.begin() + p, data.begin() + p + b);
    h.gamma.assign(data.begin() + p + b, data.end());
    return h;
}

Packet Packet::parse(const SizeProfile& profile, size_t layer, ByteView data) {
    if (data.size() != profile.packet_len(layer)) throw Error("packet length mismatch");
    size_t hl = profile.header_len(layer);
    Packet p;
    p.header = Header::parse(profile, layer, data.subspan(0, hl));
    p.payload.assign(data.begin() + hl, data.end());
    return p;
}

Surb Surb::parse(const SizeProfile& profile, ByteView data) {
    if (data.size() != profile.surb_len()) throw Error("surb length mismatch");
    size_t hl = profile.header_len(0);
    Surb s;
    s.header0 = Header::parse(profile, 0, data.subspan(0, hl));
    s.payload_key.assign(data.begin() + hl, data.end());
    return s;
}

namespace {

struct LayeredKeys {
    std::vector<Bytes> kem_cts;
    std::vector<LayerKeys> keys;
};

// One encapsulation and one KDF call per hop, outermost first.
LayeredKeys derive_route_keys(const PacketContext& ctx, const std::vector<RouteHop>& hops,
                              RandomSource& rng) {
    LayeredKeys out;
    out.kem_cts.reserve(hops.size());
    out.keys.reserve(hops.size());
    for (const auto& hop : hops) {
        Encapsulation enc = kem_encap(ctx.suite, hop.public_key, rng);
        KdfContext kctx{enc.ciphertext, hop.public_key, ctx.session_id};
        out.keys.push_back(derive_layer_keys(enc.shared_key, kctx,
                                             ctx.profile.header_key_len(),
                                             ctx.profile.payload_key_len()));
        zeroize(enc.shared_key);
        out.kem_cts.push_back(std::move(enc.ciphertext));
    }
    return out;
}

// Innermost-first header nesting shared by packet and surb creation.
std::vector<Header> build_headers(const PacketContext& ctx, const std::vector<RouteHop>& hops,
                                  const LayeredKeys& lk) {
    const SizeProfile& pr = ctx.profile;
    size_t l = pr.l();
    std::vector<Header> headers(hops.size());

    Bytes inner_pt = encode_terminal(pr, hops[l].routing);
    Sealed sealed = aead_seal(lk.keys[l].header_key, inner_pt, pr.tag_len());
    headers[l] = Header{lk.kem_cts[l], std::move(sealed.ciphertext), std::move(sealed.tag)};

    for (size_t idx = l; idx-- > 0;) {
        Bytes pt = concat({encode_next_hop(pr, hops[idx].routing), headers[idx + 1].to_bytes()});
        Sealed s = aead_seal(lk.keys[idx].header_key, pt, pr.tag_len());
        headers[idx] = Header{lk.kem_cts[idx], std::move(s.ciphertext), std::move(s.tag)};
    }
    return headers;
}

std::vector<RouteHop> full_route(const PacketContext& ctx, const std::vector<RouteHop>& route,
                                 const RouteHop& terminal) {
    if (route.size() != ctx.profile.l()) throw Error("route length mismatch");
    std::vector<RouteHop> hops = route;
    hops.push_back(terminal);
    for (const auto& h : hops)
        if (h.public_key.size() != ctx.suite.public_key_len)
            throw Error("hop public key length mismatch");
    return hops;
}

} // namespace

Packet packet_create(const PacketContext& ctx, const std::vector<RouteHop>& route,
                     ByteView msg, const RouteHop& receiver_info,
                     const std::optional<Surb>& surb, RandomSource& rng,
                     CreateTrace* trace) {
    const SizeProfile& pr = ctx.profile;
    if (msg.size() != pr.msg_len) throw Error("message not in message space");

    RouteHop terminal = receiver_info;
    if (surb) {
        if (!std::holds_alternative<Terminal>(terminal.routing))
            throw Error("reply-enabled packets need Terminal receiver routing");
    } else {
        terminal.routing = NoRoute{};
    }
    std::vector<RouteHop> hops = full_route(ctx, route, terminal);
    size_t l = pr.l();

    LayeredKeys lk = derive_route_keys(ctx, hops, rng);
    std::vector<Header> headers = build_headers(ctx, hops, lk);

    Bytes surb_field = surb ? surb->to_bytes() : zeros(pr.surb_len());
    Bytes plaintext = concat({zeros(pr.k_bytes()), surb_field, msg});
    std::vector<Bytes> payloads(hops.size());
    payloads[l] = se_encrypt(lk.keys[l].payload_key, plaintext);
    for (size_t idx = l; idx-- > 0;)
        payloads[idx] = se_encrypt(lk.keys[idx].payload_key, payloads[idx + 1]);

    if (trace) {
        trace->layers.clear();
        for (size_t i = 0; i < hops.size(); ++i)
            trace->layers.push_back(Packet{headers[i], payloads[i]});
    }
    for (auto& k : lk.keys) {
        zeroize(k.header_key);
        zeroize(k.payload_key);
    }
    return Packet{std::move(headers[0]), std::move(payloads[0])};
}

ProcessResult packet_process(const PacketContext& ctx, const KemKeyPair& keys,
                             size_t layer, bool last_layer, const Packet& packet) {
    ++op_counters().packet_process;
    const SizeProfile& pr = ctx.profile;
    if (layer >= pr.layers || (last_layer != (layer == pr.l()))) return HeaderFail{};
    if (packet.header.kem_ct.size() != pr.p_bytes() ||
        packet.header.beta.size() != pr.beta_len(layer) ||
        packet.header.gamma.size() != pr.tag_len() ||
        packet.payload.size() != pr.payload_len())
        return HeaderFail{};

    auto shared = kem_decap(ctx.suite, keys.secret, packet.header.kem_ct);
    if (!shared) return HeaderFail{};
    KdfContext kctx{packet.header.kem_ct, keys.public_key, ctx.session_id};
    LayerKeys lk = derive_layer_keys(*shared, kctx, pr.header_key_len(), pr.payload_key_len());
    zeroize(*shared);

    auto opened = aead_open(lk.header_key, packet.header.beta, packet.header.gamma);
    zeroize(lk.header_key);
    if (!opened) {
        zeroize(lk.payload_key);
        return HeaderFail{};
    }

    Bytes inner_payload = se_decrypt(lk.payload_key, packet.payload);
    zeroize(lk.payload_key);

    if (!last_layer) {
        size_t kb = pr.k_bytes();
        if (opened->size() != kb + pr.header_len(layer + 1)) return HeaderFail{};
        auto routing = decode_next_hop(pr, ByteView(opened->data(), kb));
        if (!routing) return HeaderFail{};
        Packet inner;
        inner.header = Header::parse(pr, layer + 1, ByteView(*opened).subspan(kb));
        inner.payload = std::move(inner_payload);
        return Forward{std::move(inner), *routing};
    }

    auto routing = decode_terminal(pr, *opened);
    if (!routing) return HeaderFail{};

    size_t kb = pr.k_bytes();
    size_t sb = pr.surb_len();
    ByteView pad(inner_payload.data(), kb);
    ByteView surb_field(inner_payload.data() + kb, sb);
    ByteView msg(inner_payload.data() + kb + sb, pr.msg_len);

    if (std::holds_alternative<NoRoute>(*routing)) {
        if (!all_zero(pad) || !all_zero(surb_field)) return PayloadFail{};
        return Deliver{Bytes(msg.begin(), msg.end()), std::nullopt, *routing};
    }
    if (!all_zero(pad)) return PayloadFail{};
    return Deliver{Bytes(msg.begin(), msg.end()), Surb::parse(pr, surb_field), *routing};
}

SurbCreateResult surb_create(const PacketContext& ctx, const std::vector<RouteHop>& reply_route,
                             const RouteHop& sender_info, RandomSource& rng) {
    if (!std::holds_alternative<NoRoute>(sender_info.routing))
        throw Error("sender terminal routing must be None");
    std::vector<RouteHop> hops = full_route(ctx, reply_route, sender_info);
    size_t l = ctx.profile.l();

    LayeredKeys lk = derive_route_keys(ctx, hops, rng);
    std::vector<Header> headers = build_headers(ctx, hops, lk);

    SurbCreateResult out;
    out.id = SurbId{sha256(headers[l].to_bytes())};
    out.surb = Surb{std::move(headers[0]), lk.keys[l].payload_key};
    out.secrets.payload_keys.reserve(hops.size());
    for (auto& k : lk.keys) {
        out.secrets.payload_keys.push_back(std::move(k.payload_key));
        zeroize(k.header_key);
    }
    return out;
}

Packet surb_use(const PacketContext& ctx, const Surb& surb, ByteView msg) {
    const SizeProfile& pr = ctx.profile;
    if (msg.size() != pr.msg_len) throw Error("message not in message space");
    if (surb.payload_key.size() != pr.payload_key_len()) throw Error("surb key length mismatch");
    Bytes plaintext = concat({zeros(pr.k_bytes() + pr.surb_len()), msg});
    return Packet{surb.header0, se_encrypt(surb.payload_key, plaintext)};
}

bool surb_check(const Packet& packet, const SurbId& id) {
    return sha256(packet.header.to_bytes()) == id.digest;
}

std::optional<Bytes> surb_recover(const PacketContext& ctx, const Packet& packet,
                                  SurbSecrets& secrets) {
    const SizeProfile& pr = ctx.profile;
    if (secrets.payload_keys.size() != pr.layers) return std::nullopt;
    if (packet.payload.size() != pr.payload_len()) return std::nullopt;
    size_t l = pr.l();

    // Undo the hops' decryptions in reverse, then the receiver's encryption.
    Bytes payload = packet.payload;
    for (size_t i = l; i-- > 0;)
        payload = se_encrypt(secrets.payload_keys[i], payload);
    Bytes plain = se_decrypt(secrets.payload_keys[l], payload);
    secrets.wipe();

    size_t pad = pr.k_bytes() + pr.surb_len();
    if (!all_zero(ByteView(plain.data(), pad))) return std::nullopt;
    return Bytes(plain.begin() + pad, plain.end());
}

} // namespace outfox
