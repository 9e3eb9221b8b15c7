#ifndef OUTFOX_PACKET_HPP
#define OUTFOX_PACKET_HPP

#include <optional>
#include <variant>
#include <vector>

#include "outfox/kem.hpp"
#include "outfox/routing.hpp"
#include "outfox/sizes.hpp"

namespace outfox {

/// Suite, sizes and session id shared by every packet operation of a run.
struct PacketContext {
    KemSuite suite;
    SizeProfile profile;
    Bytes session_id;

    static PacketContext make(KemId id, size_t k_bits, size_t layers, size_t msg_len,
                              Bytes session_id);
};

/// One layer's header: KEM ciphertext || AEAD ciphertext || tag, serialized
/// with no length prefixes. The layer index is contextual, never encoded.
struct Header {
    Bytes kem_ct;
    Bytes beta;
    Bytes gamma;

    Bytes to_bytes() const { return concat({kem_ct, beta, gamma}); }
    static Header parse(const SizeProfile& profile, size_t layer, ByteView data);
    bool operator==(const Header&) const = default;
};

struct Packet {
    Header header;
    Bytes payload;

    Bytes to_bytes() const { return concat({header.to_bytes(), payload}); }
    static Packet parse(const SizeProfile& profile, size_t layer, ByteView data);
    bool operator==(const Packet&) const = default;
};

struct Surb {
    Header header0;
    Bytes payload_key; // s_l^p, k bits

    Bytes to_bytes() const { return concat({header0.to_bytes(), payload_key}); }
    static Surb parse(const SizeProfile& profile, ByteView data);
};

/// SHA-256 digest of the innermost reply header h_l.
struct SurbId {
    Bytes digest;
    bool operator==(const SurbId&) const = default;
};

/// Payload keys s_0^p .. s_l^p in layer order. Consumed (zeroized) by a
/// successful recover.
struct SurbSecrets {
    std::vector<Bytes> payload_keys;

    SurbSecrets() = default;
    SurbSecrets(SurbSecrets&&) = default;
    SurbSecrets& operator=(SurbSecrets&&) = default;
    SurbSecrets(const SurbSecrets&) = delete;
    SurbSecrets& operator=(const SurbSecrets&) = delete;
    ~SurbSecrets() { wipe(); }
    void wipe() {
        for (auto& k : payload_keys) zeroize(k);
        payload_keys.clear();
    }
};

// ---- processing outcomes ----

struct HeaderFail {};  // top: wrong recipient or tampered c/beta/gamma
struct PayloadFail {}; // bottom: zero-padding check failed at the last layer
struct Forward {
    Packet packet;
    RoutingInfo routing; // NextHop
};
struct Deliver {
    Bytes msg;
    std::optional<Surb> surb;
    RoutingInfo routing; // Terminal or NoRoute
};

using ProcessResult = std::variant<HeaderFail, PayloadFail, Forward, Deliver>;

// ---- the six algorithms ----

/// Optional creation-time trace of every intermediate layer, used to check
/// the bitwise-unlinkability property.
struct CreateTrace {
    std::vector<Packet> layers; // layers[i] = packet as seen at layer i
};

Packet packet_create(const PacketContext& ctx, const std::vector<RouteHop>& route,
                     ByteView msg, const RouteHop& receiver_info,
                     const std::optional<Surb>& surb, RandomSource& rng,
                     CreateTrace* trace = nullptr);

ProcessResult packet_process(const PacketContext& ctx, const KemKeyPair& keys,
                             size_t layer, bool last_layer, const Packet& packet);

struct SurbCreateResult {
    Surb surb;
    SurbId id;
    SurbSecrets secrets;
};

SurbCreateResult surb_create(const PacketContext& ctx, const std::vector<RouteHop>& reply_route,
                             const RouteHop& sender_info, RandomSource& rng);

Packet surb_use(const PacketContext& ctx, const Surb& surb, ByteView msg);

bool surb_check(const Packet& packet, const SurbId& id);

std::optional<Bytes> surb_recover(const PacketContext& ctx, const Packet& packet,
                                  SurbSecrets& secrets);

} // namespace outfox

#endif
