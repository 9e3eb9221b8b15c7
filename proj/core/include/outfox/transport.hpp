#ifndef OUTFOX_TRANSPORT_HPP
#define OUTFOX_TRANSPORT_HPP

#include <functional>
#include <map>
#include <vector>

#include "outfox/bytes.hpp"

namespace outfox {

enum class ChannelAction { Delivered, Dropped, Tampered, Duplicated };

/// What the channel leaks: endpoints and length, never contents.
struct ChannelEvent {
    Bytes from;
    Bytes to;
    size_t length;
    ChannelAction action;
};

/// Adversary hook, fired pre-ingress at the recipient. Models a corrupt
/// endpoint mutating a packet before it enters the next party; the channel
/// itself cannot be tampered with through this interface.
struct AdversaryHook {
    Bytes target; // recipient whose ingress is intercepted
    ChannelAction action;
    size_t byte_index = 0; // Tampered only
    uint8_t xor_mask = 0;  // Tampered only
    bool one_shot = true;
};

/// Secure-channel emulation: confidential, integrity-protected pairwise
/// delivery. Synchronous FIFO dispatch into a recipient callback.
class Transport {
  public:
    using Receiver = std::function<void(const Bytes& from, const Bytes& payload)>;

    void attach(const Bytes& party, Receiver receiver);
    bool knows(const Bytes& party) const { return receivers_.count(party) != 0; }

    /// Throws on unknown endpoints.
    void send(const Bytes& from, const Bytes& to, const Bytes& payload);

    uint64_t install_hook(AdversaryHook hook);
    void remove_hook(uint64_t id);

    const std::vector<ChannelEvent>& events() const { return events_; }

  private:
    std::map<Bytes, Receiver> receivers_;
    std::map<uint64_t, AdversaryHook> hooks_;
    std::vector<ChannelEvent> events_;
    uint64_t next_hook_ = 1;
};

} // namespace outfox

#endif
