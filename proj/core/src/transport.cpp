#include "outfox/transport.hpp"

namespace outfox {

void Transport::attach(const Bytes& party, Receiver receiver) {
    receivers_[party] = std::move(receiver);
}

void Transport::send(const Bytes& from, const Bytes& to, const Bytes& payload) {
    if (!receivers_.count(from) || !receivers_.count(to)) throw Error("unknown party");

    for (auto it = hooks_.begin(); it != hooks_.end(); ++it) {
        if (it->second.target != to) continue;
        AdversaryHook hook = it->second;
        if (hook.one_shot) hooks_.erase(it);
        switch (hook.action) {
            case ChannelAction::Dropped:
                events_.push_back({from, to, payload.size(), ChannelAction::Dropped});
                return;
            case ChannelAction::Tampered: {
                Bytes mutated = payload;
                if (hook.byte_index < mutated.size()) mutated[hook.byte_index] ^= hook.xor_mask;
                events_.push_back({from, to, mutated.size(), ChannelAction::Tampered});
                receivers_[to](from, mutated);
                return;
            }
            case ChannelAction::Duplicated:
                events_.push_back({from, to, payload.size(), ChannelAction::Duplicated});
                receivers_[to](from, payload);
                break; // falls through to the normal delivery below
            case ChannelAction::Delivered:
                break;
        }
        break;
    }

    events_.push_back({from, to, payload.size(), ChannelAction::Delivered});
    receivers_[to](from, payload);
}

uint64_t Transport::install_hook(AdversaryHook hook) {
    uint64_t id = next_hook_++;
    hooks_[id] = std::move(hook);
    return id;
}

void Transport::remove_hook(uint64_t id) { hooks_.erase(id); }

} // namespace outfox
