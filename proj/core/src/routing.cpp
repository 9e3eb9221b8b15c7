#include "outfox/routing.hpp"

namespace outfox {

Bytes encode_next_hop(const SizeProfile& profile, const RoutingInfo& info) {
    const auto* hop = std::get_if<NextHop>(&info);
    if (!hop) throw Error("non-terminal layers carry NextHop routing");
    if (hop->party.size() != profile.k_bytes()) throw Error("party id must be k bits");
    return hop->party;
}

Bytes encode_terminal(const SizeProfile& profile, const RoutingInfo& info) {
    size_t kb = profile.k_bytes();
    Bytes out(3 * kb, 0);
    if (std::holds_alternative<NoRoute>(info)) return out;
    const auto* t = std::get_if<Terminal>(&info);
    if (!t) throw Error("terminal layer carries Terminal or None routing");
    if (t->exit_gateway.size() != kb || t->first_node.size() != kb)
        throw Error("party id must be k bits");
    std::copy(t->exit_gateway.begin(), t->exit_gateway.end(), out.begin());
    std::copy(t->first_node.begin(), t->first_node.end(), out.begin() + kb);
    out.back() = 0x01;
    return out;
}

std::optional<RoutingInfo> decode_next_hop(const SizeProfile& profile, ByteView data) {
    if (data.size() != profile.k_bytes()) return std::nullopt;
    return RoutingInfo{NextHop{Bytes(data.begin(), data.end())}};
}

std::optional<RoutingInfo> decode_terminal(const SizeProfile& profile, ByteView data) {
    size_t kb = profile.k_bytes();
    if (data.size() != 3 * kb) return std::nullopt;
    ByteView flag = data.subspan(2 * kb, kb);
    if (all_zero(flag)) {
        if (!all_zero(data.subspan(0, 2 * kb))) return std::nullopt;
        return RoutingInfo{NoRoute{}};
    }
    bool terminal_flag = all_zero(flag.subspan(0, kb - 1)) && flag.back() == 0x01;
    if (!terminal_flag) return std::nullopt;
    return RoutingInfo{Terminal{Bytes(data.begin(), data.begin() + kb),
                                Bytes(data.begin() + kb, data.begin() + 2 * kb)}};
}

} // namespace outfox
