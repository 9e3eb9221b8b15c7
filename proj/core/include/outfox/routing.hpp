#ifndef OUTFOX_ROUTING_HPP
#define OUTFOX_ROUTING_HPP

#include <optional>
#include <variant>

#include "outfox/bytes.hpp"
#include "outfox/sizes.hpp"

namespace outfox {

/// Routing information carried inside a header layer.
/// NextHop occupies k bits; the innermost layer always occupies 3k bits:
/// id1 || id2 || flag. A zero flag block means None, a 0..01 flag block
/// means Terminal(exit_gateway = id1, first_node = id2). Any other flag
/// value fails parsing.
struct NextHop {
    Bytes party; // k bits
    bool operator==(const NextHop&) const = default;
};
struct Terminal {
    Bytes exit_gateway; // k bits
    Bytes first_node;   // k bits
    bool operator==(const Terminal&) const = default;
};
struct NoRoute {
    bool operator==(const NoRoute&) const = default;
};

using RoutingInfo = std::variant<NextHop, Terminal, NoRoute>;

Bytes encode_next_hop(const SizeProfile& profile, const RoutingInfo& info);
Bytes encode_terminal(const SizeProfile& profile, const RoutingInfo& info);

std::optional<RoutingInfo> decode_next_hop(const SizeProfile& profile, ByteView data);
std::optional<RoutingInfo> decode_terminal(const SizeProfile& profile, ByteView data);

/// One hop of a route: the processing party, its KEM public key, and the
/// routing info its layer reveals.
struct RouteHop {
    Bytes party;
    Bytes public_key;
    RoutingInfo routing;
};

} // namespace outfox

#endif
