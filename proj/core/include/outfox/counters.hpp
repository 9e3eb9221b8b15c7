#ifndef OUTFOX_COUNTERS_HPP
#define OUTFOX_COUNTERS_HPP

#include <cstdint>

namespace outfox {

/// Thread-local instrumentation counters for the public-key operations
/// and the shared packet-processing routine.
struct OpCounters {
    uint64_t kem_keygen = 0;
    uint64_t kem_encap = 0;
    uint64_t kem_decap = 0;
    uint64_t packet_process = 0;
};

OpCounters& op_counters();
void reset_op_counters();

} // namespace outfox

#endif
