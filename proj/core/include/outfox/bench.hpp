#ifndef OUTFOX_BENCH_HPP
#define OUTFOX_BENCH_HPP

#include <string>

#include "outfox/counters.hpp"
#include "outfox/kem.hpp"

namespace outfox {

/// Wall-clock medians plus per-call KEM operation counts for the two hot
/// operations, measured over a fresh random route each iteration.
struct BenchResult {
    std::string suite;
    size_t layers;
    size_t msg_len;
    size_t iterations;
    double create_us;  // median per packet built
    double process_us; // median per layer processed (first hop)
    OpCounters per_create;
    OpCounters per_process;
};

BenchResult bench_packet_ops(KemId kem, size_t k_bits, size_t layers, size_t msg_len,
                             size_t iterations, uint64_t seed);

std::string bench_to_json(const BenchResult& r);

} // namespace outfox

#endif
