#include "outfox/bench.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>

#include "outfox/packet.hpp"

namespace outfox {

namespace {

double median_us(std::vector<double>& samples) {
    std::sort(samples.begin(), samples.end());
    size_t n = samples.size();
    return n % 2 ? samples[n / 2] : (samples[n / 2 - 1] + samples[n / 2]) / 2.0;
}

} // namespace

BenchResult bench_packet_ops(KemId kem, size_t k_bits, size_t layers, size_t msg_len,
                             size_t iterations, uint64_t seed) {
    using clock = std::chrono::steady_clock;
    SeededRandom rng(seed);
    PacketContext ctx = PacketContext::make(kem, k_bits, layers, msg_len, rng.bytes(16));
    size_t kb = ctx.profile.k_bytes();

    BenchResult r{suite(kem).name, layers, msg_len, iterations, 0, 0, {}, {}};
    std::vector<double> create_samples, process_samples;
    create_samples.reserve(iterations);
    process_samples.reserve(iterations);

    for (size_t it = 0; it < iterations; ++it) {
        std::vector<KemKeyPair> keys;
        std::vector<RouteHop> route;
        for (size_t i = 0; i < layers - 1; ++i) {
            keys.push_back(kem_keygen(ctx.suite, rng));
            route.push_back(RouteHop{rng.bytes(kb), keys.back().public_key, NextHop{rng.bytes(kb)}});
        }
        KemKeyPair receiver = kem_keygen(ctx.suite, rng);
        RouteHop receiver_info{rng.bytes(kb), receiver.public_key, NoRoute{}};
        Bytes msg = rng.bytes(msg_len);

        reset_op_counters();
        auto t0 = clock::now();
        Packet packet = packet_create(ctx, route, msg, receiver_info, std::nullopt, rng);
        auto t1 = clock::now();
        if (it == 0) r.per_create = op_counters();
        create_samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());

        reset_op_counters();
        t0 = clock::now();
        ProcessResult res = packet_process(ctx, keys[0], 0, false, packet);
        t1 = clock::now();
        if (it == 0) r.per_process = op_counters();
        process_samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
        if (!std::holds_alternative<Forward>(res)) throw Error("benchmark packet failed to process");
    }

    r.create_us = median_us(create_samples);
    r.process_us = median_us(process_samples);
    return r;
}

std::string bench_to_json(const BenchResult& r) {
    nlohmann::json j{
        {"suite", r.suite},
        {"layers", r.layers},
        {"msg_len", r.msg_len},
        {"iterations", r.iterations},
        {"create_us", r.create_us},
        {"process_us", r.process_us},
        {"create_ops", {{"encap", r.per_create.kem_encap}, {"decap", r.per_create.kem_decap}}},
        {"process_ops", {{"encap", r.per_process.kem_encap}, {"decap", r.per_process.kem_decap}}},
    };
    return j.dump(2);
}

} // namespace outfox
