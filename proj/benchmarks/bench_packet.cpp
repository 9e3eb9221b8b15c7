#include <benchmark/benchmark.h>

#include "outfox/packet.hpp"

using namespace outfox;

namespace {

struct Fixture {
    PacketContext ctx;
    std::vector<KemKeyPair> keys;
    std::vector<RouteHop> route;
    RouteHop receiver_info;
    Bytes msg;
    SeededRandom rng{uint64_t{42}};

    Fixture(KemId kem, size_t layers)
        : ctx(PacketContext::make(kem, 128, layers, 1024, Bytes(16, 0x5a))) {
        size_t kb = ctx.profile.k_bytes();
        for (size_t i = 0; i + 1 < layers; ++i) {
            keys.push_back(kem_keygen(ctx.suite, rng));
            route.push_back({rng.bytes(kb), keys.back().public_key, NextHop{rng.bytes(kb)}});
        }
        keys.push_back(kem_keygen(ctx.suite, rng));
        receiver_info = {rng.bytes(kb), keys.back().public_key, NoRoute{}};
        msg = rng.bytes(ctx.profile.msg_len);
    }
};

void BM_PacketCreate(benchmark::State& state, KemId kem) {
    Fixture f(kem, static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        Packet p = packet_create(f.ctx, f.route, f.msg, f.receiver_info, std::nullopt, f.rng);
        benchmark::DoNotOptimize(p);
    }
}

void BM_PacketProcess(benchmark::State& state, KemId kem) {
    Fixture f(kem, static_cast<size_t>(state.range(0)));
    Packet p = packet_create(f.ctx, f.route, f.msg, f.receiver_info, std::nullopt, f.rng);
    for (auto _ : state) {
        ProcessResult r = packet_process(f.ctx, f.keys[0], 0, false, p);
        benchmark::DoNotOptimize(r);
    }
}

void BM_KemEncap(benchmark::State& state, KemId kem) {
    SeededRandom rng{uint64_t{7}};
    KemKeyPair kp = kem_keygen(suite(kem), rng);
    for (auto _ : state) {
        auto e = kem_encap(suite(kem), kp.public_key, rng);
        benchmark::DoNotOptimize(e);
    }
}

void BM_KemDecap(benchmark::State& state, KemId kem) {
    SeededRandom rng{uint64_t{7}};
    KemKeyPair kp = kem_keygen(suite(kem), rng);
    auto e = kem_encap(suite(kem), kp.public_key, rng);
    for (auto _ : state) {
        auto s = kem_decap(suite(kem), kp.secret, e.ciphertext);
        benchmark::DoNotOptimize(s);
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_PacketCreate, x25519, KemId::X25519)->Arg(3)->Arg(5)->Arg(7);
BENCHMARK_CAPTURE(BM_PacketCreate, mlkem768, KemId::MLKEM768)->Arg(5);
BENCHMARK_CAPTURE(BM_PacketCreate, xwing, KemId::XWING)->Arg(5);
BENCHMARK_CAPTURE(BM_PacketProcess, x25519, KemId::X25519)->Arg(3)->Arg(5)->Arg(7);
BENCHMARK_CAPTURE(BM_PacketProcess, mlkem768, KemId::MLKEM768)->Arg(5);
BENCHMARK_CAPTURE(BM_PacketProcess, xwing, KemId::XWING)->Arg(5);
BENCHMARK_CAPTURE(BM_KemEncap, x25519, KemId::X25519);
BENCHMARK_CAPTURE(BM_KemEncap, mlkem768, KemId::MLKEM768);
BENCHMARK_CAPTURE(BM_KemEncap, xwing, KemId::XWING);
BENCHMARK_CAPTURE(BM_KemDecap, x25519, KemId::X25519);
BENCHMARK_CAPTURE(BM_KemDecap, mlkem768, KemId::MLKEM768);
BENCHMARK_CAPTURE(BM_KemDecap, xwing, KemId::XWING);

BENCHMARK_MAIN();
