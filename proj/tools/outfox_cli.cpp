// Command-line front end: key generation, size tables, scenario simulation,
// micro-benchmarks and deterministic test vectors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "outfox/bench.hpp"
#include "outfox/keyfile.hpp"
#include "outfox/mixnet.hpp"
#include "outfox/packet.hpp"

using namespace outfox;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAbort = 1;
constexpr int kExitUsage = 2;

KemId parse_suite(const std::string& name) {
    auto id = suite_by_name(name);
    if (!id) throw Error("unknown suite: " + name);
    return *id;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

// ---- keygen ----

int cmd_keygen(const std::string& suite_name, const std::string& out_prefix,
               std::optional<uint64_t> seed, bool allow_test) {
    KemId id = parse_suite(suite_name);
    if (id == KemId::TESTKEM && !allow_test) {
        std::cerr << "testkem offers no security; pass --allow-test to use it anyway\n";
        return kExitUsage;
    }
    std::unique_ptr<RandomSource> rng;
    if (seed)
        rng = std::make_unique<SeededRandom>(*seed);
    else
        rng = std::make_unique<SystemRandom>();
    KemKeyPair kp = kem_keygen(suite(id), *rng);
    write_key_file(out_prefix + ".pk", KeyRecord{id, false, kp.public_key});
    write_key_file(out_prefix + ".sk", KeyRecord{id, true, kp.secret});
    std::cout << "wrote " << out_prefix << ".pk (" << kp.public_key.size() << " bytes) and "
              << out_prefix << ".sk (" << kp.secret.size() << " bytes)\n";
    return kExitOk;
}

// ---- sizes ----

int cmd_sizes(const std::string& suite_name, size_t k_bits, size_t layers, size_t msg_len,
              bool as_json) {
    KemId id = parse_suite(suite_name);
    SizeProfile profile = SizeProfile::make(suite(id), k_bits, layers, msg_len);
    auto rows = layer_sizes(profile);
    if (as_json) {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"layer", r.layer},
                           {"header", r.header},
                           {"payload", r.payload},
                           {"packet", r.packet}});
        json out{{"suite", suite(id).name}, {"k_bits", k_bits},   {"layers", layers},
                 {"msg_len", msg_len},      {"surb", profile.surb_len()}, {"per_layer", arr}};
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "suite " << suite(id).name << "  k=" << k_bits << "  layers=" << layers
              << "  msg=" << msg_len << " bytes\n";
    std::cout << "layer  header  payload  packet\n";
    for (const auto& r : rows)
        std::cout << r.layer << "      " << r.header << "     " << r.payload << "     "
                  << r.packet << "\n";
    std::cout << "surb   " << profile.surb_len() << " bytes\n";
    return kExitOk;
}

// ---- simulate ----

int cmd_simulate(const std::string& topology_path, const std::string& scenario_path,
                 const std::string& suite_name, size_t k_bits, size_t msg_len, uint64_t seed,
                 const std::string& out_path) {
    KemId id = parse_suite(suite_name);
    Topology topology = Topology::from_json(slurp(topology_path), k_bits);
    RunLog log = run_scenario(topology, slurp(scenario_path), id, k_bits, msg_len, seed);
    std::string jsonl = log.to_jsonl();
    if (out_path.empty())
        std::cout << jsonl;
    else
        spill(out_path, jsonl);
    return log.aborted ? kExitAbort : kExitOk;
}

// ---- bench ----

int cmd_bench(const std::string& suite_name, size_t k_bits, size_t layers, size_t msg_len,
              size_t iters, uint64_t seed, bool as_json) {
    KemId id = parse_suite(suite_name);
    BenchResult r = bench_packet_ops(id, k_bits, layers, msg_len, iters, seed);
    if (as_json)
        std::cout << bench_to_json(r) << "\n";
    else
        std::cout << r.suite << " layers=" << r.layers << " create " << r.create_us
                  << " us (" << r.per_create.kem_encap << " encaps), process " << r.process_us
                  << " us (" << r.per_process.kem_decap << " decap)\n";
    if (layers == 5 && r.process_us >= r.create_us) {
        std::cerr << "expected per-hop processing to beat packet creation at five layers\n";
        return kExitAbort;
    }
    return kExitOk;
}

// ---- vectors ----

// Every field of a vector is derived from its seed, so a checker only needs
// {params, seed} to rebuild the packet and compare against expected_packet_hex.
json make_vector(size_t k_bits, size_t layers, size_t msg_len, uint64_t seed) {
    SeededRandom rng(seed);
    PacketContext ctx = PacketContext::make(KemId::TESTKEM, k_bits, layers, msg_len,
                                            rng.bytes(16));
    size_t kb = ctx.profile.k_bytes();
    std::vector<RouteHop> route;
    json route_json = json::array();
    for (size_t i = 0; i < layers - 1; ++i) {
        KemKeyPair kp = kem_keygen(ctx.suite, rng);
        RouteHop hop{rng.bytes(kb), kp.public_key, NextHop{rng.bytes(kb)}};
        route_json.push_back({{"party", to_hex(hop.party)},
                              {"pk", to_hex(hop.public_key)},
                              {"next", to_hex(std::get<NextHop>(hop.routing).party)}});
        route.push_back(std::move(hop));
    }
    KemKeyPair receiver = kem_keygen(ctx.suite, rng);
    RouteHop receiver_info{rng.bytes(kb), receiver.public_key, NoRoute{}};
    Bytes msg = rng.bytes(msg_len);
    Packet packet = packet_create(ctx, route, msg, receiver_info, std::nullopt, rng);
    return json{{"suite", "testkem"},
                {"k_bits", k_bits},
                {"layers", layers},
                {"msg_len", msg_len},
                {"seed", seed},
                {"session_id", to_hex(ctx.session_id)},
                {"route", route_json},
                {"msg", to_hex(msg)},
                {"expected_packet_hex", to_hex(packet.to_bytes())}};
}

int cmd_vector_emit(size_t k_bits, size_t layers, size_t msg_len, uint64_t seed, size_t count,
                    const std::string& out_path) {
    std::ostringstream out;
    for (size_t i = 0; i < count; ++i)
        out << make_vector(k_bits, layers, msg_len, seed + i).dump() << "\n";
    if (out_path.empty())
        std::cout << out.str();
    else
        spill(out_path, out.str());
    return kExitOk;
}

int cmd_vector_check(const std::string& in_path) {
    std::istringstream lines(slurp(in_path));
    std::string line;
    size_t lineno = 0, checked = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.empty()) continue;
        json v = json::parse(line);
        if (v.at("suite").get<std::string>() != "testkem") {
            std::cerr << "line " << lineno << ": only testkem vectors are reproducible\n";
            return kExitUsage;
        }
        size_t k_bits = v.at("k_bits").get<size_t>();
        size_t layers = v.at("layers").get<size_t>();
        size_t msg_len = v.at("msg_len").get<size_t>();
        uint64_t seed = v.at("seed").get<uint64_t>();
        json rebuilt = make_vector(k_bits, layers, msg_len, seed);
        std::string expected = v.at("expected_packet_hex").get<std::string>();
        std::string actual = rebuilt.at("expected_packet_hex").get<std::string>();
        if (expected == actual) {
            ++checked;
            continue;
        }
        // Diagnose: the packet is header layer 0 || payload; report which
        // region diverges first.
        SizeProfile profile = SizeProfile::make(suite(KemId::TESTKEM), k_bits, layers, msg_len);
        Bytes got = from_hex(actual);
        Bytes want = from_hex(expected);
        size_t diff = 0;
        while (diff < std::min(got.size(), want.size()) && got[diff] == want[diff]) ++diff;
        size_t p = profile.p_bytes(), tag = profile.tag_len();
        std::string region;
        if (got.size() != want.size())
            region = "length";
        else if (diff < p)
            region = "kem ciphertext";
        else if (diff < profile.header_len(0) - tag)
            region = "header beta";
        else if (diff < profile.header_len(0))
            region = "header tag";
        else
            region = "payload";
        std::cerr << "line " << lineno << ": mismatch at byte " << diff << " (" << region
                  << ")\n";
        return kExitAbort;
    }
    std::cout << checked << " vectors ok\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"layered-encryption mixnet packet tool"};
    app.require_subcommand(1);

    std::string suite_name = "x25519", out_prefix, out_path, topology_path, scenario_path,
                in_path;
    size_t k_bits = 128, layers = 5, msg_len = 1024, iters = 20, count = 8;
    uint64_t seed = 1;
    std::optional<uint64_t> opt_seed;
    bool as_json = false, allow_test = false;

    auto* keygen = app.add_subcommand("keygen", "generate a KEM key pair");
    keygen->add_option("--suite", suite_name, "x25519 | mlkem768 | xwing | testkem");
    keygen->add_option("--out", out_prefix, "output path prefix")->required();
    keygen->add_option("--seed", opt_seed, "deterministic seed (omit for system randomness)");
    keygen->add_flag("--allow-test", allow_test, "permit the insecure test suite");

    auto* sizes = app.add_subcommand("sizes", "per-layer header/payload/packet sizes");
    sizes->add_option("--suite", suite_name);
    sizes->add_option("--k", k_bits, "security parameter in bits (128 or 256)");
    sizes->add_option("--layers", layers, "total layers, mixes plus gateway plus terminal");
    sizes->add_option("--msg-len", msg_len, "message length in bytes");
    sizes->add_flag("--json", as_json);

    auto* simulate = app.add_subcommand("simulate", "run a scripted mixnet scenario");
    simulate->add_option("--topology", topology_path)->required();
    simulate->add_option("--scenario", scenario_path)->required();
    simulate->add_option("--suite", suite_name);
    simulate->add_option("--k", k_bits);
    simulate->add_option("--msg-len", msg_len);
    simulate->add_option("--seed", seed);
    simulate->add_option("--out", out_path, "write the event log here instead of stdout");

    auto* bench = app.add_subcommand("bench", "time packet creation and per-hop processing");
    bench->add_option("--suite", suite_name);
    bench->add_option("--k", k_bits);
    bench->add_option("--layers", layers);
    bench->add_option("--msg-len", msg_len);
    bench->add_option("--iters", iters);
    bench->add_option("--seed", seed);
    bench->add_flag("--json", as_json);

    auto* vector = app.add_subcommand("vector", "deterministic packet test vectors");
    vector->require_subcommand(1);
    auto* emit = vector->add_subcommand("emit", "emit JSON-lines vectors (testkem)");
    emit->add_option("--k", k_bits);
    emit->add_option("--layers", layers);
    emit->add_option("--msg-len", msg_len);
    emit->add_option("--seed", seed);
    emit->add_option("--count", count);
    emit->add_option("--out", out_path);
    auto* check = vector->add_subcommand("check", "recompute and compare vectors");
    check->add_option("--in", in_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*keygen) return cmd_keygen(suite_name, out_prefix, opt_seed, allow_test);
        if (*sizes) return cmd_sizes(suite_name, k_bits, layers, msg_len, as_json);
        if (*simulate)
            return cmd_simulate(topology_path, scenario_path, suite_name, k_bits, msg_len, seed,
                                out_path);
        if (*bench) return cmd_bench(suite_name, k_bits, layers, msg_len, iters, seed, as_json);
        if (*emit) return cmd_vector_emit(k_bits, layers, msg_len, seed, count, out_path);
        if (*check) return cmd_vector_check(in_path);
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
