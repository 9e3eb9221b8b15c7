#include "mlkem768.hpp"

#include <array>
#include <cstring>
#include <openssl/evp.h>

namespace outfox::mlkem768 {

namespace {

constexpr int N = 256;
constexpr int Q = 3329;
constexpr int K = 3;
constexpr int ETA1 = 2;
constexpr int ETA2 = 2;
constexpr int DU = 10;
constexpr int DV = 4;

using Poly = std::array<int16_t, N>;
using PolyVec = std::array<Poly, K>;

// ---- hashes (OpenSSL EVP) ----

Bytes digest(const EVP_MD* md, ByteView data, size_t out_len, bool xof) {
    Bytes out(out_len);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw Error("EVP_MD_CTX_new failed");
    bool ok = EVP_DigestInit_ex(ctx, md, nullptr) == 1 &&
              EVP_DigestUpdate(ctx, data.data(), data.size()) == 1;
    if (ok) {
        if (xof)
            ok = EVP_DigestFinalXOF(ctx, out.data(), out.size()) == 1;
        else {
            unsigned int n = 0;
            ok = EVP_DigestFinal_ex(ctx, out.data(), &n) == 1 && n == out_len;
        }
    }
    EVP_MD_CTX_free(ctx);
    if (!ok) throw Error("digest failed");
    return out;
}

Bytes sha3_512(ByteView d) { return digest(EVP_sha3_512(), d, 64, false); }
Bytes shake256(ByteView d, size_t n) { return digest(EVP_shake256(), d, n, true); }
Bytes shake128(ByteView d, size_t n) { return digest(EVP_shake128(), d, n, true); }

// ---- modular arithmetic ----

inline int16_t reduce(int32_t x) {
    int16_t r = static_cast<int16_t>(x % Q);
    return r < 0 ? static_cast<int16_t>(r + Q) : r;
}

inline int16_t mul(int16_t a, int16_t b) {
    return reduce(static_cast<int32_t>(a) * b);
}

int bitrev7(int i) {
    int r = 0;
    for (int b = 0; b < 7; ++b)
        if (i & (1 << b)) r |= 1 << (6 - b);
    return r;
}

struct Tables {
    std::array<int16_t, 128> zetas;       // 17^bitrev7(i)
    std::array<int16_t, 128> base_zetas;  // 17^(2*bitrev7(i)+1)
    Tables() {
        std::array<int16_t, 256> pow;
        pow[0] = 1;
        for (int i = 1; i < 256; ++i) pow[i] = mul(pow[i - 1], 17);
        for (int i = 0; i < 128; ++i) {
            zetas[i] = pow[bitrev7(i)];
            base_zetas[i] = pow[(2 * bitrev7(i) + 1) % 256];
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

void ntt(Poly& f) {
    const auto& z = tables().zetas;
    int k = 1;
    for (int len = 128; len >= 2; len >>= 1) {
        for (int start = 0; start < N; start += 2 * len) {
            int16_t zeta = z[k++];
            for (int j = start; j < start + len; ++j) {
                int16_t t = mul(zeta, f[j + len]);
                f[j + len] = reduce(f[j] - t);
                f[j] = reduce(f[j] + t);
            }
        }
    }
}

void inv_ntt(Poly& f) {
    const auto& z = tables().zetas;
    int k = 127;
    for (int len = 2; len <= 128; len <<= 1) {
        for (int start = 0; start < N; start += 2 * len) {
            int16_t zeta = z[k--];
            for (int j = start; j < start + len; ++j) {
                int16_t t = f[j];
                f[j] = reduce(t + f[j + len]);
                f[j + len] = mul(zeta, reduce(f[j + len] - t));
            }
        }
    }
    for (auto& c : f) c = mul(c, 3303); // 128^-1 mod q
}

Poly base_mul(const Poly& a, const Poly& b) {
    const auto& g = tables().base_zetas;
    Poly c;
    for (int i = 0; i < 128; ++i) {
        int16_t a0 = a[2 * i], a1 = a[2 * i + 1];
        int16_t b0 = b[2 * i], b1 = b[2 * i + 1];
        c[2 * i] = reduce(static_cast<int32_t>(a0) * b0 +
                          static_cast<int32_t>(mul(a1, b1)) * g[i]);
        c[2 * i + 1] = reduce(static_cast<int32_t>(a0) * b1 +
                              static_cast<int32_t>(a1) * b0);
    }
    return c;
}

void add_into(Poly& a, const Poly& b) {
    for (int i = 0; i < N; ++i) a[i] = reduce(a[i] + b[i]);
}

// ---- sampling ----

Poly sample_ntt(ByteView rho, uint8_t j, uint8_t i) {
    Bytes input = concat({rho, ByteView(&j, 1), ByteView(&i, 1)});
    size_t len = 768;
    Bytes stream = shake128(input, len);
    Poly a;
    size_t pos = 0;
    int filled = 0;
    while (filled < N) {
        if (pos + 3 > stream.size()) {
            len *= 2; // XOF output is prefix-consistent; re-squeeze longer
            stream = shake128(input, len);
        }
        int d1 = stream[pos] | ((stream[pos + 1] & 0x0f) << 8);
        int d2 = (stream[pos + 1] >> 4) | (stream[pos + 2] << 4);
        pos += 3;
        if (d1 < Q) a[filled++] = static_cast<int16_t>(d1);
        if (d2 < Q && filled < N) a[filled++] = static_cast<int16_t>(d2);
    }
    return a;
}

Poly sample_cbd(int eta, ByteView seed, uint8_t nonce) {
    Bytes input = concat({seed, ByteView(&nonce, 1)});
    Bytes buf = shake256(input, static_cast<size_t>(64 * eta));
    Poly f;
    for (int i = 0; i < N; ++i) {
        int x = 0, y = 0;
        for (int j = 0; j < eta; ++j) {
            int bit = 2 * i * eta + j;
            x += (buf[bit >> 3] >> (bit & 7)) & 1;
            bit = (2 * i + 1) * eta + j;
            y += (buf[bit >> 3] >> (bit & 7)) & 1;
        }
        f[i] = reduce(x - y);
    }
    return f;
}

// ---- encoding and compression ----

void encode_bits(const Poly& f, int d, Bytes& out) {
    size_t base = out.size();
    out.resize(base + static_cast<size_t>(32 * d), 0);
    int bitpos = 0;
    for (int i = 0; i < N; ++i) {
        uint32_t v = static_cast<uint16_t>(f[i]);
        for (int b = 0; b < d; ++b) {
            if ((v >> b) & 1) out[base + (bitpos >> 3)] |= 1 << (bitpos & 7);
            ++bitpos;
        }
    }
}

Poly decode_bits(ByteView in, int d) {
    Poly f;
    int bitpos = 0;
    for (int i = 0; i < N; ++i) {
        uint32_t v = 0;
        for (int b = 0; b < d; ++b) {
            v |= static_cast<uint32_t>((in[bitpos >> 3] >> (bitpos & 7)) & 1) << b;
            ++bitpos;
        }
        f[i] = static_cast<int16_t>(v);
    }
    return f;
}

inline int16_t compress(int16_t x, int d) {
    uint32_t v = ((static_cast<uint32_t>(x) << d) + Q / 2) / Q;
    return static_cast<int16_t>(v & ((1u << d) - 1));
}

inline int16_t decompress(int16_t y, int d) {
    return static_cast<int16_t>((static_cast<uint32_t>(y) * Q + (1u << (d - 1))) >> d);
}

// ---- K-PKE ----

struct PkeKeys {
    Bytes ek; // encode12(t_hat) || rho
    Bytes dk; // encode12(s_hat)
};

void gen_matrix(std::array<PolyVec, K>& a, ByteView rho, bool transposed) {
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
            a[i][j] = transposed ? sample_ntt(rho, static_cast<uint8_t>(i), static_cast<uint8_t>(j))
                                 : sample_ntt(rho, static_cast<uint8_t>(j), static_cast<uint8_t>(i));
}

PolyVec matvec(const std::array<PolyVec, K>& a, const PolyVec& v) {
    PolyVec out{};
    for (int i = 0; i < K; ++i) {
        out[i].fill(0);
        for (int j = 0; j < K; ++j) add_into(out[i], base_mul(a[i][j], v[j]));
    }
    return out;
}

Poly dot(const PolyVec& a, const PolyVec& b) {
    Poly out{};
    out.fill(0);
    for (int i = 0; i < K; ++i) add_into(out, base_mul(a[i], b[i]));
    return out;
}

PkeKeys pke_keygen(ByteView d) {
    uint8_t kk = K;
    Bytes gin = concat({d, ByteView(&kk, 1)});
    Bytes g = sha3_512(gin);
    ByteView rho(g.data(), 32), sigma(g.data() + 32, 32);

    std::array<PolyVec, K> a;
    gen_matrix(a, rho, false);

    PolyVec s, e;
    uint8_t nonce = 0;
    for (int i = 0; i < K; ++i) s[i] = sample_cbd(ETA1, sigma, nonce++);
    for (int i = 0; i < K; ++i) e[i] = sample_cbd(ETA1, sigma, nonce++);
    for (int i = 0; i < K; ++i) ntt(s[i]);
    for (int i = 0; i < K; ++i) ntt(e[i]);

    PolyVec t = matvec(a, s);
    for (int i = 0; i < K; ++i) add_into(t[i], e[i]);

    PkeKeys out;
    for (int i = 0; i < K; ++i) encode_bits(t[i], 12, out.ek);
    out.ek.insert(out.ek.end(), rho.begin(), rho.end());
    for (int i = 0; i < K; ++i) encode_bits(s[i], 12, out.dk);
    return out;
}

Bytes pke_encrypt(ByteView ek, ByteView m, ByteView r) {
    PolyVec t;
    for (int i = 0; i < K; ++i)
        t[i] = decode_bits(ek.subspan(static_cast<size_t>(i) * 384, 384), 12);
    ByteView rho = ek.subspan(K * 384, 32);

    std::array<PolyVec, K> at;
    gen_matrix(at, rho, true);

    PolyVec y, e1;
    uint8_t nonce = 0;
    for (int i = 0; i < K; ++i) y[i] = sample_cbd(ETA1, r, nonce++);
    for (int i = 0; i < K; ++i) e1[i] = sample_cbd(ETA2, r, nonce++);
    Poly e2 = sample_cbd(ETA2, r, nonce++);
    for (int i = 0; i < K; ++i) ntt(y[i]);

    PolyVec u = matvec(at, y);
    for (int i = 0; i < K; ++i) inv_ntt(u[i]);
    for (int i = 0; i < K; ++i) add_into(u[i], e1[i]);

    Poly mu = decode_bits(m, 1);
    for (auto& c : mu) c = decompress(c, 1);

    Poly v = dot(t, y);
    inv_ntt(v);
    add_into(v, e2);
    add_into(v, mu);

    Bytes c;
    for (int i = 0; i < K; ++i) {
        Poly cu;
        for (int j = 0; j < N; ++j) cu[j] = compress(u[i][j], DU);
        encode_bits(cu, DU, c);
    }
    Poly cv;
    for (int j = 0; j < N; ++j) cv[j] = compress(v[j], DV);
    encode_bits(cv, DV, c);
    return c;
}

Bytes pke_decrypt(ByteView dk, ByteView c) {
    PolyVec u;
    for (int i = 0; i < K; ++i) {
        u[i] = decode_bits(c.subspan(static_cast<size_t>(i) * 32 * DU, 32 * DU), DU);
        for (auto& x : u[i]) x = decompress(x, DU);
    }
    Poly v = decode_bits(c.subspan(static_cast<size_t>(K) * 32 * DU, 32 * DV), DV);
    for (auto& x : v) x = decompress(x, DV);

    PolyVec s;
    for (int i = 0; i < K; ++i)
        s[i] = decode_bits(dk.subspan(static_cast<size_t>(i) * 384, 384), 12);

    for (int i = 0; i < K; ++i) ntt(u[i]);
    Poly w = dot(s, u);
    inv_ntt(w);
    for (int i = 0; i < N; ++i) w[i] = reduce(v[i] - w[i]);

    Poly mb;
    for (int i = 0; i < N; ++i) mb[i] = compress(w[i], 1);
    Bytes m;
    encode_bits(mb, 1, m);
    return m;
}

} // namespace

KeyPair keygen(ByteView seed) {
    if (seed.size() != keygen_seed_len) throw Error("mlkem768 keygen seed must be 64 bytes");
    ByteView d = seed.subspan(0, 32), z = seed.subspan(32, 32);
    PkeKeys pke = pke_keygen(d);
    KeyPair kp;
    kp.public_key = pke.ek;
    kp.secret_key = concat({pke.dk, pke.ek, sha3_256(pke.ek), z});
    return kp;
}

Encapsulated encap(ByteView public_key, ByteView m_seed) {
    if (public_key.size() != public_key_len) throw Error("mlkem768 public key length");
    if (m_seed.size() != encap_seed_len) throw Error("mlkem768 encap seed length");
    // Modulus check: the encoded t coefficients must be canonical.
    for (int i = 0; i < K; ++i) {
        Poly t = decode_bits(public_key.subspan(static_cast<size_t>(i) * 384, 384), 12);
        for (auto& x : t)
            if (x >= Q) throw Error("mlkem768 public key not canonical");
    }
    Bytes h = sha3_256(public_key);
    Bytes gin = concat({m_seed, h});
    Bytes g = sha3_512(gin);
    Encapsulated out;
    out.shared_key.assign(g.begin(), g.begin() + 32);
    out.ciphertext = pke_encrypt(public_key, m_seed, ByteView(g.data() + 32, 32));
    return out;
}

Bytes decap(ByteView secret_key, ByteView ciphertext) {
    if (secret_key.size() != secret_key_len) throw Error("mlkem768 secret key length");
    if (ciphertext.size() != ciphertext_len) throw Error("mlkem768 ciphertext length");
    ByteView dk_pke = secret_key.subspan(0, 1152);
    ByteView ek = secret_key.subspan(1152, public_key_len);
    ByteView h = secret_key.subspan(1152 + public_key_len, 32);
    ByteView z = secret_key.subspan(1152 + public_key_len + 32, 32);

    Bytes m = pke_decrypt(dk_pke, ciphertext);
    Bytes gin = concat({m, h});
    Bytes g = sha3_512(gin);
    Bytes key(g.begin(), g.begin() + 32);
    Bytes c2 = pke_encrypt(ek, m, ByteView(g.data() + 32, 32));

    Bytes jin = concat({z, ciphertext});
    Bytes reject = shake256(jin, 32);
    // Implicit rejection, branchless on the comparison result.
    bool same = ct_equal(c2, ciphertext);
    uint8_t mask = same ? 0x00 : 0xff;
    for (size_t i = 0; i < key.size(); ++i)
        key[i] = static_cast<uint8_t>((key[i] & ~mask) | (reject[i] & mask));
    return key;
}

Bytes sha3_256(ByteView data) { return digest(EVP_sha3_256(), data, 32, false); }

} // namespace outfox::mlkem768
