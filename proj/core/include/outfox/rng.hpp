#ifndef OUTFOX_RNG_HPP
#define OUTFOX_RNG_HPP

#include <cstdint>
#include <span>

#include "outfox/bytes.hpp"

namespace outfox {

/// Caller-supplied randomness. Implementations are not thread-safe;
/// give each thread its own instance.
class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    Bytes bytes(size_t n) {
        Bytes b(n);
        fill(b);
        return b;
    }
};

class SystemRandom final : public RandomSource {
  public:
    void fill(std::span<uint8_t> out) override;
};

/// Deterministic ChaCha20 keystream seeded from an arbitrary byte string.
class SeededRandom final : public RandomSource {
  public:
    explicit SeededRandom(ByteView seed);
    explicit SeededRandom(uint64_t seed);
    void fill(std::span<uint8_t> out) override;

  private:
    Bytes key_;
    uint64_t counter_ = 0;
};

} // namespace outfox

#endif
