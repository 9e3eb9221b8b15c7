#ifndef OUTFOX_TESTS_HELPERS_HPP
#define OUTFOX_TESTS_HELPERS_HPP

#include <deque>

#include "outfox/rng.hpp"

namespace outfox::testing {

/// Hands out preset byte strings in order, so a test can pin every random
/// draw an operation makes.
class FixedRandom final : public RandomSource {
  public:
    void push(Bytes b) { queue_.push_back(std::move(b)); }
    void fill(std::span<uint8_t> out) override {
        if (queue_.empty()) throw Error("FixedRandom exhausted");
        Bytes b = std::move(queue_.front());
        queue_.pop_front();
        if (b.size() != out.size()) throw Error("FixedRandom draw size mismatch");
        std::copy(b.begin(), b.end(), out.begin());
    }

  private:
    std::deque<Bytes> queue_;
};

} // namespace outfox::testing

#endif
