#include "outfox/counters.hpp"

namespace outfox {

OpCounters& op_counters() {
    thread_local OpCounters counters;
    return counters;
}

void reset_op_counters() { op_counters() = OpCounters{}; }

} // namespace outfox
