#pragma once

#include <cstdint>
#include <cstdlib>

namespace omlkit {

// Resource limits for the two unbounded searches. OMLKIT_BUDGET, when set,
// overrides both fields with a single value.
struct Budget {
  std::uint64_t enumeration_states = 2'000'000;
  std::uint64_t iso_backtracks = 10'000'000;

  static Budget from_env() {
    Budget b;
    if (const char* s = std::getenv("OMLKIT_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(s, &end, 10);
      if (end != s && v > 0) {
        b.enumeration_states = v;
        b.iso_backtracks = v;
      }
    }
    return b;
  }
};

}  // namespace omlkit
