#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace dygad {

// Error taxonomy mirrors the CLI exit-code contract:
// IoError -> 1, ConfigError -> 2, NumericError -> 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Process-wide worker cap (set from --threads, default 1).
int& worker_threads();

// Runs body(begin, end) over a row partition of [0, n). Each index is
// handled by exactly one worker, so floating-point results do not depend
// on the thread count.
void parallel_for(int n, const std::function<void(int, int)>& body);

// Deterministic per-purpose RNG stream derived from one master seed.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace dygad
