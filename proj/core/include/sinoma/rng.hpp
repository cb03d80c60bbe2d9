#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sinoma {

/// Engine used for every random draw in the simulator.
using Rng = std::mt19937_64;

/// Purpose tags for independent random streams within one trial.
enum class Stream : std::uint64_t {
  Placement = 0x706c6163,
  Activity = 0x61637476,  ///< activity, channel gains and symbols
  Noise = 0x6e6f6973,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Fold a path of labels into a seed: mix64(... mix64(mix64(base) ^ p0) ^ p1 ...).
/// Every trial and every purpose inside it owns a distinct stream, so results
/// do not depend on the order in which trials are executed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Engine for stream `s` of the trial keyed by `trial_seed`.
Rng make_rng(std::uint64_t trial_seed, Stream s);

}  // namespace sinoma
