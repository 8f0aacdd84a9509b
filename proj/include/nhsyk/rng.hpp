// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace nhsyk {

/// splitmix64 finalizer; used to derive independent per-realization streams
/// from (master_seed, realization_index) without any shared RNG state.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream split: the generator for realization `index` is a
/// pure function of (master_seed, index), so ensembles are reproducible and
/// order-independent under parallel execution.
inline std::mt19937_64 realization_stream(std::uint64_t master_seed,
                                          std::uint64_t index) {
    const std::uint64_t s = mix64(mix64(master_seed) ^ mix64(index + 0x6a09e667f3bcc909ULL));
    return std::mt19937_64(s);
}

/// Named sub-stream (e.g. for reference-ensemble sampling keyed by class tag).
inline std::mt19937_64 tagged_stream(std::uint64_t master_seed,
                                     std::uint64_t tag,
                                     std::uint64_t index) {
    return realization_stream(mix64(master_seed) ^ mix64(tag), index);
}

}  // namespace nhsyk
