// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace ionload {

using Rng = std::mt19937_64;

/// Independent stream for (master_seed, stream_index, substream). The
/// seed_seq mixing is fully specified by the standard, so the engine state
/// is the same on every conforming platform.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index, std::uint32_t substream = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_index), static_cast<std::uint32_t>(stream_index >> 32),
                      substream};
    return Rng(seq);
}

/// Human-readable reproducibility token for a stream.
inline std::string seed_path(std::uint64_t master_seed, std::uint64_t stream_index)
{
    return std::to_string(master_seed) + "/" + std::to_string(stream_index);
}

}  // namespace ionload
