#pragma once

#include <cstdint>
#include <vector>

namespace scene::data {

/// Mini-batch index order for one epoch. The permutation is a pure function
/// of (seed, epoch); the final short batch is kept.
std::vector<std::vector<std::size_t>> batch_indices(std::size_t n, int batch_size,
                                                    std::uint64_t seed, int epoch);

}  // namespace scene::data
