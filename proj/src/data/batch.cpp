#include "scene/data/batch.hpp"

#include <numeric>
#include <stdexcept>

#include "scene/rng.hpp"

namespace scene::data {

std::vector<std::vector<std::size_t>> batch_indices(std::size_t n, int batch_size,
                                                    std::uint64_t seed, int epoch) {
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(Rng::mix(seed, 0x9a7c0000ULL + static_cast<std::uint64_t>(epoch)));
  rng.shuffle(order.begin(), order.end());

  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(n, start + static_cast<std::size_t>(batch_size));
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

}  // namespace scene::data
