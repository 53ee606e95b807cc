#include "rrkit/reduction.hpp"

#include <numbers>

namespace rrkit {

DistanceEstimate empirical_tv_distance(std::span<const std::uint64_t> a,
                                       std::span<const std::uint64_t> b, std::size_t max_cells) {
  if (a.size() != b.size() || a.empty())
    throw ArityError("distance estimate needs two non-empty samples of equal size");
  if (max_cells == 0) throw ArityError("distance estimate needs at least one cell");

  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> hist;
  for (auto h : a) ++hist[h].first;
  for (auto h : b) ++hist[h].second;

  DistanceEstimate est;
  if (hist.size() > max_cells) {
    std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> buckets;
    for (const auto& [h, c] : hist) {
      auto& cell = buckets[splitmix64(h) % max_cells];
      cell.first += c.first;
      cell.second += c.second;
    }
    hist = std::move(buckets);
    est.projected = true;
  }

  std::size_t diff = 0;
  for (const auto& [h, c] : hist) diff += c.first > c.second ? c.first - c.second : c.second - c.first;
  const double n = static_cast<double>(a.size());
  est.distance = 0.5 * static_cast<double>(diff) / n;
  est.cells = est.projected ? max_cells : hist.size();
  est.noise_floor = std::sqrt(static_cast<double>(est.cells) / (std::numbers::pi * n));
  return est;
}

}  // namespace rrkit
