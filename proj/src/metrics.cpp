#include "sesample/metrics.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "sesample/error.hpp"

namespace sesample {

double auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw DataError("auc needs both positive and negative scores");

  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.emplace_back(s, true);
  for (double s : neg) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Ranks are 1-based; a tie group spanning [i, j) shares rank (i + j + 1) / 2.
  // Twice the rank sum stays integral, so the statistic is exact.
  double twice_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i + 1;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double twice_rank = static_cast<double>(i + j + 1);
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second) twice_rank_sum += twice_rank;
    }
    i = j;
  }
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  const double twice_u = twice_rank_sum - np * (np + 1.0);
  return twice_u / (2.0 * np * nn);
}

}  // namespace sesample
