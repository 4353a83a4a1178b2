#pragma once

#include <span>

namespace sesample {

/// Area under the ROC curve as the Mann–Whitney statistic
/// (wins + 0.5 * ties) / (|pos| * |neg|), computed from midranks after one
/// sort. Throws DataError if either class is empty.
double auc(std::span<const double> pos, std::span<const double> neg);

}  // namespace sesample
