#pragma once

#include <limits>
#include <vector>

namespace hped {

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

/// Rectangular assignment: rows to distinct columns, maximizing the number
/// of matched rows and, among those, minimizing the summed cost. Entries
/// equal to kForbidden are not allowed. Returns the column per row or -1.
std::vector<int> min_cost_max_matching(const std::vector<std::vector<double>>& cost, std::size_t cols);

}  // namespace hped
