#pragma once

#include <string_view>
#include <vector>

namespace finfield {

enum class Positivity { positive, weakly_positive, neither };

std::string_view to_string(Positivity p);

// Per-site positivity points: states whose probability (or conditional
// probability) stays positive under every boundary condition.
struct PositivityPointSet {
  std::vector<std::vector<int>> theta;  // per site, ascending

  bool all_nonempty() const {
    for (const auto& t : theta)
      if (t.empty()) return false;
    return true;
  }
};

struct PositivityReport {
  Positivity klass = Positivity::neither;
  PositivityPointSet points;
};

}  // namespace finfield
